#pragma once

// Carrier generation and binary keying (ASK / FSK / PSK) with coherent
// reference demodulators.
//
// Bit boundaries must fall on sample boundaries: sample_rate / bit_rate has to
// be an integer (within 1e-9) or the modulators throw ConfigError.

#include <cstddef>
#include <string>
#include <string_view>

#include "radsim/codec.hpp"
#include "radsim/signal.hpp"

namespace radsim {

struct CarrierSpec {
  double center_frequency{2000.0};  // Hz
  double amplitude{1.0};
  double initial_phase{0.0};        // radians
  double sample_rate{48000.0};      // Hz

  // Throws unless amplitude > 0 and sample_rate > 2 (center_frequency + max_deviation).
  void validate(double max_deviation = 0.0) const;
};

enum class Modulation { ask, fsk, psk };

Modulation parse_modulation(std::string_view name);
std::string to_string(Modulation m);

enum class FskPhase {
  continuous,  // phase carried across bit boundaries
  switched,    // each bit is s_b(t) = A cos(2 pi f_b t + theta0) on the absolute time axis
};

struct FskOptions {
  FskPhase phase = FskPhase::continuous;
};

std::size_t samples_per_bit(double sample_rate, double bit_rate);

// Frequencies used for bit 0 and bit 1: fc -+ bit_rate / 2.
double fsk_low_frequency(const CarrierSpec& spec, double bit_rate);
double fsk_high_frequency(const CarrierSpec& spec, double bit_rate);

// samples[k] = A cos(2 pi fc k / fs + theta0), round(duration * fs) samples.
SampledSignal generate_carrier(const CarrierSpec& spec, double duration);

SampledSignal ask_modulate(const BitStream& stream, const CarrierSpec& spec);
SampledSignal fsk_modulate(const BitStream& stream, const CarrierSpec& spec,
                           FskOptions options = {});
SampledSignal psk_modulate(const BitStream& stream, const CarrierSpec& spec);
SampledSignal modulate(Modulation scheme, const BitStream& stream, const CarrierSpec& spec,
                       FskOptions options = {});

// Sample-wise sum of carrier and modulated signal.
SampledSignal compose_emitted(const SampledSignal& carrier, const SampledSignal& modulated);

// Per bit, compares |<x, exp(-j 2 pi f0 t)>| against the f1 correlation; the
// larger magnitude wins and ties decode as 0.
BitStream fsk_demodulate(const SampledSignal& signal, const CarrierSpec& spec, double bit_rate,
                         std::size_t n_bits);

// Sign of the per-bit correlation with the carrier; strictly positive decodes as 1.
BitStream psk_demodulate(const SampledSignal& signal, const CarrierSpec& spec, double bit_rate,
                         std::size_t n_bits);

// Decodes 1 when the per-bit correlation with the carrier reaches
// threshold_fraction times the energy of a full carrier bit.
BitStream ask_demodulate(const SampledSignal& signal, const CarrierSpec& spec, double bit_rate,
                         std::size_t n_bits, double threshold_fraction = 0.5);

BitStream demodulate(Modulation scheme, const SampledSignal& signal, const CarrierSpec& spec,
                     double bit_rate, std::size_t n_bits);

}  // namespace radsim
