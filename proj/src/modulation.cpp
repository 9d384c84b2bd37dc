#include "radsim/modulation.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>

#include "radsim/errors.hpp"

namespace radsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double carrier_sample(const CarrierSpec& spec, Eigen::Index k) {
  return spec.amplitude *
         std::cos(kTwoPi * spec.center_frequency * (static_cast<double>(k) / spec.sample_rate) +
                  spec.initial_phase);
}

Eigen::Index checked_length(const BitStream& stream, const CarrierSpec& spec) {
  return static_cast<Eigen::Index>(stream.size() *
                                   samples_per_bit(spec.sample_rate, stream.bit_rate()));
}

void check_demod_input(const SampledSignal& signal, const CarrierSpec& spec, std::size_t n_bits,
                       std::size_t per_bit) {
  if (signal.sample_rate != spec.sample_rate) {
    throw ShapeError("signal sample rate differs from the carrier sample rate");
  }
  if (static_cast<std::size_t>(signal.size()) < n_bits * per_bit) {
    throw ShapeError("signal too short for " + std::to_string(n_bits) + " bits");
  }
}

}  // namespace

void CarrierSpec::validate(double max_deviation) const {
  if (!(sample_rate > 0) || !std::isfinite(sample_rate)) {
    throw ConfigError("sample_rate must be positive");
  }
  if (!(amplitude > 0) || !std::isfinite(amplitude)) throw ConfigError("amplitude must be positive");
  if (!(center_frequency >= 0) || !std::isfinite(center_frequency)) {
    throw ConfigError("center_frequency must be nonnegative");
  }
  if (!std::isfinite(initial_phase)) throw ConfigError("initial_phase must be finite");
  const double highest = center_frequency + max_deviation;
  if (!(sample_rate > 2.0 * highest)) {
    throw ConfigError("Nyquist violated: sample_rate " + num(sample_rate) +
                      " Hz must exceed twice the highest frequency " + num(highest) +
                      " Hz");
  }
}

Modulation parse_modulation(std::string_view name) {
  if (name == "ask") return Modulation::ask;
  if (name == "fsk") return Modulation::fsk;
  if (name == "psk") return Modulation::psk;
  throw ParameterError("unknown modulation '" + std::string(name) + "'");
}

std::string to_string(Modulation m) {
  switch (m) {
    case Modulation::ask: return "ask";
    case Modulation::fsk: return "fsk";
    case Modulation::psk: return "psk";
  }
  return "?";
}

std::size_t samples_per_bit(double sample_rate, double bit_rate) {
  if (!(bit_rate > 0) || !(sample_rate > 0)) throw ConfigError("rates must be positive");
  const double ratio = sample_rate / bit_rate;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9) {
    throw ConfigError("sample_rate / bit_rate = " + num(ratio) +
                      " is not an integer number of samples per bit");
  }
  return static_cast<std::size_t>(rounded);
}

double fsk_low_frequency(const CarrierSpec& spec, double bit_rate) {
  return spec.center_frequency - bit_rate / 2.0;
}

double fsk_high_frequency(const CarrierSpec& spec, double bit_rate) {
  return spec.center_frequency + bit_rate / 2.0;
}

SampledSignal generate_carrier(const CarrierSpec& spec, double duration) {
  spec.validate();
  if (!(duration > 0) || !std::isfinite(duration)) throw ParameterError("duration must be positive");
  const auto n = static_cast<Eigen::Index>(std::llround(duration * spec.sample_rate));
  VectorXd samples(n);
  for (Eigen::Index k = 0; k < n; ++k) samples[k] = carrier_sample(spec, k);
  return make_signal(spec.sample_rate, std::move(samples));
}

SampledSignal ask_modulate(const BitStream& stream, const CarrierSpec& spec) {
  spec.validate();
  const auto per_bit = static_cast<Eigen::Index>(samples_per_bit(spec.sample_rate, stream.bit_rate()));
  VectorXd samples = VectorXd::Zero(checked_length(stream, spec));
  for (std::size_t b = 0; b < stream.size(); ++b) {
    if (!stream[b]) continue;
    const Eigen::Index first = static_cast<Eigen::Index>(b) * per_bit;
    for (Eigen::Index k = first; k < first + per_bit; ++k) samples[k] = carrier_sample(spec, k);
  }
  return make_signal(spec.sample_rate, std::move(samples));
}

SampledSignal psk_modulate(const BitStream& stream, const CarrierSpec& spec) {
  spec.validate();
  const auto per_bit = static_cast<Eigen::Index>(samples_per_bit(spec.sample_rate, stream.bit_rate()));
  VectorXd samples(checked_length(stream, spec));
  for (std::size_t b = 0; b < stream.size(); ++b) {
    const double chip = stream[b] ? 1.0 : -1.0;
    const Eigen::Index first = static_cast<Eigen::Index>(b) * per_bit;
    for (Eigen::Index k = first; k < first + per_bit; ++k) samples[k] = chip * carrier_sample(spec, k);
  }
  return make_signal(spec.sample_rate, std::move(samples));
}

SampledSignal fsk_modulate(const BitStream& stream, const CarrierSpec& spec, FskOptions options) {
  const double rate = stream.bit_rate();
  spec.validate(rate / 2.0);
  const double f0 = fsk_low_frequency(spec, rate);
  const double f1 = fsk_high_frequency(spec, rate);
  if (f0 < 0) throw ConfigError("fc - bit_rate/2 is negative");
  const auto per_bit = static_cast<Eigen::Index>(samples_per_bit(spec.sample_rate, rate));
  VectorXd samples(checked_length(stream, spec));

  double phase = spec.initial_phase;  // phase at the start of the current bit
  for (std::size_t b = 0; b < stream.size(); ++b) {
    const double f = stream[b] ? f1 : f0;
    const Eigen::Index first = static_cast<Eigen::Index>(b) * per_bit;
    for (Eigen::Index i = 0; i < per_bit; ++i) {
      const Eigen::Index k = first + i;
      const double arg =
          options.phase == FskPhase::continuous
              ? phase + kTwoPi * f * (static_cast<double>(i) / spec.sample_rate)
              : kTwoPi * f * (static_cast<double>(k) / spec.sample_rate) + spec.initial_phase;
      samples[k] = spec.amplitude * std::cos(arg);
    }
    phase = std::fmod(phase + kTwoPi * f * (static_cast<double>(per_bit) / spec.sample_rate), kTwoPi);
  }
  return make_signal(spec.sample_rate, std::move(samples));
}

SampledSignal modulate(Modulation scheme, const BitStream& stream, const CarrierSpec& spec,
                       FskOptions options) {
  switch (scheme) {
    case Modulation::ask: return ask_modulate(stream, spec);
    case Modulation::fsk: return fsk_modulate(stream, spec, options);
    case Modulation::psk: return psk_modulate(stream, spec);
  }
  throw ParameterError("unknown modulation");
}

SampledSignal compose_emitted(const SampledSignal& carrier, const SampledSignal& modulated) {
  if (carrier.sample_rate != modulated.sample_rate) throw ShapeError("sample rates differ");
  if (carrier.size() != modulated.size()) throw ShapeError("signal lengths differ");
  return SampledSignal{carrier.sample_rate, carrier.samples + modulated.samples, carrier.start_time};
}

BitStream fsk_demodulate(const SampledSignal& signal, const CarrierSpec& spec, double bit_rate,
                         std::size_t n_bits) {
  const std::size_t per_bit = samples_per_bit(spec.sample_rate, bit_rate);
  check_demod_input(signal, spec, n_bits, per_bit);
  const double f0 = fsk_low_frequency(spec, bit_rate);
  const double f1 = fsk_high_frequency(spec, bit_rate);

  std::vector<std::uint8_t> bits(n_bits);
  for (std::size_t b = 0; b < n_bits; ++b) {
    std::complex<double> c0{}, c1{};
    for (std::size_t i = 0; i < per_bit; ++i) {
      const auto k = static_cast<Eigen::Index>(b * per_bit + i);
      const double t = static_cast<double>(k) / spec.sample_rate;
      const double x = signal.samples[k];
      c0 += x * std::polar(1.0, -kTwoPi * f0 * t);
      c1 += x * std::polar(1.0, -kTwoPi * f1 * t);
    }
    bits[b] = std::abs(c1) > std::abs(c0) ? 1 : 0;
  }
  return BitStream(std::move(bits), bit_rate);
}

BitStream psk_demodulate(const SampledSignal& signal, const CarrierSpec& spec, double bit_rate,
                         std::size_t n_bits) {
  const std::size_t per_bit = samples_per_bit(spec.sample_rate, bit_rate);
  check_demod_input(signal, spec, n_bits, per_bit);
  std::vector<std::uint8_t> bits(n_bits);
  for (std::size_t b = 0; b < n_bits; ++b) {
    double corr = 0;
    for (std::size_t i = 0; i < per_bit; ++i) {
      const auto k = static_cast<Eigen::Index>(b * per_bit + i);
      corr += signal.samples[k] * carrier_sample(spec, k);
    }
    bits[b] = corr > 0 ? 1 : 0;
  }
  return BitStream(std::move(bits), bit_rate);
}

BitStream ask_demodulate(const SampledSignal& signal, const CarrierSpec& spec, double bit_rate,
                         std::size_t n_bits, double threshold_fraction) {
  if (!(threshold_fraction > 0 && threshold_fraction <= 1)) {
    throw ParameterError("threshold_fraction must lie in (0, 1]");
  }
  const std::size_t per_bit = samples_per_bit(spec.sample_rate, bit_rate);
  check_demod_input(signal, spec, n_bits, per_bit);
  std::vector<std::uint8_t> bits(n_bits);
  for (std::size_t b = 0; b < n_bits; ++b) {
    double corr = 0;
    double reference = 0;
    for (std::size_t i = 0; i < per_bit; ++i) {
      const auto k = static_cast<Eigen::Index>(b * per_bit + i);
      const double c = carrier_sample(spec, k);
      corr += signal.samples[k] * c;
      reference += c * c;
    }
    bits[b] = corr >= threshold_fraction * reference ? 1 : 0;
  }
  return BitStream(std::move(bits), bit_rate);
}

BitStream demodulate(Modulation scheme, const SampledSignal& signal, const CarrierSpec& spec,
                     double bit_rate, std::size_t n_bits) {
  switch (scheme) {
    case Modulation::ask: return ask_demodulate(signal, spec, bit_rate, n_bits);
    case Modulation::fsk: return fsk_demodulate(signal, spec, bit_rate, n_bits);
    case Modulation::psk: return psk_demodulate(signal, spec, bit_rate, n_bits);
  }
  throw ParameterError("unknown modulation");
}

}  // namespace radsim
