#pragma once

#include <cstdint>
#include <optional>

#include "radsim/signal.hpp"

namespace radsim {

// Scalar attenuation followed by additive white Gaussian noise. Exactly one of
// snr_db (relative to the attenuated signal power) or noise_power (variance)
// must be set.
struct ChannelParams {
  double attenuation_db{0.0};
  std::optional<double> snr_db;
  std::optional<double> noise_power;
  std::uint64_t seed{0};

  void validate() const;
  double gain() const;  // 10^(-attenuation_db / 20)
};

SampledSignal apply_channel(const SampledSignal& signal, const ChannelParams& params);

// SNR of `noisy` against the least-squares scaled copy of `clean`, in dB.
// Returns +infinity when the residual is exactly zero.
double measure_snr(const SampledSignal& clean, const SampledSignal& noisy);

}  // namespace radsim
