#include "radsim/channel.hpp"

#include <cmath>
#include <limits>

#include "radsim/errors.hpp"
#include "radsim/random.hpp"

namespace radsim {

void ChannelParams::validate() const {
  if (!(attenuation_db >= 0) || !std::isfinite(attenuation_db)) {
    throw ConfigError("attenuation_db must be a finite value >= 0");
  }
  if (snr_db.has_value() == noise_power.has_value()) {
    throw ConfigError("exactly one of snr_db or noise_power must be set");
  }
  if (snr_db && !std::isfinite(*snr_db)) throw ConfigError("snr_db must be finite");
  if (noise_power && !(*noise_power >= 0 && std::isfinite(*noise_power))) {
    throw ConfigError("noise_power must be a finite value >= 0");
  }
}

double ChannelParams::gain() const { return std::pow(10.0, -attenuation_db / 20.0); }

SampledSignal apply_channel(const SampledSignal& signal, const ChannelParams& params) {
  params.validate();
  if (signal.empty()) throw ShapeError("cannot pass an empty signal through the channel");

  SampledSignal out = signal;
  const double gain = params.gain();
  if (gain != 1.0) out.samples *= gain;

  const double variance =
      params.snr_db ? mean_power(out.samples) / std::pow(10.0, *params.snr_db / 10.0)
                    : *params.noise_power;
  if (variance > 0) {
    Rng rng(params.seed);
    VectorXd noise(out.size());
    fill_standard_normal(rng, noise);
    out.samples += std::sqrt(variance) * noise;
  }
  return out;
}

double measure_snr(const SampledSignal& clean, const SampledSignal& noisy) {
  if (clean.size() != noisy.size()) throw ShapeError("signal lengths differ");
  if (clean.sample_rate != noisy.sample_rate) throw ShapeError("sample rates differ");
  const double clean_energy = energy(clean.samples);
  if (!(clean_energy > 0)) throw ParameterError("clean signal has zero power");
  const double fit = clean.samples.dot(noisy.samples) / clean_energy;
  const VectorXd scaled = fit * clean.samples;
  const double residual = (noisy.samples - scaled).squaredNorm();
  if (residual == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(scaled.squaredNorm() / residual);
}

}  // namespace radsim
