#pragma once

// End-to-end experiment: payload -> modulate -> (compose with carrier) ->
// (channel) -> spectrum / STFT / peaks -> (demodulate) -> (classify).
// Every intermediate artefact is written to the output directory and listed in
// report.json by file name, so two runs with the same configuration produce
// byte-identical directories.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radsim/channel.hpp"
#include "radsim/modulation.hpp"
#include "radsim/recognition.hpp"
#include "radsim/spectral.hpp"

namespace radsim {

struct ExperimentConfig {
  std::uint64_t seed{0};
  std::size_t payload_bits{64};
  double bit_rate{250.0};
  CarrierSpec carrier{};  // fc 2 kHz, A 1, theta0 0, fs 48 kHz
  Modulation modulation{Modulation::fsk};
  FskPhase fsk_phase{FskPhase::continuous};
  bool compose_with_carrier{true};
  std::optional<ChannelParams> channel;
  std::size_t stft_window{256};
  std::size_t stft_hop{128};
  Window stft_window_kind{Window::hann};
  double peak_threshold{0.1};
  std::optional<double> peak_min_separation;  // Hz; bit_rate / 2 when unset
  bool demodulate{false};
  std::optional<std::filesystem::path> library_path;
  double detection_threshold{kDefaultDetectionThreshold};
  std::filesystem::path output_dir{"experiment"};

  // Throws ConfigError (or the nested validators' errors) on an unrealisable setup.
  void validate() const;
  double min_separation() const { return peak_min_separation.value_or(bit_rate / 2.0); }

  // JSON mirror. Unknown keys are rejected; missing keys keep their defaults.
  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text(bool include_output_dir = true) const;
};

struct ExperimentReport {
  std::filesystem::path report_path;
  std::map<std::string, std::string> files;  // role -> file name inside output_dir
  std::vector<SpectralPeak> peaks;
  double fft_bin_width{0};
  std::optional<double> measured_snr_db;
  std::optional<std::size_t> bit_errors;
  std::optional<double> ber;
  std::optional<ClassificationResult> classification;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace radsim
