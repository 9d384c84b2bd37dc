#pragma once

// File formats shared by the pipeline and the CLI.
//
//   signals      X.json sidecar {data_file, format "f64le", length, sample_rate,
//                start_time} + X.f64 raw little-endian doubles; or X.csv with
//                an optional "# sample_rate=..." line and a "time,value" header
//   bit streams  text of '0'/'1', optional trailing newline
//   line codes   text of 'H'/'L' half-bit levels
//   curves       CSV "n,expected_infected"
//   spectra      CSV "frequency_hz,magnitude"
//   spectrogram  CSV, header "time_s,<bin frequencies...>", one row per frame
//   peaks        CSV "frequency_hz,magnitude,bin_index"
//
// Doubles are written in shortest round-trip form so every reader reproduces
// the written values bit for bit.

#include <filesystem>
#include <string>
#include <vector>

#include "radsim/codec.hpp"
#include "radsim/propagation.hpp"
#include "radsim/recognition.hpp"
#include "radsim/signal.hpp"
#include "radsim/spectral.hpp"

namespace radsim::io {

namespace fs = std::filesystem;

std::string format_double(double value);
double parse_double(std::string_view text, const std::string& location);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

// Dispatches on extension: ".csv" selects the CSV form, anything else the sidecar.
void write_signal(const fs::path& path, const SampledSignal& signal);
SampledSignal read_signal(const fs::path& path);

void write_signal_sidecar(const fs::path& sidecar, const SampledSignal& signal);
SampledSignal read_signal_sidecar(const fs::path& sidecar);
void write_signal_csv(const fs::path& path, const SampledSignal& signal);
SampledSignal read_signal_csv(const fs::path& path);

std::string bits_to_text(const BitStream& stream);
BitStream bits_from_text(std::string_view text, double bit_rate);
void write_bits(const fs::path& path, const BitStream& stream);
BitStream read_bits(const fs::path& path, double bit_rate);

std::string line_code_to_text(const LineCodeSignal& signal);

void write_curve_csv(const fs::path& path, const PropagationCurve& curve);
PropagationCurve read_curve_csv(const fs::path& path);
void write_spectrum_csv(const fs::path& path, const Spectrum& spectrum);
void write_spectrogram_csv(const fs::path& path, const Spectrogram& spectrogram);
void write_peaks_csv(const fs::path& path, const std::vector<SpectralPeak>& peaks);
std::vector<SpectralPeak> read_peaks_csv(const fs::path& path);

std::string classification_to_json_text(const ClassificationResult& result);

}  // namespace radsim::io
