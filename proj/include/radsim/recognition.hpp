#pragma once

// Defence side: feature extraction, a persisted library of template spectra,
// and a correlation classifier over that library.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radsim/signal.hpp"
#include "radsim/spectral.hpp"

namespace radsim {

struct FeatureVector {
  double rms_power{0};           // root mean square amplitude
  double zero_crossing_rate{0};  // sign changes per sample pair, [0, 1]
  double crest_factor{0};        // peak |x| / rms, 0 for silence
  double spectral_centroid{0};   // Hz, power weighted
  double spectral_bandwidth{0};  // Hz, sqrt of the power-weighted second central moment
  double spectral_entropy{0};    // Shannon entropy of the power distribution / ln(bins)
  std::vector<std::pair<double, double>> dominant_peaks;  // (Hz, magnitude / max), descending

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline constexpr std::size_t kMinFeatureSamples = 64;
inline constexpr std::size_t kMaxDominantPeaks = 5;
inline constexpr std::size_t kDefaultTemplateFftSize = 4096;
inline constexpr double kDefaultDetectionThreshold = 0.8;
inline constexpr const char* kUnknownLabel = "unknown";

FeatureVector extract_features(const SampledSignal& signal);

// Pretty-printed JSON object with one key per feature.
std::string to_json_text(const FeatureVector& features);

// Signal spectrum on an fft_size grid: the magnitude spectra of consecutive
// non-overlapping fft_size blocks are summed (a trailing partial block is
// dropped; a signal shorter than one block is zero-padded), then scaled to unit
// energy. All-zero input stays all-zero.
Spectrum unit_energy_spectrum(const SampledSignal& signal, std::size_t fft_size);

// Pearson correlation of the magnitude vectors. The two spectra must share a
// bin grid; zero-variance input raises ParameterError.
double spectral_correlation(const Spectrum& a, const Spectrum& b);

struct SignatureEntry {
  std::string label;
  FeatureVector features;
  Spectrum template_spectrum;  // unit energy
  std::map<std::string, std::string> metadata;
};

// Immutable value: add() returns a new library.
class SignatureLibrary {
 public:
  static constexpr int kFormatMajor = 1;
  static constexpr int kFormatMinor = 0;

  SignatureLibrary(std::size_t fft_size, double sample_rate);

  std::size_t fft_size() const { return fft_size_; }
  double sample_rate() const { return sample_rate_; }
  double bin_width() const { return sample_rate_ / static_cast<double>(fft_size_); }
  const std::vector<SignatureEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const SignatureEntry* find(const std::string& label) const;

  // Throws ConflictError on a duplicate label, ShapeError on a sample-rate mismatch.
  SignatureLibrary add(const std::string& label, const SampledSignal& signal,
                       std::map<std::string, std::string> metadata = {}) const;

  // Canonical JSON text; equal libraries serialise to identical bytes.
  std::string to_json_text() const;
  static SignatureLibrary from_json_text(const std::string& text);

 private:
  SignatureLibrary with_entry(SignatureEntry entry) const;

  std::size_t fft_size_;
  double sample_rate_;
  std::vector<SignatureEntry> entries_;
};

SignatureLibrary library_add(const SignatureLibrary& library, const std::string& label,
                             const SampledSignal& signal,
                             std::map<std::string, std::string> metadata = {});
void library_save(const SignatureLibrary& library, const std::filesystem::path& path);
SignatureLibrary library_load(const std::filesystem::path& path);

struct ClassificationResult {
  std::string label;  // kUnknownLabel when the best score is below threshold
  double score{0};    // best correlation, reported even when rejected
  std::optional<std::pair<std::string, double>> runner_up;
};

// Best-correlating template wins; equal scores resolve to the lexicographically
// smaller label.
ClassificationResult classify(const SampledSignal& signal, const SignatureLibrary& library,
                              double threshold = kDefaultDetectionThreshold);

}  // namespace radsim
