#pragma once

// Magnitude spectra, short-time Fourier transforms and peak picking.
//
// Scaling convention (amplitude spectrum): with X the N-point DFT,
//   magnitude[0]     = |X[0]| / N
//   magnitude[N/2]   = |X[N/2]| / N        (N even)
//   magnitude[k]     = 2 |X[k]| / N        otherwise
// so a bin-aligned cosine of amplitude A reads A, i.e. |X[k]| = A N / 2 before
// normalisation. STFT frames divide by the window sum instead of N, which
// reduces to the same convention for the rectangular window.

#include <cstddef>
#include <string_view>
#include <vector>

#include "radsim/signal.hpp"

namespace radsim {

struct Spectrum {
  VectorXd bin_frequencies;  // k * bin_width, k = 0 .. fft_size / 2
  VectorXd magnitudes;
  double bin_width{0};
  double sample_rate{0};
  std::size_t fft_size{0};

  Eigen::Index size() const { return magnitudes.size(); }
  Eigen::Index bin_of(double frequency) const;  // nearest bin, clamped to the grid
};

enum class Window { rectangular, hann };

Window parse_window(std::string_view name);
std::string_view to_string(Window w);

// Periodic window of length n.
VectorXd make_window(Window w, Eigen::Index n);

struct Spectrogram {
  VectorXd frame_times;      // seconds, centre of each frame
  VectorXd bin_frequencies;
  Eigen::MatrixXd magnitudes;  // frames x bins
  std::size_t window_length{0};
  std::size_t hop{0};
  Window window{Window::hann};
};

struct SpectralPeak {
  double frequency{0};
  double magnitude{0};
  Eigen::Index bin_index{0};
};

// fft_size == 0 analyses the whole signal. Otherwise fft_size must be a power of
// two (or equal to the signal length); longer signals are truncated to the
// first fft_size samples and shorter ones are zero-padded.
Spectrum fft_magnitude(const SampledSignal& signal, std::size_t fft_size = 0);

// Sum over all N two-sided bins of |X[k]|^2 / N, recovered from the one-sided
// magnitudes. Equals the time-domain energy of the analysed block (Parseval).
double two_sided_energy(const Spectrum& spectrum);

Spectrogram stft(const SampledSignal& signal, std::size_t window_length = 256,
                 std::size_t hop = 128, Window window = Window::hann);

// Local maxima at or above relative_threshold * max(magnitudes), kept greedily in
// descending magnitude (ties: lower frequency first) while at least
// min_separation Hz from every peak already kept. Result sorted by frequency.
std::vector<SpectralPeak> find_peaks(const Spectrum& spectrum, double relative_threshold,
                                     double min_separation);

}  // namespace radsim
