#include "radsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "radsim/errors.hpp"

namespace radsim {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double one_sided_factor(Eigen::Index k, std::size_t n) {
  const bool nyquist = n % 2 == 0 && static_cast<std::size_t>(k) == n / 2;
  return (k == 0 || nyquist) ? 1.0 : 2.0;
}

// One-sided magnitudes of the DFT of `block`, divided by `norm`.
VectorXd one_sided(Eigen::FFT<double>& fft, const VectorXd& block, double norm) {
  const auto n = static_cast<std::size_t>(block.size());
  std::vector<std::complex<double>> input(n);
  for (std::size_t i = 0; i < n; ++i) input[i] = block[static_cast<Eigen::Index>(i)];
  std::vector<std::complex<double>> output;
  fft.fwd(output, input);
  const auto bins = static_cast<Eigen::Index>(n / 2 + 1);
  VectorXd mags(bins);
  for (Eigen::Index k = 0; k < bins; ++k) {
    mags[k] = one_sided_factor(k, n) * std::abs(output[static_cast<std::size_t>(k)]) / norm;
  }
  return mags;
}

VectorXd bin_grid(std::size_t n, double sample_rate) {
  const auto bins = static_cast<Eigen::Index>(n / 2 + 1);
  VectorXd f(bins);
  for (Eigen::Index k = 0; k < bins; ++k) f[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n);
  return f;
}

}  // namespace

Eigen::Index Spectrum::bin_of(double frequency) const {
  if (magnitudes.size() == 0) throw ShapeError("empty spectrum");
  const auto k = static_cast<Eigen::Index>(std::llround(frequency / bin_width));
  return std::clamp<Eigen::Index>(k, 0, magnitudes.size() - 1);
}

Window parse_window(std::string_view name) {
  if (name == "hann") return Window::hann;
  if (name == "rectangular") return Window::rectangular;
  throw ParameterError("unknown window '" + std::string(name) + "'");
}

std::string_view to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

VectorXd make_window(Window w, Eigen::Index n) {
  if (w == Window::rectangular) return VectorXd::Ones(n);
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return out;
}

Spectrum fft_magnitude(const SampledSignal& signal, std::size_t fft_size) {
  const auto length = static_cast<std::size_t>(signal.size());
  if (length < 2) throw ShapeError("spectrum needs at least 2 samples");
  const std::size_t n = fft_size == 0 ? length : fft_size;
  if (n < 2) throw ShapeError("fft_size must be at least 2");
  if (fft_size != 0 && fft_size != length && !is_power_of_two(fft_size)) {
    throw ParameterError("fft_size " + std::to_string(fft_size) + " is not a power of two");
  }

  VectorXd block = VectorXd::Zero(static_cast<Eigen::Index>(n));
  const auto copied = static_cast<Eigen::Index>(std::min(n, length));
  block.head(copied) = signal.samples.head(copied);

  Eigen::FFT<double> fft;
  Spectrum out;
  out.fft_size = n;
  out.sample_rate = signal.sample_rate;
  out.bin_width = signal.sample_rate / static_cast<double>(n);
  out.bin_frequencies = bin_grid(n, signal.sample_rate);
  out.magnitudes = one_sided(fft, block, static_cast<double>(n));
  return out;
}

double two_sided_energy(const Spectrum& spectrum) {
  const auto n = static_cast<double>(spectrum.fft_size);
  double total = 0;
  for (Eigen::Index k = 0; k < spectrum.magnitudes.size(); ++k) {
    const double factor = one_sided_factor(k, spectrum.fft_size);
    const double raw = spectrum.magnitudes[k] * n / factor;  // |X[k]|
    // Interior bins stand for the mirrored pair k and N - k.
    total += (factor == 2.0 ? 2.0 : 1.0) * raw * raw;
  }
  return total / n;
}

Spectrogram stft(const SampledSignal& signal, std::size_t window_length, std::size_t hop,
                 Window window) {
  if (hop < 1) throw ParameterError("hop must be >= 1");
  if (window_length < 2) throw ShapeError("window_length must be at least 2");
  const auto length = static_cast<std::size_t>(signal.size());
  if (window_length > length) throw ShapeError("window longer than signal");

  const std::size_t frames = (length - window_length) / hop + 1;
  const auto wlen = static_cast<Eigen::Index>(window_length);
  const VectorXd taper = make_window(window, wlen);
  const double norm = taper.sum();

  Spectrogram out;
  out.window_length = window_length;
  out.hop = hop;
  out.window = window;
  out.bin_frequencies = bin_grid(window_length, signal.sample_rate);
  out.frame_times.resize(static_cast<Eigen::Index>(frames));
  out.magnitudes.resize(static_cast<Eigen::Index>(frames), out.bin_frequencies.size());

  Eigen::FFT<double> fft;
  for (std::size_t f = 0; f < frames; ++f) {
    const auto start = static_cast<Eigen::Index>(f * hop);
    const VectorXd block = signal.samples.segment(start, wlen).cwiseProduct(taper);
    out.magnitudes.row(static_cast<Eigen::Index>(f)) = one_sided(fft, block, norm).transpose();
    out.frame_times[static_cast<Eigen::Index>(f)] =
        signal.start_time + (static_cast<double>(start) + static_cast<double>(window_length) / 2.0) /
                                signal.sample_rate;
  }
  return out;
}

std::vector<SpectralPeak> find_peaks(const Spectrum& spectrum, double relative_threshold,
                                     double min_separation) {
  if (!(relative_threshold > 0 && relative_threshold <= 1)) {
    throw ParameterError("relative_threshold must lie in (0, 1]");
  }
  if (!(min_separation >= 0)) throw ParameterError("min_separation must be >= 0");
  const VectorXd& m = spectrum.magnitudes;
  const Eigen::Index n = m.size();
  if (n == 0) return {};
  const double top = m.maxCoeff();
  if (!(top > 0)) return {};
  const double floor = relative_threshold * top;

  std::vector<SpectralPeak> candidates;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (m[k] < floor) continue;
    const bool left_ok = k == 0 || m[k] >= m[k - 1];
    const bool right_ok = k == n - 1 || m[k] >= m[k + 1];
    if (left_ok && right_ok) candidates.push_back({spectrum.bin_frequencies[k], m[k], k});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SpectralPeak& a, const SpectralPeak& b) { return a.magnitude > b.magnitude; });

  std::vector<SpectralPeak> kept;
  for (const auto& c : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](const SpectralPeak& p) {
      return std::abs(p.frequency - c.frequency) >= min_separation;
    });
    if (clear) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const SpectralPeak& a, const SpectralPeak& b) { return a.bin_index < b.bin_index; });
  return kept;
}

}  // namespace radsim
