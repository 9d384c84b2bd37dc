#include "radsim/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "radsim/errors.hpp"

namespace radsim {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "radsim-signature-library";

Spectrum make_grid_spectrum(std::size_t fft_size, double sample_rate, VectorXd magnitudes) {
  Spectrum s;
  s.fft_size = fft_size;
  s.sample_rate = sample_rate;
  s.bin_width = sample_rate / static_cast<double>(fft_size);
  s.bin_frequencies.resize(magnitudes.size());
  for (Eigen::Index k = 0; k < magnitudes.size(); ++k) {
    s.bin_frequencies[k] = static_cast<double>(k) * sample_rate / static_cast<double>(fft_size);
  }
  s.magnitudes = std::move(magnitudes);
  return s;
}

json features_to_json(const FeatureVector& f) {
  json peaks = json::array();
  for (const auto& [hz, rel] : f.dominant_peaks) peaks.push_back(json::array({hz, rel}));
  return json{{"rms_power", f.rms_power},
              {"zero_crossing_rate", f.zero_crossing_rate},
              {"crest_factor", f.crest_factor},
              {"spectral_centroid", f.spectral_centroid},
              {"spectral_bandwidth", f.spectral_bandwidth},
              {"spectral_entropy", f.spectral_entropy},
              {"dominant_peaks", std::move(peaks)}};
}

// Schema-checked accessors; errors carry the JSON pointer of the offending node.
const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path.empty() ? "/" : path);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key '" + key + "'", path.empty() ? "/" : path);
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_number()) throw ParseError("expected a number", path + "/" + key);
  return v.get<double>();
}

FeatureVector features_from_json(const json& j, const std::string& path) {
  FeatureVector f;
  f.rms_power = number(j, "rms_power", path);
  f.zero_crossing_rate = number(j, "zero_crossing_rate", path);
  f.crest_factor = number(j, "crest_factor", path);
  f.spectral_centroid = number(j, "spectral_centroid", path);
  f.spectral_bandwidth = number(j, "spectral_bandwidth", path);
  f.spectral_entropy = number(j, "spectral_entropy", path);
  const json& peaks = member(j, "dominant_peaks", path);
  if (!peaks.is_array()) throw ParseError("expected an array", path + "/dominant_peaks");
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const json& p = peaks[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError("expected [frequency, magnitude]",
                       path + "/dominant_peaks/" + std::to_string(i));
    }
    f.dominant_peaks.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return f;
}

}  // namespace

FeatureVector extract_features(const SampledSignal& signal) {
  if (static_cast<std::size_t>(signal.size()) < kMinFeatureSamples) {
    throw ShapeError("feature extraction needs at least " + std::to_string(kMinFeatureSamples) +
                     " samples");
  }
  const VectorXd& x = signal.samples;
  FeatureVector f;
  f.rms_power = rms(x);
  f.crest_factor = f.rms_power > 0 ? x.cwiseAbs().maxCoeff() / f.rms_power : 0.0;

  std::size_t crossings = 0;
  for (Eigen::Index k = 1; k < x.size(); ++k) crossings += (x[k - 1] >= 0) != (x[k] >= 0);
  f.zero_crossing_rate = static_cast<double>(crossings) / static_cast<double>(x.size() - 1);

  const Spectrum spectrum = fft_magnitude(signal);
  const VectorXd power = spectrum.magnitudes.array().square();
  const double total = power.sum();
  if (total > 0) {
    const VectorXd p = power / total;
    f.spectral_centroid = p.dot(spectrum.bin_frequencies);
    const VectorXd deviation = (spectrum.bin_frequencies.array() - f.spectral_centroid).square();
    f.spectral_bandwidth = std::sqrt(p.dot(deviation));
    double h = 0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (p[k] > 0) h -= p[k] * std::log(p[k]);
    }
    f.spectral_entropy = p.size() > 1 ? std::clamp(h / std::log(static_cast<double>(p.size())), 0.0, 1.0) : 0.0;

    auto peaks = find_peaks(spectrum, 0.05, 3.0 * spectrum.bin_width);
    std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
      return a.magnitude > b.magnitude;
    });
    const double top = spectrum.magnitudes.maxCoeff();
    for (std::size_t i = 0; i < peaks.size() && i < kMaxDominantPeaks; ++i) {
      f.dominant_peaks.emplace_back(peaks[i].frequency, peaks[i].magnitude / top);
    }
  }
  return f;
}

std::string to_json_text(const FeatureVector& features) {
  return features_to_json(features).dump(2) + "\n";
}

Spectrum unit_energy_spectrum(const SampledSignal& signal, std::size_t fft_size) {
  const auto block = static_cast<Eigen::Index>(fft_size);
  const Eigen::Index blocks = std::max<Eigen::Index>(1, signal.size() / block);
  Spectrum s;
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index start = b * block;
    const Eigen::Index count = std::min(block, signal.size() - start);
    SampledSignal part{signal.sample_rate, signal.samples.segment(start, count), signal.time_at(start)};
    Spectrum piece = fft_magnitude(part, fft_size);
    if (b == 0) {
      s = std::move(piece);
    } else {
      s.magnitudes += piece.magnitudes;
    }
  }
  const double norm = s.magnitudes.norm();
  if (norm > 0) s.magnitudes /= norm;
  return s;
}

double spectral_correlation(const Spectrum& a, const Spectrum& b) {
  if (a.magnitudes.size() != b.magnitudes.size() || a.fft_size != b.fft_size ||
      a.sample_rate != b.sample_rate) {
    throw ShapeError("spectra are on different bin grids");
  }
  const double r = pearson(a.magnitudes, b.magnitudes);
  if (std::isnan(r)) throw ParameterError("spectral correlation undefined for zero-variance spectrum");
  return r;
}

SignatureLibrary::SignatureLibrary(std::size_t fft_size, double sample_rate)
    : fft_size_(fft_size), sample_rate_(sample_rate) {
  if (fft_size_ < 2 || (fft_size_ & (fft_size_ - 1)) != 0) {
    throw ParameterError("library fft_size must be a power of two >= 2");
  }
  if (!(sample_rate_ > 0) || !std::isfinite(sample_rate_)) {
    throw ParameterError("library sample_rate must be positive");
  }
}

const SignatureEntry* SignatureLibrary::find(const std::string& label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

SignatureLibrary SignatureLibrary::with_entry(SignatureEntry entry) const {
  if (entry.label.empty()) throw ParameterError("signature label must be nonempty");
  if (entry.label == kUnknownLabel) throw ParameterError("label 'unknown' is reserved");
  if (find(entry.label)) throw ConflictError("signature '" + entry.label + "' already exists");
  SignatureLibrary next = *this;
  next.entries_.push_back(std::move(entry));
  return next;
}

SignatureLibrary SignatureLibrary::add(const std::string& label, const SampledSignal& signal,
                                       std::map<std::string, std::string> metadata) const {
  if (signal.sample_rate != sample_rate_) {
    throw ShapeError("signal sample rate does not match the library grid");
  }
  Spectrum tmpl = unit_energy_spectrum(signal, fft_size_);
  if (!(tmpl.magnitudes.squaredNorm() > 0)) throw ParameterError("template signal is silent");
  return with_entry({label, extract_features(signal), std::move(tmpl), std::move(metadata)});
}

std::string SignatureLibrary::to_json_text() const {
  json entries = json::array();
  for (const auto& e : entries_) {
    json tmpl = json::array();
    for (Eigen::Index k = 0; k < e.template_spectrum.magnitudes.size(); ++k) {
      tmpl.push_back(e.template_spectrum.magnitudes[k]);
    }
    entries.push_back(json{{"label", e.label},
                           {"features", features_to_json(e.features)},
                           {"template", std::move(tmpl)},
                           {"metadata", e.metadata}});
  }
  json doc{{"format", kFormatTag},
           {"format_version", std::to_string(kFormatMajor) + "." + std::to_string(kFormatMinor)},
           {"fft_size", fft_size_},
           {"grid",
            {{"sample_rate", sample_rate_}, {"bin_width", bin_width()}, {"bin_count", fft_size_ / 2 + 1}}},
           {"entries", std::move(entries)}};
  return doc.dump(2) + "\n";
}

SignatureLibrary SignatureLibrary::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed signature library JSON", e.byte);
  }
  const json& tag = member(doc, "format", "");
  if (!tag.is_string() || tag.get<std::string>() != kFormatTag) {
    throw ParseError("not a signature library", "/format");
  }
  const json& version = member(doc, "format_version", "");
  if (!version.is_string()) throw ParseError("expected a version string", "/format_version");
  const std::string v = version.get<std::string>();
  int major = -1;
  try {
    major = std::stoi(v.substr(0, v.find('.')));
  } catch (const std::exception&) {
    throw ParseError("unreadable format_version '" + v + "'", "/format_version");
  }
  if (major != kFormatMajor) {
    throw ParseError("unsupported library major version " + std::to_string(major), "/format_version");
  }

  const json& fft = member(doc, "fft_size", "");
  if (!fft.is_number_unsigned()) throw ParseError("expected an unsigned integer", "/fft_size");
  const auto fft_size = fft.get<std::size_t>();
  const json& grid = member(doc, "grid", "");
  const double sample_rate = number(grid, "sample_rate", "/grid");
  SignatureLibrary lib = [&] {
    try {
      return SignatureLibrary(fft_size, sample_rate);
    } catch (const ParameterError& e) {
      throw ParseError(e.what(), "/grid");
    }
  }();
  const std::size_t bins = fft_size / 2 + 1;

  const json& entries = member(doc, "entries", "");
  if (!entries.is_array()) throw ParseError("expected an array", "/entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = "/entries/" + std::to_string(i);
    const json& e = entries[i];
    const json& label = member(e, "label", path);
    if (!label.is_string()) throw ParseError("expected a string", path + "/label");

    const json& tmpl = member(e, "template", path);
    if (!tmpl.is_array() || tmpl.size() != bins) {
      throw ParseError("template must hold " + std::to_string(bins) + " magnitudes", path + "/template");
    }
    VectorXd mags(static_cast<Eigen::Index>(bins));
    for (std::size_t k = 0; k < bins; ++k) {
      if (!tmpl[k].is_number()) throw ParseError("expected a number", path + "/template/" + std::to_string(k));
      mags[static_cast<Eigen::Index>(k)] = tmpl[k].get<double>();
    }
    if (std::abs(mags.squaredNorm() - 1.0) > 1e-9) {
      throw ParseError("template is not unit energy", path + "/template");
    }

    std::map<std::string, std::string> metadata;
    const json& meta = member(e, "metadata", path);
    if (!meta.is_object()) throw ParseError("expected an object", path + "/metadata");
    for (auto it = meta.begin(); it != meta.end(); ++it) {
      if (!it.value().is_string()) throw ParseError("expected a string", path + "/metadata/" + it.key());
      metadata.emplace(it.key(), it.value().get<std::string>());
    }

    SignatureEntry entry{label.get<std::string>(), features_from_json(member(e, "features", path), path + "/features"),
                         make_grid_spectrum(fft_size, sample_rate, std::move(mags)), std::move(metadata)};
    try {
      lib = lib.with_entry(std::move(entry));
    } catch (const Error& err) {
      throw ParseError(err.what(), path + "/label");
    }
  }
  return lib;
}

SignatureLibrary library_add(const SignatureLibrary& library, const std::string& label,
                             const SampledSignal& signal, std::map<std::string, std::string> metadata) {
  return library.add(label, signal, std::move(metadata));
}

void library_save(const SignatureLibrary& library, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << library.to_json_text();
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

SignatureLibrary library_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return SignatureLibrary::from_json_text(buf.str());
}

ClassificationResult classify(const SampledSignal& signal, const SignatureLibrary& library,
                              double threshold) {
  if (library.empty()) throw ConfigError("signature library is empty");
  if (!(threshold > 0 && threshold < 1)) throw ParameterError("threshold must lie in (0, 1)");
  if (signal.sample_rate != library.sample_rate()) {
    throw ShapeError("signal sample rate does not match the library analysis grid");
  }
  const Spectrum probe = unit_energy_spectrum(signal, library.fft_size());

  std::vector<std::pair<std::string, double>> scores;
  scores.reserve(library.size());
  for (const auto& e : library.entries()) {
    scores.emplace_back(e.label, spectral_correlation(probe, e.template_spectrum));
  }
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  ClassificationResult result;
  result.score = scores.front().second;
  result.label = result.score >= threshold ? scores.front().first : kUnknownLabel;
  if (scores.size() > 1) result.runner_up = scores[1];
  return result;
}

}  // namespace radsim
