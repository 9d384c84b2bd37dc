#include "radsim/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <optional>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "radsim/errors.hpp"

namespace radsim::io {

using nlohmann::json;

namespace {

constexpr const char* kSampleRatePrefix = "# sample_rate=";

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xFFu) << (8 * (7 - i));
    return r;
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& location) {
  double value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError("invalid number '" + std::string(text) + "'", location);
  }
  return value;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

void write_signal(const fs::path& path, const SampledSignal& signal) {
  if (path.extension() == ".csv") {
    write_signal_csv(path, signal);
  } else {
    write_signal_sidecar(path, signal);
  }
}

SampledSignal read_signal(const fs::path& path) {
  return path.extension() == ".csv" ? read_signal_csv(path) : read_signal_sidecar(path);
}

void write_signal_sidecar(const fs::path& sidecar, const SampledSignal& signal) {
  fs::path data = sidecar;
  data.replace_extension(".f64");
  if (data == sidecar) throw IoError("sidecar path must not end in .f64");

  std::string raw(static_cast<std::size_t>(signal.size()) * 8, '\0');
  for (Eigen::Index k = 0; k < signal.size(); ++k) {
    const auto bits = to_little_endian(std::bit_cast<std::uint64_t>(signal.samples[k]));
    std::memcpy(raw.data() + static_cast<std::size_t>(k) * 8, &bits, 8);
  }
  write_text(data, raw);

  const json meta{{"data_file", data.filename().string()},
                  {"format", "f64le"},
                  {"length", signal.size()},
                  {"sample_rate", signal.sample_rate},
                  {"start_time", signal.start_time}};
  write_text(sidecar, meta.dump(2) + "\n");
}

SampledSignal read_signal_sidecar(const fs::path& sidecar) {
  json meta;
  try {
    meta = json::parse(read_text(sidecar));
  } catch (const json::parse_error& e) {
    throw ParseError("malformed signal sidecar '" + sidecar.string() + "'", e.byte);
  }
  auto field = [&](const char* key) -> const json& {
    if (!meta.is_object() || !meta.contains(key)) throw ParseError(std::string("missing key '") + key + "'", "/");
    return meta.at(key);
  };
  if (field("format") != "f64le") throw ParseError("unsupported sample format", "/format");
  if (!field("length").is_number_unsigned()) throw ParseError("expected an unsigned integer", "/length");
  if (!field("sample_rate").is_number()) throw ParseError("expected a number", "/sample_rate");
  if (!field("start_time").is_number()) throw ParseError("expected a number", "/start_time");
  if (!field("data_file").is_string()) throw ParseError("expected a string", "/data_file");
  const auto length = field("length").get<std::size_t>();

  const std::string raw = read_text(sidecar.parent_path() / field("data_file").get<std::string>());
  if (raw.size() != length * 8) {
    throw ParseError("data file holds " + std::to_string(raw.size()) + " bytes, expected " +
                         std::to_string(length * 8),
                     "/length");
  }
  VectorXd samples(static_cast<Eigen::Index>(length));
  for (std::size_t k = 0; k < length; ++k) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, raw.data() + k * 8, 8);
    samples[static_cast<Eigen::Index>(k)] = std::bit_cast<double>(to_little_endian(bits));
  }
  return make_signal(field("sample_rate").get<double>(), std::move(samples),
                     field("start_time").get<double>());
}

void write_signal_csv(const fs::path& path, const SampledSignal& signal) {
  std::string out = kSampleRatePrefix + format_double(signal.sample_rate) + "\n";
  out += "# start_time=" + format_double(signal.start_time) + "\n";
  out += "time,value\n";
  for (Eigen::Index k = 0; k < signal.size(); ++k) {
    out += format_double(signal.time_at(k));
    out += ',';
    out += format_double(signal.samples[k]);
    out += '\n';
  }
  write_text(path, out);
}

SampledSignal read_signal_csv(const fs::path& path) {
  const auto lines = split_lines(read_text(path));
  std::optional<double> rate;
  std::optional<double> start;
  std::vector<double> times;
  std::vector<double> values;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::string where = "line " + std::to_string(i + 1);
    if (line.empty()) continue;
    if (line.starts_with(kSampleRatePrefix)) {
      rate = parse_double(std::string_view(line).substr(std::strlen(kSampleRatePrefix)), where);
      continue;
    }
    if (line.starts_with("# start_time=")) {
      start = parse_double(std::string_view(line).substr(13), where);
      continue;
    }
    if (line.starts_with('#')) continue;
    if (!header_seen) {
      if (line != "time,value") throw ParseError("expected header 'time,value'", where);
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 2) throw ParseError("expected two fields", where);
    times.push_back(parse_double(fields[0], where));
    values.push_back(parse_double(fields[1], where));
  }
  if (!header_seen) throw ParseError("missing 'time,value' header", "line 1");
  if (!rate) {
    if (times.size() < 2) throw ParseError("cannot infer sample rate from fewer than two rows", path.string());
    rate = static_cast<double>(times.size() - 1) / (times.back() - times.front());
  }
  VectorXd samples = Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  return make_signal(*rate, std::move(samples), start.value_or(times.empty() ? 0.0 : times.front()));
}

std::string bits_to_text(const BitStream& stream) {
  std::string out;
  out.reserve(stream.size() + 1);
  for (auto b : stream.bits()) out.push_back(b ? '1' : '0');
  out.push_back('\n');
  return out;
}

BitStream bits_from_text(std::string_view text, double bit_rate) {
  if (text.ends_with("\r\n")) {
    text.remove_suffix(2);
  } else if (text.ends_with('\n')) {
    text.remove_suffix(1);
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw ParseError(std::string("invalid bit character '") + text[i] + "'", i);
    }
    bits.push_back(text[i] == '1');
  }
  return BitStream(std::move(bits), bit_rate);
}

void write_bits(const fs::path& path, const BitStream& stream) { write_text(path, bits_to_text(stream)); }

BitStream read_bits(const fs::path& path, double bit_rate) {
  return bits_from_text(read_text(path), bit_rate);
}

std::string line_code_to_text(const LineCodeSignal& signal) {
  std::string out;
  out.reserve(signal.levels.size() + 1);
  for (auto level : signal.levels) out.push_back(level == Level::high ? 'H' : 'L');
  out.push_back('\n');
  return out;
}

void write_curve_csv(const fs::path& path, const PropagationCurve& curve) {
  std::string out = "n,expected_infected\n";
  char buf[64];
  for (const auto& p : curve.points) {
    const auto res = std::to_chars(buf, buf + sizeof buf, p.expected_infected, std::chars_format::fixed, 12);
    out += std::to_string(p.time_step) + "," + std::string(buf, res.ptr) + "\n";
  }
  write_text(path, out);
}

PropagationCurve read_curve_csv(const fs::path& path) {
  const auto lines = split_lines(read_text(path));
  if (lines.empty() || lines[0] != "n,expected_infected") {
    throw ParseError("expected header 'n,expected_infected'", "line 1");
  }
  PropagationCurve curve;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 2) throw ParseError("expected two fields", where);
    std::int64_t n = 0;
    const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), n);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size()) {
      throw ParseError("invalid time step", where);
    }
    curve.points.push_back({n, parse_double(fields[1], where)});
  }
  return curve;
}

void write_spectrum_csv(const fs::path& path, const Spectrum& spectrum) {
  std::string out = "frequency_hz,magnitude\n";
  for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
    out += format_double(spectrum.bin_frequencies[k]) + "," + format_double(spectrum.magnitudes[k]) + "\n";
  }
  write_text(path, out);
}

void write_spectrogram_csv(const fs::path& path, const Spectrogram& spectrogram) {
  std::string out = "time_s";
  for (Eigen::Index k = 0; k < spectrogram.bin_frequencies.size(); ++k) {
    out += "," + format_double(spectrogram.bin_frequencies[k]);
  }
  out += "\n";
  for (Eigen::Index f = 0; f < spectrogram.magnitudes.rows(); ++f) {
    out += format_double(spectrogram.frame_times[f]);
    for (Eigen::Index k = 0; k < spectrogram.magnitudes.cols(); ++k) {
      out += "," + format_double(spectrogram.magnitudes(f, k));
    }
    out += "\n";
  }
  write_text(path, out);
}

void write_peaks_csv(const fs::path& path, const std::vector<SpectralPeak>& peaks) {
  std::string out = "frequency_hz,magnitude,bin_index\n";
  for (const auto& p : peaks) {
    out += format_double(p.frequency) + "," + format_double(p.magnitude) + "," +
           std::to_string(p.bin_index) + "\n";
  }
  write_text(path, out);
}

std::vector<SpectralPeak> read_peaks_csv(const fs::path& path) {
  const auto lines = split_lines(read_text(path));
  if (lines.empty() || lines[0] != "frequency_hz,magnitude,bin_index") {
    throw ParseError("expected header 'frequency_hz,magnitude,bin_index'", "line 1");
  }
  std::vector<SpectralPeak> peaks;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 3) throw ParseError("expected three fields", where);
    peaks.push_back({parse_double(fields[0], where), parse_double(fields[1], where),
                     static_cast<Eigen::Index>(parse_double(fields[2], where))});
  }
  return peaks;
}

std::string classification_to_json_text(const ClassificationResult& result) {
  json doc{{"label", result.label}, {"score", result.score}};
  if (result.runner_up) {
    doc["runner_up"] = {{"label", result.runner_up->first}, {"score", result.runner_up->second}};
  } else {
    doc["runner_up"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

}  // namespace radsim::io
