#include "radsim/pipeline.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "radsim/errors.hpp"
#include "radsim/io.hpp"

namespace radsim {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected an object", path.empty() ? "/" : path);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ParseError("unknown key '" + it.key() + "'", path + "/" + it.key());
  }
}

template <typename T>
void read_into(const json& obj, const char* key, T& target, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw ParseError("wrong type", path + "/" + key);
  }
}

json channel_to_json(const ChannelParams& c) {
  json j{{"attenuation_db", c.attenuation_db}, {"seed", c.seed}};
  j["snr_db"] = c.snr_db ? json(*c.snr_db) : json(nullptr);
  j["noise_power"] = c.noise_power ? json(*c.noise_power) : json(nullptr);
  return j;
}

json peaks_to_json(const std::vector<SpectralPeak>& peaks) {
  json out = json::array();
  for (const auto& p : peaks) {
    out.push_back({{"frequency_hz", p.frequency}, {"magnitude", p.magnitude}, {"bin_index", p.bin_index}});
  }
  return out;
}

json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (payload_bits < 1) throw ConfigError("payload_bits must be >= 1");
  if (!(bit_rate > 0)) throw ConfigError("bit_rate must be positive");
  carrier.validate(modulation == Modulation::fsk ? bit_rate / 2.0 : 0.0);
  samples_per_bit(carrier.sample_rate, bit_rate);
  if (modulation == Modulation::fsk && carrier.center_frequency - bit_rate / 2.0 < 0) {
    throw ConfigError("fc - bit_rate/2 is negative");
  }
  if (channel) channel->validate();
  if (stft_hop < 1) throw ConfigError("stft hop must be >= 1");
  if (stft_window < 2) throw ConfigError("stft window must be >= 2 samples");
  if (!(peak_threshold > 0 && peak_threshold <= 1)) throw ConfigError("peak threshold must lie in (0, 1]");
  if (!(min_separation() >= 0)) throw ConfigError("peak min separation must be >= 0");
  if (!(detection_threshold > 0 && detection_threshold < 1)) {
    throw ConfigError("detection threshold must lie in (0, 1)");
  }
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed experiment config", e.byte);
  }
  reject_unknown(doc,
                 {"seed", "payload_bits", "bit_rate", "carrier", "modulation", "fsk_phase",
                  "compose_with_carrier", "channel", "stft", "peaks", "demodulate", "library",
                  "detection_threshold", "output_dir"},
                 "");
  ExperimentConfig c;
  read_into(doc, "seed", c.seed, "");
  read_into(doc, "payload_bits", c.payload_bits, "");
  read_into(doc, "bit_rate", c.bit_rate, "");
  read_into(doc, "compose_with_carrier", c.compose_with_carrier, "");
  read_into(doc, "demodulate", c.demodulate, "");
  read_into(doc, "detection_threshold", c.detection_threshold, "");

  std::string name;
  read_into(doc, "modulation", name, "");
  if (!name.empty()) c.modulation = parse_modulation(name);
  name.clear();
  read_into(doc, "fsk_phase", name, "");
  if (name == "switched") {
    c.fsk_phase = FskPhase::switched;
  } else if (!name.empty() && name != "continuous") {
    throw ParseError("fsk_phase must be 'continuous' or 'switched'", "/fsk_phase");
  }

  if (auto it = doc.find("carrier"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, {"center_frequency", "amplitude", "initial_phase", "sample_rate"}, "/carrier");
    read_into(*it, "center_frequency", c.carrier.center_frequency, "/carrier");
    read_into(*it, "amplitude", c.carrier.amplitude, "/carrier");
    read_into(*it, "initial_phase", c.carrier.initial_phase, "/carrier");
    read_into(*it, "sample_rate", c.carrier.sample_rate, "/carrier");
  }
  if (auto it = doc.find("channel"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, {"attenuation_db", "snr_db", "noise_power", "seed"}, "/channel");
    ChannelParams ch;
    ch.seed = c.seed;
    read_into(*it, "attenuation_db", ch.attenuation_db, "/channel");
    read_into(*it, "seed", ch.seed, "/channel");
    double v = 0;
    if (it->contains("snr_db") && !(*it)["snr_db"].is_null()) {
      read_into(*it, "snr_db", v, "/channel");
      ch.snr_db = v;
    }
    if (it->contains("noise_power") && !(*it)["noise_power"].is_null()) {
      read_into(*it, "noise_power", v, "/channel");
      ch.noise_power = v;
    }
    c.channel = ch;
  }
  if (auto it = doc.find("stft"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, {"window_length", "hop", "window"}, "/stft");
    read_into(*it, "window_length", c.stft_window, "/stft");
    read_into(*it, "hop", c.stft_hop, "/stft");
    std::string w;
    read_into(*it, "window", w, "/stft");
    if (!w.empty()) c.stft_window_kind = parse_window(w);
  }
  if (auto it = doc.find("peaks"); it != doc.end() && !it->is_null()) {
    reject_unknown(*it, {"relative_threshold", "min_separation_hz"}, "/peaks");
    read_into(*it, "relative_threshold", c.peak_threshold, "/peaks");
    if (it->contains("min_separation_hz") && !(*it)["min_separation_hz"].is_null()) {
      double v = 0;
      read_into(*it, "min_separation_hz", v, "/peaks");
      c.peak_min_separation = v;
    }
  }
  std::string path;
  read_into(doc, "library", path, "");
  if (!path.empty()) c.library_path = path;
  path.clear();
  read_into(doc, "output_dir", path, "");
  if (!path.empty()) c.output_dir = path;
  return c;
}

std::string ExperimentConfig::to_json_text(bool include_output_dir) const {
  json doc{{"seed", seed},
           {"payload_bits", payload_bits},
           {"bit_rate", bit_rate},
           {"carrier",
            {{"center_frequency", carrier.center_frequency},
             {"amplitude", carrier.amplitude},
             {"initial_phase", carrier.initial_phase},
             {"sample_rate", carrier.sample_rate}}},
           {"modulation", to_string(modulation)},
           {"fsk_phase", fsk_phase == FskPhase::continuous ? "continuous" : "switched"},
           {"compose_with_carrier", compose_with_carrier},
           {"channel", channel ? channel_to_json(*channel) : json(nullptr)},
           {"stft", {{"window_length", stft_window}, {"hop", stft_hop}, {"window", std::string(to_string(stft_window_kind))}}},
           {"peaks", {{"relative_threshold", peak_threshold}, {"min_separation_hz", optional_number(peak_min_separation)}}},
           {"demodulate", demodulate},
           {"library", library_path ? json(library_path->generic_string()) : json(nullptr)},
           {"detection_threshold", detection_threshold}};
  if (include_output_dir) doc["output_dir"] = output_dir.generic_string();
  return doc.dump(2) + "\n";
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  const fs::path& dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  // Loaded up front so a bad library fails before anything is written.
  std::optional<SignatureLibrary> library;
  if (config.library_path) library = library_load(*config.library_path);

  ExperimentReport report;
  auto record = [&](const std::string& role, const std::string& name) { report.files[role] = name; };

  const BitStream payload = random_payload(config.seed, config.payload_bits, config.bit_rate);
  io::write_bits(dir / "payload.bits", payload);
  record("payload_bits", "payload.bits");
  if (payload.size() % 4 == 0) {
    io::write_text(dir / "payload.hex", bits_to_hex(payload) + "\n");
    record("payload_hex", "payload.hex");
  }

  const double duration = static_cast<double>(config.payload_bits) / config.bit_rate;
  const SampledSignal carrier = generate_carrier(config.carrier, duration);
  const SampledSignal modulated =
      modulate(config.modulation, payload, config.carrier, FskOptions{config.fsk_phase});
  const SampledSignal emitted = config.compose_with_carrier ? compose_emitted(carrier, modulated) : modulated;
  io::write_signal(dir / "carrier.json", carrier);
  io::write_signal(dir / "modulated.json", modulated);
  io::write_signal(dir / "emitted.json", emitted);
  record("carrier", "carrier.json");
  record("modulated", "modulated.json");
  record("emitted", "emitted.json");

  SampledSignal received = emitted;
  if (config.channel) {
    received = apply_channel(emitted, *config.channel);
    io::write_signal(dir / "received.json", received);
    record("received", "received.json");
    report.measured_snr_db = measure_snr(emitted, received);
  }

  const Spectrum spectrum = fft_magnitude(received);
  report.fft_bin_width = spectrum.bin_width;
  report.peaks = find_peaks(spectrum, config.peak_threshold, config.min_separation());
  io::write_spectrum_csv(dir / "spectrum.csv", spectrum);
  io::write_peaks_csv(dir / "peaks.csv", report.peaks);
  record("spectrum", "spectrum.csv");
  record("peaks", "peaks.csv");
  if (static_cast<std::size_t>(received.size()) >= config.stft_window) {
    io::write_spectrogram_csv(dir / "spectrogram.csv",
                              stft(received, config.stft_window, config.stft_hop, config.stft_window_kind));
    record("spectrogram", "spectrogram.csv");
  }

  if (config.demodulate) {
    // The simulated receiver knows the channel gain and the carrier it shares
    // with the transmitter, so it undoes both before keying decisions.
    SampledSignal baseband = received;
    if (config.channel) baseband.samples /= config.channel->gain();
    if (config.compose_with_carrier) baseband.samples -= carrier.samples;
    const BitStream decoded =
        demodulate(config.modulation, baseband, config.carrier, config.bit_rate, config.payload_bits);
    io::write_bits(dir / "demodulated.bits", decoded);
    record("demodulated_bits", "demodulated.bits");
    report.bit_errors = hamming_distance(payload, decoded);
    report.ber = static_cast<double>(*report.bit_errors) / static_cast<double>(config.payload_bits);
  }

  if (library) {
    report.classification = classify(received, *library, config.detection_threshold);
    io::write_text(dir / "classification.json", io::classification_to_json_text(*report.classification));
    record("classification", "classification.json");
  }

  json files = json::object();
  for (const auto& [role, name] : report.files) files[role] = name;
  json doc{{"config", json::parse(config.to_json_text(false))},
           {"files", std::move(files)},
           {"fft_bin_width_hz", report.fft_bin_width},
           {"peaks", peaks_to_json(report.peaks)},
           {"measured_snr_db", optional_number(report.measured_snr_db)},
           {"bit_errors", report.bit_errors ? json(*report.bit_errors) : json(nullptr)},
           {"ber", optional_number(report.ber)},
           {"classification", report.classification
                                  ? json::parse(io::classification_to_json_text(*report.classification))
                                  : json(nullptr)}};
  report.report_path = dir / "report.json";
  io::write_text(report.report_path, doc.dump(2) + "\n");
  return report;
}

}  // namespace radsim
