// radsim command-line front end. Data goes to the files named by the flags; a
// short human summary goes to stdout.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "radsim/channel.hpp"
#include "radsim/errors.hpp"
#include "radsim/io.hpp"
#include "radsim/pipeline.hpp"
#include "radsim/recognition.hpp"

using namespace radsim;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CarrierFlags {
  double fc = 2000;
  double amplitude = 1;
  double phase = 0;
  double sample_rate = 48000;

  void attach(CLI::App* app) {
    app->add_option("--fc", fc, "Carrier frequency in Hz")->capture_default_str();
    app->add_option("--amplitude", amplitude, "Carrier amplitude")->capture_default_str();
    app->add_option("--phase", phase, "Initial carrier phase in radians")->capture_default_str();
    app->add_option("--sample-rate", sample_rate, "Sample rate in Hz")->capture_default_str();
  }
  CarrierSpec spec() const { return {fc, amplitude, phase, sample_rate}; }
};

const std::map<std::string, Modulation> kModulations{
    {"ask", Modulation::ask}, {"fsk", Modulation::fsk}, {"psk", Modulation::psk}};

std::string fmt(double v) { return io::format_double(v); }

int cmd_propagate(std::int64_t n, std::int64_t m, std::int64_t x0, std::int64_t steps,
                  const std::string& method, std::int64_t trials, std::uint64_t seed,
                  const fs::path& out) {
  const PropagationParams params{n, m, x0};
  params.validate();
  PropagationCurve curve;
  if (method == "closed") {
    curve = simulate_curve(params, steps, CurveMethod::closed_form);
  } else if (method == "recurrence") {
    curve = simulate_curve(params, steps, CurveMethod::recurrence);
  } else if (x0 == 1) {
    curve = monte_carlo_propagation(MonteCarloSpec{n, m}, seed, steps, trials);
  } else {
    std::vector<std::size_t> seeds(static_cast<std::size_t>(x0));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    auto edges = CommGraph::complete(static_cast<std::size_t>(n)).edges();
    curve = monte_carlo_propagation(CommGraph(static_cast<std::size_t>(n), std::move(edges), seeds), m,
                                    seed, steps, trials);
  }
  io::write_curve_csv(out, curve);
  if (x0 < n) {
    std::cout << "inflection_time " << fmt(inflection_time(params)) << "\n";
  } else {
    std::cout << "inflection_time none\n";
  }
  std::cout << "final_value " << fmt(curve.points.back().expected_infected) << " at n=" << steps << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radsim: virus propagation, radar-carrier keying and signal recognition toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // propagate
  auto* propagate = app.add_subcommand("propagate", "Expected infection curve");
  std::int64_t p_n = 100, p_m = 15, p_x0 = 1, p_steps = 100, p_trials = 200;
  std::uint64_t seed = 0;
  std::string p_method = "closed";
  fs::path p_out;
  propagate->add_option("--n", p_n, "Number of computers")->capture_default_str();
  propagate->add_option("--m", p_m, "Communications per interval")->capture_default_str();
  propagate->add_option("--x0", p_x0, "Initially infected computers")->capture_default_str();
  propagate->add_option("--steps", p_steps, "Last time step")->capture_default_str();
  propagate->add_option("--method", p_method, "closed | recurrence | montecarlo")
      ->check(CLI::IsMember({"closed", "recurrence", "montecarlo"}))
      ->capture_default_str();
  propagate->add_option("--trials", p_trials, "Monte Carlo trials")->capture_default_str();
  propagate->add_option("--seed", seed, "Random seed")->capture_default_str();
  propagate->add_option("--out", p_out, "Curve CSV")->required();

  // payload
  auto* payload = app.add_subcommand("payload", "Random or hex payload as a bit file");
  std::size_t pl_bits = 64;
  double bit_rate = 250;
  std::string pl_hex;
  fs::path pl_out;
  auto* pl_bits_opt = payload->add_option("--bits", pl_bits, "Random payload length")->capture_default_str();
  payload->add_option("--hex", pl_hex, "Hex text to expand MSB first")->excludes(pl_bits_opt);
  payload->add_option("--bit-rate", bit_rate, "Bit rate in bit/s")->capture_default_str();
  payload->add_option("--seed", seed, "Random seed")->capture_default_str();
  payload->add_option("--out", pl_out, "Bit file")->required();

  // encode
  auto* encode = app.add_subcommand("encode", "Manchester line code of a bit file");
  fs::path in_path, out_path, waveform_path;
  double sample_rate = 48000;
  encode->add_option("--in", in_path, "Bit file")->required();
  encode->add_option("--bit-rate", bit_rate, "Bit rate in bit/s")->capture_default_str();
  encode->add_option("--out", out_path, "H/L level file")->required();
  encode->add_option("--waveform", waveform_path, "Also write the rectangular NRZ waveform (signal file)");
  encode->add_option("--sample-rate", sample_rate, "Waveform sample rate in Hz")->capture_default_str();

  // modulate
  auto* mod = app.add_subcommand("modulate", "Key a bit file onto the carrier");
  CarrierFlags carrier;
  std::string scheme = "fsk";
  std::string fsk_phase = "continuous";
  bool compose = false;
  fs::path carrier_out;
  carrier.attach(mod);
  mod->add_option("--in", in_path, "Bit file")->required();
  mod->add_option("--modulation", scheme, "ask | fsk | psk")->check(CLI::IsMember({"ask", "fsk", "psk"}))->capture_default_str();
  mod->add_option("--fsk-phase", fsk_phase, "continuous | switched")
      ->check(CLI::IsMember({"continuous", "switched"}))
      ->capture_default_str();
  mod->add_option("--bit-rate", bit_rate, "Bit rate in bit/s")->capture_default_str();
  mod->add_flag("--compose", compose, "Add the unmodulated carrier to the output");
  mod->add_option("--carrier-out", carrier_out, "Also write the bare carrier");
  mod->add_option("--out", out_path, "Signal file (.json sidecar or .csv)")->required();

  // demodulate
  auto* demod = app.add_subcommand("demodulate", "Recover bits from a keyed signal");
  std::size_t n_bits = 0;
  carrier.attach(demod);
  demod->add_option("--in", in_path, "Signal file")->required();
  demod->add_option("--modulation", scheme, "ask | fsk | psk")->check(CLI::IsMember({"ask", "fsk", "psk"}))->capture_default_str();
  demod->add_option("--bit-rate", bit_rate, "Bit rate in bit/s")->capture_default_str();
  demod->add_option("--bits", n_bits, "Bits to decode (default: whole signal)");
  demod->add_option("--out", out_path, "Bit file")->required();

  // channel
  auto* channel = app.add_subcommand("channel", "Attenuate and add white Gaussian noise");
  double attenuation = 0, snr_db = 0, noise_power = 0;
  channel->add_option("--in", in_path, "Signal file")->required();
  channel->add_option("--attenuation-db", attenuation, "Attenuation in dB")->capture_default_str();
  auto* snr_opt = channel->add_option("--snr-db", snr_db, "SNR relative to the attenuated signal");
  auto* np_opt = channel->add_option("--noise-power", noise_power, "Noise variance");
  snr_opt->excludes(np_opt);
  channel->add_option("--seed", seed, "Random seed")->capture_default_str();
  channel->add_option("--out", out_path, "Signal file")->required();

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Magnitude spectrum and optional STFT");
  std::size_t fft_size = 0, window_length = 256, hop = 128;
  std::string window = "hann";
  fs::path stft_out;
  spectrum->add_option("--in", in_path, "Signal file")->required();
  spectrum->add_option("--fft-size", fft_size, "FFT length (0 = whole signal)")->capture_default_str();
  spectrum->add_option("--out", out_path, "Spectrum CSV")->required();
  spectrum->add_option("--stft-out", stft_out, "Spectrogram CSV");
  spectrum->add_option("--window-length", window_length, "STFT window length")->capture_default_str();
  spectrum->add_option("--hop", hop, "STFT hop")->capture_default_str();
  spectrum->add_option("--window", window, "hann | rectangular")
      ->check(CLI::IsMember({"hann", "rectangular"}))
      ->capture_default_str();

  // peaks
  auto* peaks = app.add_subcommand("peaks", "Spectral peak list");
  double threshold = 0.1;
  double min_sep = 0;
  peaks->add_option("--in", in_path, "Signal file")->required();
  peaks->add_option("--fft-size", fft_size, "FFT length (0 = whole signal)")->capture_default_str();
  peaks->add_option("--threshold", threshold, "Relative threshold in (0, 1]")->capture_default_str();
  peaks->add_option("--min-separation", min_sep, "Minimum peak spacing in Hz")->capture_default_str();
  peaks->add_option("--out", out_path, "Peaks CSV")->required();

  // features
  auto* features = app.add_subcommand("features", "Feature vector of a signal");
  features->add_option("--in", in_path, "Signal file")->required();
  features->add_option("--out", out_path, "Features JSON")->required();

  // library-add
  auto* lib_add = app.add_subcommand("library-add", "Add a signature to a library file");
  fs::path library_path;
  std::string label;
  std::vector<std::string> metadata;
  std::size_t lib_fft = kDefaultTemplateFftSize;
  lib_add->add_option("--library", library_path, "Library JSON (created if absent)")->required();
  lib_add->add_option("--label", label, "Signature label")->required();
  lib_add->add_option("--in", in_path, "Signal file")->required();
  lib_add->add_option("--meta", metadata, "key=value metadata, repeatable");
  lib_add->add_option("--fft-size", lib_fft, "Template FFT size for a new library")->capture_default_str();

  // library-list
  auto* lib_list = app.add_subcommand("library-list", "List signatures in a library");
  lib_list->add_option("--library", library_path, "Library JSON")->required();

  // classify
  auto* cls = app.add_subcommand("classify", "Match a signal against a library");
  double detection = kDefaultDetectionThreshold;
  cls->add_option("--library", library_path, "Library JSON")->required();
  cls->add_option("--in", in_path, "Signal file")->required();
  cls->add_option("--threshold", detection, "Detection threshold in (0, 1)")->capture_default_str();
  cls->add_option("--out", out_path, "Classification JSON")->required();

  // run
  auto* run = app.add_subcommand("run", "Full experiment into an output directory");
  fs::path config_path;
  bool use_defaults = false;
  auto* cfg_opt = run->add_option("--config", config_path, "Experiment config JSON");
  run->add_flag("--defaults", use_defaults, "Start from the built-in defaults")->excludes(cfg_opt);
  run->add_option("--out", out_path, "Output directory (overrides the config)");
  auto* r_seed = run->add_option("--seed", seed, "Random seed");
  auto* r_bits = run->add_option("--payload-bits", pl_bits, "Payload length");
  auto* r_rate = run->add_option("--bit-rate", bit_rate, "Bit rate in bit/s");
  auto* r_fc = run->add_option("--fc", carrier.fc, "Carrier frequency in Hz");
  auto* r_amp = run->add_option("--amplitude", carrier.amplitude, "Carrier amplitude");
  auto* r_fs = run->add_option("--sample-rate", carrier.sample_rate, "Sample rate in Hz");
  auto* r_mod = run->add_option("--modulation", scheme, "ask | fsk | psk")->check(CLI::IsMember({"ask", "fsk", "psk"}));
  bool no_compose = false, r_demod = false;
  run->add_flag("--no-compose", no_compose, "Emit the keyed signal without the carrier");
  auto* r_att = run->add_option("--attenuation-db", attenuation, "Channel attenuation in dB");
  auto* r_snr = run->add_option("--snr-db", snr_db, "Channel SNR in dB");
  auto* r_np = run->add_option("--noise-power", noise_power, "Channel noise variance");
  r_snr->excludes(r_np);
  std::uint64_t channel_seed = 0;
  auto* r_cseed = run->add_option("--channel-seed", channel_seed, "Channel noise seed (default: --seed)");
  run->add_flag("--demodulate", r_demod, "Demodulate and report BER");
  auto* r_lib = run->add_option("--library", library_path, "Signature library for classification");
  auto* r_thr = run->add_option("--threshold", detection, "Detection threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (propagate->parsed()) {
      if (p_method == "montecarlo" && p_trials < 1) throw UsageError("--trials must be >= 1");
      return cmd_propagate(p_n, p_m, p_x0, p_steps, p_method, p_trials, seed, p_out);
    }

    if (payload->parsed()) {
      const BitStream bits = payload->count("--hex") ? hex_to_bits(pl_hex, bit_rate)
                                                     : random_payload(seed, pl_bits, bit_rate);
      io::write_bits(pl_out, bits);
      std::cout << bits.size() << " bits";
      if (bits.size() % 4 == 0 && !bits.empty()) std::cout << " hex " << bits_to_hex(bits);
      std::cout << "\n";
      return 0;
    }

    if (encode->parsed()) {
      const BitStream bits = io::read_bits(in_path, bit_rate);
      io::write_text(out_path, io::line_code_to_text(manchester_encode(bits)));
      if (!waveform_path.empty()) io::write_signal(waveform_path, rectangular_waveform(bits, sample_rate, 1.0, 0.0));
      std::cout << bits.size() << " bits -> " << 2 * bits.size() << " half-bit levels\n";
      return 0;
    }

    if (mod->parsed()) {
      const BitStream bits = io::read_bits(in_path, bit_rate);
      const CarrierSpec spec = carrier.spec();
      const auto phase = fsk_phase == "switched" ? FskPhase::switched : FskPhase::continuous;
      SampledSignal out = modulate(kModulations.at(scheme), bits, spec, FskOptions{phase});
      if (compose || !carrier_out.empty()) {
        const SampledSignal c = generate_carrier(spec, static_cast<double>(bits.size()) / bit_rate);
        if (compose) out = compose_emitted(c, out);
        if (!carrier_out.empty()) io::write_signal(carrier_out, c);
      }
      io::write_signal(out_path, out);
      std::cout << scheme << " " << out.size() << " samples at " << fmt(spec.sample_rate) << " Hz\n";
      return 0;
    }

    if (demod->parsed()) {
      const SampledSignal s = io::read_signal(in_path);
      CarrierSpec spec = carrier.spec();
      spec.sample_rate = s.sample_rate;
      const std::size_t per_bit = samples_per_bit(spec.sample_rate, bit_rate);
      const std::size_t count = n_bits ? n_bits : static_cast<std::size_t>(s.size()) / per_bit;
      const BitStream bits = demodulate(kModulations.at(scheme), s, spec, bit_rate, count);
      io::write_bits(out_path, bits);
      std::cout << bits.size() << " bits decoded\n";
      return 0;
    }

    if (channel->parsed()) {
      ChannelParams params;
      params.attenuation_db = attenuation;
      params.seed = seed;
      if (channel->count("--snr-db")) params.snr_db = snr_db;
      if (channel->count("--noise-power")) params.noise_power = noise_power;
      if (!params.snr_db && !params.noise_power) throw UsageError("one of --snr-db or --noise-power is required");
      const SampledSignal s = io::read_signal(in_path);
      const SampledSignal r = apply_channel(s, params);
      io::write_signal(out_path, r);
      SampledSignal reference = s;
      reference.samples *= params.gain();
      std::cout << "measured_snr_db " << fmt(measure_snr(reference, r)) << "\n";
      return 0;
    }

    if (spectrum->parsed()) {
      const SampledSignal s = io::read_signal(in_path);
      const Spectrum sp = fft_magnitude(s, fft_size);
      io::write_spectrum_csv(out_path, sp);
      if (!stft_out.empty()) io::write_spectrogram_csv(stft_out, stft(s, window_length, hop, parse_window(window)));
      std::cout << sp.size() << " bins, bin width " << fmt(sp.bin_width) << " Hz\n";
      return 0;
    }

    if (peaks->parsed()) {
      const SampledSignal s = io::read_signal(in_path);
      const auto found = find_peaks(fft_magnitude(s, fft_size), threshold, min_sep);
      io::write_peaks_csv(out_path, found);
      for (const auto& p : found) std::cout << fmt(p.frequency) << " Hz  " << fmt(p.magnitude) << "\n";
      return 0;
    }

    if (features->parsed()) {
      const FeatureVector f = extract_features(io::read_signal(in_path));
      io::write_text(out_path, to_json_text(f));
      std::cout << "centroid " << fmt(f.spectral_centroid) << " Hz, rms " << fmt(f.rms_power) << "\n";
      return 0;
    }

    if (lib_add->parsed()) {
      const SampledSignal s = io::read_signal(in_path);
      std::map<std::string, std::string> meta;
      for (const auto& kv : metadata) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--meta expects key=value, got '" + kv + "'");
        meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      const SignatureLibrary base =
          fs::exists(library_path) ? library_load(library_path) : SignatureLibrary(lib_fft, s.sample_rate);
      const SignatureLibrary updated = library_add(base, label, s, std::move(meta));
      library_save(updated, library_path);
      std::cout << "library holds " << updated.size() << " signatures\n";
      return 0;
    }

    if (lib_list->parsed()) {
      const SignatureLibrary lib = library_load(library_path);
      std::cout << "fft_size " << lib.fft_size() << ", sample_rate " << fmt(lib.sample_rate()) << "\n";
      for (const auto& e : lib.entries()) {
        std::cout << e.label << "  centroid " << fmt(e.features.spectral_centroid) << " Hz";
        for (const auto& [k, v] : e.metadata) std::cout << "  " << k << "=" << v;
        std::cout << "\n";
      }
      return 0;
    }

    if (cls->parsed()) {
      const auto result = classify(io::read_signal(in_path), library_load(library_path), detection);
      io::write_text(out_path, io::classification_to_json_text(result));
      std::cout << result.label << " " << fmt(result.score) << "\n";
      return 0;
    }

    if (run->parsed()) {
      ExperimentConfig config;
      if (!config_path.empty()) {
        const std::string text = io::read_text(config_path);
        config = ExperimentConfig::from_json_text(text);
        if (out_path.empty() && !nlohmann::json::parse(text).contains("output_dir")) {
          throw UsageError("--out is required when the config has no output_dir");
        }
      } else if (out_path.empty()) {
        throw UsageError("--out is required");
      }
      if (!out_path.empty()) config.output_dir = out_path;
      if (*r_seed) config.seed = seed;
      if (*r_bits) config.payload_bits = pl_bits;
      if (*r_rate) config.bit_rate = bit_rate;
      if (*r_fc) config.carrier.center_frequency = carrier.fc;
      if (*r_amp) config.carrier.amplitude = carrier.amplitude;
      if (*r_fs) config.carrier.sample_rate = carrier.sample_rate;
      if (*r_mod) config.modulation = kModulations.at(scheme);
      if (no_compose) config.compose_with_carrier = false;
      if (r_demod) config.demodulate = true;
      if (*r_lib) config.library_path = library_path;
      if (*r_thr) config.detection_threshold = detection;
      if (*r_snr || *r_np || *r_att || *r_cseed) {
        ChannelParams ch = config.channel.value_or(ChannelParams{});
        if (!config.channel) ch.seed = config.seed;
        if (*r_att) ch.attenuation_db = attenuation;
        if (*r_snr) {
          ch.snr_db = snr_db;
          ch.noise_power.reset();
        }
        if (*r_np) {
          ch.noise_power = noise_power;
          ch.snr_db.reset();
        }
        if (*r_cseed) ch.seed = channel_seed;
        config.channel = ch;
      }
      const ExperimentReport report = run_experiment(config);
      std::cout << "report " << report.report_path.generic_string() << "\n";
      std::cout << "peaks";
      for (const auto& p : report.peaks) std::cout << " " << fmt(p.frequency);
      std::cout << " Hz\n";
      if (report.ber) std::cout << "ber " << fmt(*report.ber) << " (" << *report.bit_errors << " errors)\n";
      if (report.measured_snr_db) std::cout << "measured_snr_db " << fmt(*report.measured_snr_db) << "\n";
      if (report.classification) {
        std::cout << "classification " << report.classification->label << " "
                  << fmt(report.classification->score) << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
