#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "radsim/channel.hpp"
#include "radsim/errors.hpp"
#include "radsim/modulation.hpp"
#include "radsim/random.hpp"
#include "radsim/recognition.hpp"

using namespace radsim;

namespace {

SampledSignal keyed(Modulation m, std::uint64_t seed, std::size_t bits = 64) {
  return modulate(m, random_payload(seed, bits, 250), CarrierSpec{});
}

SampledSignal noisy(const SampledSignal& s, double snr_db, std::uint64_t seed) {
  ChannelParams ch;
  ch.snr_db = snr_db;
  ch.seed = seed;
  return apply_channel(s, ch);
}

SignatureLibrary three_class_library() {
  return SignatureLibrary(4096, 48000)
      .add("fsk", keyed(Modulation::fsk, 1000, 256))
      .add("psk", keyed(Modulation::psk, 1001, 256), {{"scheme", "bpsk"}})
      .add("ask", keyed(Modulation::ask, 1002, 256));
}

}  // namespace

TEST_CASE("features of a pure tone") {
  CarrierSpec spec;
  spec.center_frequency = 3000;
  const auto tone = generate_carrier(spec, 0.1);
  const auto f = extract_features(tone);
  CHECK(f.rms_power == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(f.crest_factor == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  // Two crossings per period: 2 * 3000 / 48000.
  CHECK(f.zero_crossing_rate == doctest::Approx(0.125).epsilon(0.01));
  CHECK(f.spectral_centroid == doctest::Approx(3000).epsilon(1e-9));
  CHECK(f.spectral_bandwidth < 1e-6);
  CHECK(f.spectral_entropy < 1e-9);
  REQUIRE(f.dominant_peaks.size() == 1);
  CHECK(f.dominant_peaks[0].first == doctest::Approx(3000));
  CHECK(f.dominant_peaks[0].second == 1.0);
}

TEST_CASE("features of silence and of white noise") {
  SampledSignal silence{1000, VectorXd::Zero(128), 0};
  const auto z = extract_features(silence);
  CHECK(z.rms_power == 0);
  CHECK(z.crest_factor == 0);
  CHECK(z.spectral_entropy == 0);
  CHECK(z.dominant_peaks.empty());

  Rng rng(3);
  VectorXd x(8192);
  fill_standard_normal(rng, x);
  const auto n = extract_features({8000, x, 0});
  CHECK(n.spectral_entropy > 0.85);
  CHECK(n.zero_crossing_rate == doctest::Approx(0.5).epsilon(0.05));
  CHECK(n.spectral_centroid == doctest::Approx(2000).epsilon(0.05));
  CHECK(n.dominant_peaks.size() <= kMaxDominantPeaks);

  CHECK_THROWS_AS(extract_features({1000, VectorXd::Zero(63), 0}), ShapeError);
}

TEST_CASE("feature values scale as expected") {
  const auto s = keyed(Modulation::fsk, 4);
  const auto a = extract_features(s);
  const auto b = extract_features({s.sample_rate, 2.0 * s.samples, 0});
  CHECK(b.rms_power == doctest::Approx(2 * a.rms_power));
  CHECK(b.crest_factor == doctest::Approx(a.crest_factor));
  CHECK(b.spectral_centroid == doctest::Approx(a.spectral_centroid));
  CHECK(b.spectral_entropy == doctest::Approx(a.spectral_entropy));
}

TEST_CASE("unit energy spectrum") {
  const auto s = keyed(Modulation::psk, 9, 256);
  const auto u = unit_energy_spectrum(s, 4096);
  CHECK(u.size() == 2049);
  CHECK(u.magnitudes.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const auto z = unit_energy_spectrum({48000, VectorXd::Zero(100), 0}, 4096);
  CHECK(z.magnitudes.norm() == 0.0);
  CHECK(spectral_correlation(u, u) == doctest::Approx(1.0));
  CHECK_THROWS_AS(spectral_correlation(u, z), ParameterError);
  CHECK_THROWS_AS(spectral_correlation(u, unit_energy_spectrum(s, 1024)), ShapeError);
}

TEST_CASE("library add is persistent and rejects conflicts") {
  const SignatureLibrary empty(4096, 48000);
  const auto one = empty.add("fsk", keyed(Modulation::fsk, 1));
  CHECK(empty.empty());
  CHECK(one.size() == 1);
  CHECK(one.find("fsk") != nullptr);
  CHECK(one.find("psk") == nullptr);
  CHECK_THROWS_AS(one.add("fsk", keyed(Modulation::fsk, 2)), ConflictError);
  CHECK_THROWS_AS(one.add("unknown", keyed(Modulation::fsk, 2)), ParameterError);
  CHECK_THROWS_AS(one.add("", keyed(Modulation::fsk, 2)), ParameterError);
  CHECK_THROWS_AS(one.add("tone", {44100, VectorXd::Ones(5000), 0}), ShapeError);
  CHECK_THROWS_AS(one.add("quiet", {48000, VectorXd::Zero(5000), 0}), ParameterError);
  CHECK_THROWS_AS(SignatureLibrary(1000, 48000), ParameterError);
  CHECK(library_add(one, "psk", keyed(Modulation::psk, 2)).size() == 2);
}

TEST_CASE("library json round trip is byte exact") {
  const auto lib = three_class_library();
  const auto text = lib.to_json_text();
  const auto back = SignatureLibrary::from_json_text(text);
  CHECK(back.to_json_text() == text);
  REQUIRE(back.size() == 3);
  for (const auto& e : lib.entries()) {
    const auto* other = back.find(e.label);
    REQUIRE(other != nullptr);
    CHECK(other->template_spectrum.magnitudes == e.template_spectrum.magnitudes);
    CHECK(other->features == e.features);
    CHECK(other->metadata == e.metadata);
  }

  const auto dir = std::filesystem::temp_directory_path() / "radsim_recognition_test";
  std::filesystem::create_directories(dir);
  library_save(lib, dir / "lib.json");
  CHECK(library_load(dir / "lib.json").to_json_text() == text);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(library_load(dir / "missing.json"), IoError);
}

TEST_CASE("library loader rejects malformed documents") {
  const auto text = SignatureLibrary(1024, 8000).add("a", {8000, VectorXd::Random(2048), 0}).to_json_text();
  auto mutate = [&](const std::string& from, const std::string& to) {
    auto copy = text;
    const auto at = copy.find(from);
    REQUIRE(at != std::string::npos);
    copy.replace(at, from.size(), to);
    return copy;
  };
  CHECK_THROWS_AS(SignatureLibrary::from_json_text("{"), ParseError);
  CHECK_THROWS_AS(SignatureLibrary::from_json_text(mutate("radsim-signature-library", "other")), ParseError);
  CHECK_THROWS_AS(SignatureLibrary::from_json_text(mutate("\"1.0\"", "\"2.0\"")), ParseError);
  // A minor bump stays readable.
  CHECK_NOTHROW(SignatureLibrary::from_json_text(mutate("\"1.0\"", "\"1.7\"")));
  try {
    SignatureLibrary::from_json_text(mutate("\"template\": [", "\"template\": [0.5,"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.location()) == "/entries/0/template");
  }
}

TEST_CASE("classification of clean and noisy keyed signals") {
  const auto lib = three_class_library();
  const std::pair<const char*, Modulation> classes[] = {
      {"ask", Modulation::ask}, {"fsk", Modulation::fsk}, {"psk", Modulation::psk}};
  int correct = 0;
  int total = 0;
  for (const auto& [label, m] : classes) {
    for (std::uint64_t t = 0; t < 10; ++t) {
      const auto r = classify(noisy(keyed(m, 500 + t), 15, 600 + t), lib, 0.5);
      correct += r.label == label;
      ++total;
      CHECK(r.runner_up.has_value());
      CHECK(r.score >= r.runner_up->second);
    }
  }
  CHECK(correct >= total - 1);

  // The exact template signal correlates perfectly with its own entry.
  CHECK(classify(keyed(Modulation::fsk, 1000, 256), lib, 0.5).score == doctest::Approx(1.0));
}

TEST_CASE("white noise is rejected as unknown") {
  const auto lib = three_class_library();
  int rejected = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng(7000 + t);
    VectorXd x(16384);
    fill_standard_normal(rng, x);
    rejected += classify({48000, x, 0}, lib, 0.8).label == kUnknownLabel;
  }
  CHECK(rejected == 20);
}

TEST_CASE("classify preconditions and tie-break") {
  const SignatureLibrary empty(4096, 48000);
  CHECK_THROWS_AS(classify(keyed(Modulation::fsk, 1), empty), ConfigError);
  const auto lib = empty.add("b", keyed(Modulation::fsk, 1)).add("a", keyed(Modulation::fsk, 1));
  const auto r = classify(keyed(Modulation::fsk, 1), lib, 0.5);
  CHECK(r.label == "a");
  REQUIRE(r.runner_up);
  CHECK(r.runner_up->first == "b");
  CHECK(r.runner_up->second == r.score);
  CHECK_THROWS_AS(classify({44100, VectorXd::Ones(5000), 0}, lib), ShapeError);
  CHECK_THROWS_AS(classify(keyed(Modulation::fsk, 1), lib, 1.0), ParameterError);
}
