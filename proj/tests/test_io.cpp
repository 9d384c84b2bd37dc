#include <doctest.h>

#include <filesystem>
#include <limits>

#include "radsim/errors.hpp"
#include "radsim/io.hpp"
#include "radsim/random.hpp"

using namespace radsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SampledSignal random_signal(std::uint64_t seed, Eigen::Index n) {
  Rng rng(seed);
  VectorXd x(n);
  fill_standard_normal(rng, x);
  return {44100, x, 0.125};
}

}  // namespace

TEST_CASE("doubles round trip through text") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(uniform_index(rng, 40)) - 20);
    CHECK(io::parse_double(io::format_double(v), "test") == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK_THROWS_AS(io::parse_double("1.5x", "test"), ParseError);
  CHECK_THROWS_AS(io::parse_double("", "test"), ParseError);
}

TEST_CASE("signal sidecar round trip is bit exact") {
  TempDir tmp("radsim_io_sidecar");
  const auto s = random_signal(2, 1000);
  io::write_signal(tmp.path / "x.json", s);
  CHECK(fs::file_size(tmp.path / "x.f64") == 8000);
  const auto back = io::read_signal(tmp.path / "x.json");
  CHECK(back.sample_rate == s.sample_rate);
  CHECK(back.start_time == s.start_time);
  CHECK(back.samples == s.samples);

  io::write_text(tmp.path / "x.f64", "short");
  CHECK_THROWS_AS(io::read_signal(tmp.path / "x.json"), ParseError);
  CHECK_THROWS_AS(io::read_signal(tmp.path / "absent.json"), IoError);
}

TEST_CASE("signal csv round trip is bit exact") {
  TempDir tmp("radsim_io_csv");
  const auto s = random_signal(3, 200);
  io::write_signal(tmp.path / "x.csv", s);
  const auto text = io::read_text(tmp.path / "x.csv");
  CHECK(text.find("time,value") != std::string::npos);
  const auto back = io::read_signal(tmp.path / "x.csv");
  CHECK(back.sample_rate == s.sample_rate);
  CHECK(back.samples == s.samples);

  // Without the comment line the rate comes from the time column.
  io::write_text(tmp.path / "y.csv", "time,value\n0,1\n0.5,2\n1,3\n");
  const auto y = io::read_signal(tmp.path / "y.csv");
  CHECK(y.sample_rate == 2.0);
  CHECK(y.size() == 3);

  io::write_text(tmp.path / "bad.csv", "time,value\n0,1,2\n");
  CHECK_THROWS_AS(io::read_signal(tmp.path / "bad.csv"), ParseError);
}

TEST_CASE("bit text") {
  const auto b = random_payload(4, 37, 100);
  CHECK(io::bits_from_text(io::bits_to_text(b), 100) == b);
  CHECK(io::bits_from_text("0101\n", 1).size() == 4);
  try {
    io::bits_from_text("01x1", 1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
  CHECK(io::line_code_to_text(manchester_encode(BitStream({0, 1}, 1))) == "HLLH\n");
}

TEST_CASE("curve csv") {
  TempDir tmp("radsim_io_curve");
  const auto curve = simulate_curve({100, 15, 1}, 50, CurveMethod::closed_form);
  io::write_curve_csv(tmp.path / "c.csv", curve);
  const auto back = io::read_curve_csv(tmp.path / "c.csv");
  REQUIRE(back.size() == curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    CHECK(back.points[i].time_step == curve.points[i].time_step);
    CHECK(std::abs(back.points[i].expected_infected - curve.points[i].expected_infected) <= 5e-13);
  }
  io::write_text(tmp.path / "bad.csv", "x,y\n");
  CHECK_THROWS_AS(io::read_curve_csv(tmp.path / "bad.csv"), ParseError);
}

TEST_CASE("peaks csv round trip") {
  TempDir tmp("radsim_io_peaks");
  const std::vector<SpectralPeak> peaks{{1875, 0.5, 480}, {2000, 1.0 / 3.0, 512}};
  io::write_peaks_csv(tmp.path / "p.csv", peaks);
  const auto back = io::read_peaks_csv(tmp.path / "p.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].frequency == 2000);
  CHECK(back[1].magnitude == 1.0 / 3.0);
  CHECK(back[0].bin_index == 480);
}

TEST_CASE("classification json") {
  ClassificationResult r{"fsk", 0.93, std::make_pair(std::string("psk"), 0.4)};
  const auto text = io::classification_to_json_text(r);
  CHECK(text.find("\"fsk\"") != std::string::npos);
  CHECK(text.find("\"psk\"") != std::string::npos);
  CHECK(io::classification_to_json_text(ClassificationResult{"unknown", 0.1, std::nullopt}).find("null") !=
        std::string::npos);
}
