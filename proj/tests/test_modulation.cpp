#include <doctest.h>

#include <cmath>
#include <numbers>

#include "radsim/channel.hpp"
#include "radsim/errors.hpp"
#include "radsim/modulation.hpp"
#include "radsim/spectral.hpp"

using namespace radsim;

namespace {

CarrierSpec tone(double fc, double fs) {
  CarrierSpec s;
  s.center_frequency = fc;
  s.sample_rate = fs;
  return s;
}

BitStream constant_bits(std::size_t n, std::uint8_t value, double rate) {
  return BitStream(std::vector<std::uint8_t>(n, value), rate);
}

double peak_frequency(const SampledSignal& s) {
  const auto sp = fft_magnitude(s);
  Eigen::Index k = 0;
  sp.magnitudes.maxCoeff(&k);
  return sp.bin_frequencies[k];
}

double ber(Modulation m, const CarrierSpec& spec, double rate, double snr_db, std::uint64_t seed) {
  const auto bits = random_payload(seed, 10000, rate);
  ChannelParams ch;
  ch.snr_db = snr_db;
  ch.seed = seed + 1;
  const auto rx = apply_channel(modulate(m, bits, spec), ch);
  const auto decoded = demodulate(m, rx, spec, rate, bits.size());
  return static_cast<double>(hamming_distance(bits, decoded)) / static_cast<double>(bits.size());
}

}  // namespace

TEST_CASE("carrier generation") {
  const auto dc = generate_carrier(tone(0, 1000), 0.5);
  CHECK(dc.size() == 500);
  CHECK((dc.samples.array() == 1.0).all());

  const auto c = generate_carrier(tone(100, 10000), 1.0);
  CHECK(c.size() == 10000);
  CHECK(std::abs(peak_frequency(c) - 100) <= 1.0);

  auto shifted = tone(100, 10000);
  shifted.initial_phase = std::numbers::pi / 2;
  const auto s = generate_carrier(shifted, 1.0);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    CHECK(std::abs(s.samples[k] + std::sin(2 * std::numbers::pi * 100 * k / 10000.0)) < 1e-12);
  }

  CHECK_THROWS_AS(generate_carrier(tone(600, 1000), 1.0), ConfigError);
  CHECK_THROWS_AS(generate_carrier(tone(100, 1000), 0.0), ParameterError);
  auto bad_amp = tone(100, 1000);
  bad_amp.amplitude = 0;
  CHECK_THROWS_AS(generate_carrier(bad_amp, 1.0), ConfigError);
}

TEST_CASE("samples per bit must be integral") {
  CHECK(samples_per_bit(48000, 250) == 192);
  CHECK_THROWS_AS(samples_per_bit(48000, 7), ConfigError);
  CHECK_THROWS_AS(fsk_modulate(constant_bits(4, 1, 7), tone(2000, 48000)), ConfigError);
}

TEST_CASE("fsk single tones and two-tone spectrum") {
  const auto spec = tone(2000, 48000);
  const double rate = 250;
  CHECK(std::abs(peak_frequency(fsk_modulate(constant_bits(200, 1, rate), spec)) - 2125) <= 48000.0 / (200 * 192));
  CHECK(std::abs(peak_frequency(fsk_modulate(constant_bits(200, 0, rate), spec)) - 1875) <= 48000.0 / (200 * 192));

  // Random keying; a strictly alternating pattern is periodic and adds lines at fc +- k R/2.
  const auto sp = fft_magnitude(fsk_modulate(random_payload(3, 400, rate), spec));
  const auto peaks = find_peaks(sp, 0.3, rate / 2);
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(peaks[0].frequency - 1875) <= sp.bin_width);
  CHECK(std::abs(peaks[1].frequency - 2125) <= sp.bin_width);

  CHECK_THROWS_AS(fsk_modulate(constant_bits(4, 1, 250), tone(23900, 48000)), ConfigError);
}

TEST_CASE("fsk segments are phase continuous") {
  const auto spec = tone(2000, 48000);
  const auto bits = random_payload(5, 64, 250);
  const auto s = fsk_modulate(bits, spec);
  // Max sample-to-sample step of a 2125 Hz cosine at 48 kHz is 2 pi f / fs.
  const double max_step = 2 * std::numbers::pi * 2125 / 48000 * 1.001;
  for (Eigen::Index k = 1; k < s.size(); ++k) CHECK(std::abs(s.samples[k] - s.samples[k - 1]) <= max_step);

  // The switched variant reproduces s_b(t) = A cos(2 pi f_b t) literally.
  const auto sw = fsk_modulate(bits, spec, {FskPhase::switched});
  for (Eigen::Index k = 0; k < sw.size(); ++k) {
    const double f = bits[static_cast<std::size_t>(k / 192)] ? 2125.0 : 1875.0;
    CHECK(sw.samples[k] == doctest::Approx(std::cos(2 * std::numbers::pi * f * k / 48000.0)).epsilon(1e-9));
  }
  CHECK(fsk_demodulate(sw, spec, 250, bits.size()) == bits);
}

TEST_CASE("ask keying") {
  const auto spec = tone(2000, 48000);
  CHECK((ask_modulate(constant_bits(10, 0, 250), spec).samples.array() == 0.0).all());
  const auto ones = ask_modulate(constant_bits(10, 1, 250), spec);
  const auto carrier = generate_carrier(spec, 10 / 250.0);
  CHECK(ones.samples == carrier.samples);

  const auto half = ask_modulate(BitStream({1, 0}, 250), spec);
  CHECK(half.samples.tail(192).squaredNorm() == 0.0);
  CHECK(half.samples.head(192) == carrier.samples.head(192));
}

TEST_CASE("ask energy never exceeds the carrier") {
  const auto spec = tone(2000, 48000);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto bits = random_payload(seed, 64, 250);
    const double e = ask_modulate(bits, spec).samples.squaredNorm();
    const double full = generate_carrier(spec, 64 / 250.0).samples.squaredNorm();
    CHECK(e < full);
  }
  const double all_on = ask_modulate(constant_bits(64, 1, 250), spec).samples.squaredNorm();
  CHECK(all_on == generate_carrier(spec, 64 / 250.0).samples.squaredNorm());
}

TEST_CASE("psk keying") {
  const auto spec = tone(2000, 48000);
  const auto carrier = generate_carrier(spec, 10 / 250.0);
  CHECK(psk_modulate(constant_bits(10, 1, 250), spec).samples == carrier.samples);
  const auto zeros = psk_modulate(constant_bits(10, 0, 250), spec);
  CHECK((zeros.samples + carrier.samples).cwiseAbs().maxCoeff() < 1e-12);

  const auto pair = psk_modulate(BitStream({1, 0}, 250), spec);
  const double first = pair.samples.head(192).dot(carrier.samples.head(192));
  const double second = pair.samples.tail(192).dot(carrier.samples.segment(192, 192));
  CHECK(first > 0);
  CHECK(second < 0);
}

TEST_CASE("psk equals chip sequence times carrier") {
  const auto spec = tone(1000, 16000);
  const auto bits = random_payload(77, 100, 500);
  const auto psk = psk_modulate(bits, spec);
  const auto carrier = generate_carrier(spec, 100 / 500.0);
  for (Eigen::Index k = 0; k < psk.size(); ++k) {
    const double chip = bits[static_cast<std::size_t>(k / 32)] ? 1.0 : -1.0;
    CHECK(std::abs(psk.samples[k] - chip * carrier.samples[k]) <= 1e-12);
  }
}

TEST_CASE("modulators emit bit_count * samples_per_bit samples") {
  const auto spec = tone(2000, 48000);
  for (std::size_t n : {1u, 7u, 64u}) {
    const auto bits = random_payload(n, n, 250);
    for (auto m : {Modulation::ask, Modulation::fsk, Modulation::psk}) {
      CHECK(static_cast<std::size_t>(modulate(m, bits, spec).size()) == n * 192);
    }
  }
}

TEST_CASE("compose") {
  const auto spec = tone(2000, 48000);
  const auto carrier = generate_carrier(spec, 0.1);
  SampledSignal zeros{48000, VectorXd::Zero(carrier.size()), 0};
  CHECK(compose_emitted(carrier, zeros).samples == carrier.samples);
  SampledSignal neg{48000, -carrier.samples, 0};
  CHECK((compose_emitted(carrier, neg).samples.array() == 0.0).all());
  SampledSignal short_sig{48000, VectorXd::Zero(10), 0};
  CHECK_THROWS_AS(compose_emitted(carrier, short_sig), ShapeError);
  SampledSignal other_rate{44100, VectorXd::Zero(carrier.size()), 0};
  CHECK_THROWS_AS(compose_emitted(carrier, other_rate), ShapeError);
}

TEST_CASE("compose of carrier and fsk shows three peaks") {
  const auto spec = tone(2000, 48000);
  const auto bits = random_payload(0, 64, 250);
  const auto emitted = compose_emitted(generate_carrier(spec, 64 / 250.0), fsk_modulate(bits, spec));
  const auto sp = fft_magnitude(emitted);
  const auto peaks = find_peaks(sp, 0.1, 125);
  REQUIRE(peaks.size() == 3);
  CHECK(std::abs(peaks[0].frequency - 1875) <= sp.bin_width);
  CHECK(std::abs(peaks[1].frequency - 2000) <= sp.bin_width);
  CHECK(std::abs(peaks[2].frequency - 2125) <= sp.bin_width);
}

TEST_CASE("noiseless round trips on random payloads") {
  const auto spec = tone(2000, 48000);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto bits = random_payload(seed, 1000, 250);
    for (auto m : {Modulation::ask, Modulation::fsk, Modulation::psk}) {
      CHECK(demodulate(m, modulate(m, bits, spec), spec, 250, bits.size()) == bits);
    }
  }
}

TEST_CASE("demodulator edge cases") {
  const auto spec = tone(2000, 48000);
  SampledSignal silence{48000, VectorXd::Zero(192 * 8), 0};
  const auto bits = fsk_demodulate(silence, spec, 250, 8);
  CHECK(bits == constant_bits(8, 0, 250));
  CHECK_THROWS_AS(fsk_demodulate(silence, spec, 250, 9), ShapeError);
  CHECK_THROWS_AS(psk_demodulate(silence, spec, 250, 9), ShapeError);
  CHECK_THROWS_AS(ask_demodulate(silence, spec, 250, 9), ShapeError);
  CHECK_THROWS_AS(ask_demodulate(silence, spec, 250, 8, 0.0), ParameterError);
}

TEST_CASE("bit error rates under noise") {
  const auto spec = tone(2000, 48000);
  CHECK(ber(Modulation::fsk, spec, 250, 10.0, 100) < 1e-2);

  // 8 samples per bit keeps per-bit Eb/N0 low enough for errors to show up.
  const auto narrow = tone(2000, 8000);
  CHECK(ber(Modulation::psk, narrow, 1000, 0.0, 200) < ber(Modulation::psk, narrow, 1000, -10.0, 200));
}
