#include "radsim/codec.hpp"

#include <cmath>

#include "radsim/errors.hpp"
#include "radsim/random.hpp"

namespace radsim {

BitStream::BitStream(std::vector<std::uint8_t> bits, double bit_rate)
    : bits_(std::move(bits)), bit_rate_(bit_rate) {
  if (!(bit_rate_ > 0) || !std::isfinite(bit_rate_)) {
    throw ParameterError("bit_rate must be positive and finite");
  }
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) throw ParameterError("bit " + std::to_string(i) + " is not 0 or 1");
  }
}

std::size_t hamming_distance(const BitStream& a, const BitStream& b) {
  if (a.size() != b.size()) throw ShapeError("bit streams differ in length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitStream hex_to_bits(std::string_view hex_text, double bit_rate) {
  std::vector<std::uint8_t> bits;
  bits.reserve(hex_text.size() * 4);
  for (std::size_t pos = 0; pos < hex_text.size(); ++pos) {
    const int v = hex_value(hex_text[pos]);
    if (v < 0) {
      throw ParseError(std::string("invalid hex digit '") + hex_text[pos] + "'", pos);
    }
    for (int shift = 3; shift >= 0; --shift) bits.push_back(static_cast<std::uint8_t>((v >> shift) & 1));
  }
  return BitStream(std::move(bits), bit_rate);
}

std::string bits_to_hex(const BitStream& stream) {
  if (stream.size() % 4 != 0) throw ShapeError("bit count is not a multiple of 4");
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(stream.size() / 4);
  for (std::size_t i = 0; i < stream.size(); i += 4) {
    const int v = (stream[i] << 3) | (stream[i + 1] << 2) | (stream[i + 2] << 1) | stream[i + 3];
    out.push_back(digits[v]);
  }
  return out;
}

BitStream random_payload(std::uint64_t seed, std::size_t n_bits, double bit_rate) {
  if (n_bits == 0) throw ParameterError("payload needs at least one bit");
  Rng rng(seed);
  std::vector<std::uint8_t> bits(n_bits);
  for (auto& b : bits) b = random_bit(rng);
  return BitStream(std::move(bits), bit_rate);
}

LineCodeSignal manchester_encode(const BitStream& stream) {
  if (stream.empty()) throw ShapeError("cannot Manchester-encode an empty stream");
  LineCodeSignal out;
  out.half_bit_duration = 0.5 / stream.bit_rate();
  out.levels.reserve(2 * stream.size());
  for (auto bit : stream.bits()) {
    if (bit) {
      out.levels.push_back(Level::low);
      out.levels.push_back(Level::high);
    } else {
      out.levels.push_back(Level::high);
      out.levels.push_back(Level::low);
    }
  }
  return out;
}

BitStream manchester_decode(const LineCodeSignal& signal) {
  if (signal.levels.size() % 2 != 0) throw ShapeError("Manchester signal has odd half-bit count");
  if (!(signal.half_bit_duration > 0)) throw ParameterError("half_bit_duration must be positive");
  std::vector<std::uint8_t> bits;
  bits.reserve(signal.levels.size() / 2);
  for (std::size_t i = 0; i < signal.levels.size(); i += 2) {
    const Level first = signal.levels[i];
    const Level second = signal.levels[i + 1];
    if (first == second) throw DecodeError("no mid-bit transition", i / 2);
    bits.push_back(first == Level::low ? 1 : 0);
  }
  return BitStream(std::move(bits), 0.5 / signal.half_bit_duration);
}

SampledSignal rectangular_waveform(const BitStream& stream, double sample_rate, double high_level,
                                   double low_level) {
  if (!(sample_rate >= 2.0 * stream.bit_rate())) {
    throw ConfigError("sample_rate must be at least twice the bit rate");
  }
  const auto per_bit = static_cast<Eigen::Index>(std::llround(sample_rate / stream.bit_rate()));
  VectorXd samples(static_cast<Eigen::Index>(stream.size()) * per_bit);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    samples.segment(static_cast<Eigen::Index>(i) * per_bit, per_bit)
        .setConstant(stream[i] ? high_level : low_level);
  }
  return make_signal(sample_rate, std::move(samples));
}

}  // namespace radsim
