#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "radsim/signal.hpp"

namespace radsim {

// Binary payload with its bit rate (bits per second).
class BitStream {
 public:
  BitStream() = default;
  BitStream(std::vector<std::uint8_t> bits, double bit_rate);

  const std::vector<std::uint8_t>& bits() const { return bits_; }
  double bit_rate() const { return bit_rate_; }
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

  friend bool operator==(const BitStream&, const BitStream&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  double bit_rate_{1.0};
};

enum class Level : std::uint8_t { low = 0, high = 1 };

// Half-bit level sequence produced by Manchester encoding.
struct LineCodeSignal {
  std::vector<Level> levels;
  double half_bit_duration{0.5};
};

std::size_t hamming_distance(const BitStream& a, const BitStream& b);

// Each hex digit expands to four bits, most significant first.
BitStream hex_to_bits(std::string_view hex_text, double bit_rate);

// Uppercase hex; bit count must be a multiple of 4.
std::string bits_to_hex(const BitStream& stream);

// Bits are the most significant bit of successive mt19937_64 outputs.
BitStream random_payload(std::uint64_t seed, std::size_t n_bits, double bit_rate);

// 0 -> (high, low), 1 -> (low, high): the level changes mid-bit in the direction
// of the bit value.
LineCodeSignal manchester_encode(const BitStream& stream);
BitStream manchester_decode(const LineCodeSignal& signal);

// Piecewise-constant rendering, round(sample_rate / bit_rate) samples per bit.
SampledSignal rectangular_waveform(const BitStream& stream, double sample_rate, double high_level,
                                   double low_level);

}  // namespace radsim
