#pragma once

// Reproducible random streams.
//
// Every random quantity in radsim is derived from std::mt19937_64, whose output
// sequence is fixed by the C++ standard. The standard library distributions are
// not portable across implementations, so the mappings below (53-bit uniform,
// Box-Muller Gaussian, rejection-sampled index) are written out explicitly.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace radsim {

using Rng = std::mt19937_64;

// Uniform in [0, 1) with 53 bits of resolution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n). Rejects the top partial bucket so the result is unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % n;
}

// One fair bit, taken from the most significant bit of the next output.
inline std::uint8_t random_bit(Rng& rng) { return static_cast<std::uint8_t>(rng() >> 63); }

// Fills `out` with i.i.d. standard normal values (basic Box-Muller, pairs in order).
template <typename Derived>
void fill_standard_normal(Rng& rng, Derived&& out) {
  const auto n = out.size();
  for (decltype(out.size()) k = 0; k < n; k += 2) {
    const double u1 = 1.0 - uniform01(rng);  // (0, 1]
    const double u2 = uniform01(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[k] = radius * std::cos(angle);
    if (k + 1 < n) out[k + 1] = radius * std::sin(angle);
  }
}

}  // namespace radsim
