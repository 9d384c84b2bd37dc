#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include <Eigen/Dense>

#include "radsim/errors.hpp"

namespace radsim {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using VectorXd = Vector<double>;

// Uniformly sampled real waveform. Carriers, modulated, emitted and received
// signals are all values of this type.
template <typename Scalar>
struct BasicSignal {
  Scalar sample_rate{1};
  Vector<Scalar> samples;
  Scalar start_time{0};

  Eigen::Index size() const { return samples.size(); }
  bool empty() const { return samples.size() == 0; }
  Scalar duration() const { return static_cast<Scalar>(samples.size()) / sample_rate; }
  Scalar time_at(Eigen::Index k) const { return start_time + static_cast<Scalar>(k) / sample_rate; }
};

using SampledSignal = BasicSignal<double>;

template <typename Scalar>
BasicSignal<Scalar> make_signal(Scalar sample_rate, Vector<Scalar> samples, Scalar start_time = 0) {
  if (!(sample_rate > 0) || !std::isfinite(sample_rate)) {
    throw ParameterError("sample_rate must be positive and finite");
  }
  if (!samples.allFinite()) throw ParameterError("signal samples must be finite");
  return BasicSignal<Scalar>{sample_rate, std::move(samples), start_time};
}

template <typename Derived>
typename Derived::Scalar energy(const Eigen::MatrixBase<Derived>& x) {
  return x.squaredNorm();
}

// Mean of x^2; zero for an empty vector.
template <typename Derived>
typename Derived::Scalar mean_power(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() == 0) return Scalar(0);
  return x.squaredNorm() / static_cast<Scalar>(x.size());
}

template <typename Derived>
typename Derived::Scalar rms(const Eigen::MatrixBase<Derived>& x) {
  using std::sqrt;
  return sqrt(mean_power(x));
}

// Pearson correlation of two equal-length vectors. Returns NaN when either has
// zero variance; callers decide how to report that.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pearson(const Eigen::MatrixBase<DerivedA>& a,
                                  const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const auto da = (a.array() - a.mean()).matrix().eval();
  const auto db = (b.array() - b.mean()).matrix().eval();
  const Scalar denom = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (denom == Scalar(0)) return std::numeric_limits<Scalar>::quiet_NaN();
  const Scalar r = da.dot(db) / denom;
  return std::clamp(r, Scalar(-1), Scalar(1));
}

}  // namespace radsim
