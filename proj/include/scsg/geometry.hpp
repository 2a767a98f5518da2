#ifndef SCSG_GEOMETRY_HPP
#define SCSG_GEOMETRY_HPP

// Distance-generating functions and the mirror-proximal step
//
//   y = argmin_y <nu, y> + psi(y) + B_w(y, x) / eta.
//
// The domain is all of R^d.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "scsg/regularizer.hpp"

namespace scsg {

class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// w(x) = ||x||_2^2 / 2 (euclidean) or ||x||_2^q / q (q_norm).
struct DistanceGenerator {
  enum class Kind { euclidean, q_norm };

  Kind kind = Kind::euclidean;
  double q = 2.0;

  static DistanceGenerator euclidean() { return {}; }
  static DistanceGenerator q_norm(double q) {
    if (!(q > 1.0) || !std::isfinite(q))
      throw std::invalid_argument("q_norm generator needs finite q > 1");
    return {Kind::q_norm, q};
  }

  double exponent() const { return kind == Kind::euclidean ? 2.0 : q; }

  double value(const Vector& x) const {
    if (kind == Kind::euclidean) return 0.5 * x.squaredNorm();
    return std::pow(x.norm(), q) / q;
  }

  /// grad w(x) = ||x||^{q-2} x, taken as 0 at the origin.
  Vector gradient(const Vector& x) const {
    if (kind == Kind::euclidean) return x;
    const double r = x.norm();
    if (r == 0.0) return Vector::Zero(x.size());
    return std::pow(r, q - 2.0) * x;
  }
};

/// B_w(x, y) = w(x) - w(y) - <grad w(y), x - y>.
inline double bregman(const DistanceGenerator& g, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("bregman: dimension mismatch");
  if (g.kind == DistanceGenerator::Kind::euclidean) return 0.5 * (x - y).squaredNorm();
  return g.value(x) - g.value(y) - g.gradient(y).dot(x - y);
}

struct MirrorStepSpec {
  double eta = 1.0;
  Regularizer regularizer{};
  DistanceGenerator generator{};
};

namespace detail {

/// Root of r^{q-1} + c r = t on r >= 0 (t > 0, c >= 0): safeguarded Newton
/// inside a shrinking bisection bracket, at most 200 iterations.
inline double solve_radial(double q, double c, double t) {
  double lo = 0.0;
  double hi = std::pow(t, 1.0 / (q - 1.0));
  if (c > 0.0) hi = std::min(hi, t / c);
  auto h = [&](double r) { return std::pow(r, q - 1.0) + c * r - t; };
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double hr = h(r);
    if (hr == 0.0) return r;
    if (hr < 0.0) lo = r; else hi = r;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double dh = (q - 1.0) * std::pow(r, q - 2.0) + c;
    double next = r - hr / dh;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    r = next;
  }
  return r;
}

}  // namespace detail

/// One mirror-proximal step from x along nu.
///
/// Euclidean generators reduce to prox(psi, x - eta * nu, eta). For q_norm
/// generators with psi in {none, l2_scaled} the minimizer is parallel to
/// theta = grad w(x) - eta * nu, and its norm r solves
/// r^{q-1} + 2 eta lambda r = ||theta||.
inline Vector mirror_prox_step(const MirrorStepSpec& spec, const Vector& x,
                               const Vector& nu) {
  if (!(spec.eta > 0.0)) throw std::invalid_argument("mirror_prox_step: eta must be > 0");
  if (x.size() != nu.size())
    throw std::invalid_argument("mirror_prox_step: dimension mismatch");

  if (spec.generator.kind == DistanceGenerator::Kind::euclidean) {
    Vector z = x - spec.eta * nu;
    if (spec.regularizer.kind == Regularizer::Kind::none) return z;
    return prox(spec.regularizer, z, spec.eta);
  }

  double c = 0.0;
  switch (spec.regularizer.kind) {
    case Regularizer::Kind::none: break;
    case Regularizer::Kind::l2_scaled: c = 2.0 * spec.eta * spec.regularizer.weight; break;
    case Regularizer::Kind::l1:
      throw UnsupportedConfiguration("mirror_prox_step: q_norm generator with l1 "
                                     "regularizer is not supported");
  }
  const Vector theta = spec.generator.gradient(x) - spec.eta * nu;
  const double t = theta.norm();
  if (t == 0.0) return Vector::Zero(x.size());
  const double r = detail::solve_radial(spec.generator.q, c, t);
  return (r / t) * theta;
}

/// ||x||_r for r in [1, inf].
inline double lp_norm(const Vector& x, double r) {
  if (std::isinf(r)) return x.cwiseAbs().maxCoeff();
  if (!(r >= 1.0)) throw std::invalid_argument("lp_norm: need r >= 1");
  if (r == 1.0) return x.cwiseAbs().sum();
  if (r == 2.0) return x.norm();
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), r);
  return std::pow(s, 1.0 / r);
}

/// Conjugate exponent r' = r / (r - 1), with 1 <-> inf.
inline double dual_exponent(double r) {
  if (r == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(r)) return 1.0;
  return r / (r - 1.0);
}

/// G_q(x) = ||x||_r^q / q.
inline double gq_value(const Vector& x, double q, double r) {
  return std::pow(lp_norm(x, r), q) / q;
}

/// G_q^*(z) = ||z||_{r'}^p / p with p = q / (q - 1).
inline double gq_conjugate(const Vector& z, double q, double r) {
  const double p = q / (q - 1.0);
  return std::pow(lp_norm(z, dual_exponent(r)), p) / p;
}

}  // namespace scsg

#endif  // SCSG_GEOMETRY_HPP
