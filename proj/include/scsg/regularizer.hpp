#ifndef SCSG_REGULARIZER_HPP
#define SCSG_REGULARIZER_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace scsg {

using Vector = Eigen::VectorXd;

/// Composite term psi(x) of F(x) = f(x) + psi(x).
///
/// `l2_scaled` is weight * ||x||^2 (a (1/n)||x||^2 penalty uses
/// weight = 1/n); `l1` is weight * ||x||_1.
struct Regularizer {
  enum class Kind { none, l2_scaled, l1 };

  Kind kind = Kind::none;
  double weight = 0.0;

  static Regularizer none() { return {}; }
  static Regularizer l2_scaled(double w) { return checked(Kind::l2_scaled, w); }
  static Regularizer l1(double w) { return checked(Kind::l1, w); }

  bool is_none() const { return kind == Kind::none || weight == 0.0; }

  double value(const Vector& x) const {
    switch (kind) {
      case Kind::none: return 0.0;
      case Kind::l2_scaled: return weight * x.squaredNorm();
      case Kind::l1: return weight * x.lpNorm<1>();
    }
    return 0.0;
  }

 private:
  static Regularizer checked(Kind k, double w) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("regularizer weight must be finite and >= 0");
    return {k, w};
  }
};

inline std::string_view to_string(Regularizer::Kind k) {
  switch (k) {
    case Regularizer::Kind::none: return "none";
    case Regularizer::Kind::l2_scaled: return "l2_scaled";
    case Regularizer::Kind::l1: return "l1";
  }
  return "none";
}

inline Regularizer::Kind parse_regularizer_kind(std::string_view s) {
  if (s == "none") return Regularizer::Kind::none;
  if (s == "l2_scaled" || s == "l2") return Regularizer::Kind::l2_scaled;
  if (s == "l1") return Regularizer::Kind::l1;
  throw std::invalid_argument("unknown regularizer kind: " + std::string(s));
}

/// argmin_y { psi(y) + ||y - z||^2 / (2 step) }.
inline Vector prox(const Regularizer& psi, const Vector& z, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("prox step must be > 0");
  switch (psi.kind) {
    case Regularizer::Kind::none:
      return z;
    case Regularizer::Kind::l2_scaled:
      return z / (1.0 + 2.0 * step * psi.weight);
    case Regularizer::Kind::l1: {
      const double t = step * psi.weight;
      return z.unaryExpr([t](double v) {
        if (v > t) return v - t;
        if (v < -t) return v + t;
        return 0.0;
      });
    }
  }
  return z;
}

}  // namespace scsg

#endif  // SCSG_REGULARIZER_HPP
