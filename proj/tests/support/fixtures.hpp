#ifndef SCSG_TESTS_FIXTURES_HPP
#define SCSG_TESTS_FIXTURES_HPP

// Hand-rolled generators for random problems and points.

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "scsg/core.hpp"
#include "scsg/objectives.hpp"
#include "support/oracles.hpp"

namespace fixture {

using scsg::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  Vector vector(Eigen::Index d, double scale = 1.0) {
    Vector v(d);
    for (auto& x : v) x = scale * normal();
    return v;
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * normal();
    return m;
  }

  /// Dense rows with roughly a `density` fraction of nonzeros (at least one per row).
  scsg::SparseRows sparse(Eigen::Index rows, Eigen::Index cols, double density,
                          double scale = 1.0) {
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto forced = static_cast<Eigen::Index>(integer(0, static_cast<int>(cols) - 1));
      for (Eigen::Index j = 0; j < cols; ++j)
        if (j == forced || uniform(0.0, 1.0) < density)
          t.emplace_back(static_cast<int>(i), static_cast<int>(j), scale * normal());
    }
    scsg::SparseRows m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
  }

  std::vector<int> labels(std::size_t n, int classes) {
    std::vector<int> y(n);
    for (auto& v : y) v = integer(1, classes);
    return y;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline std::shared_ptr<scsg::MulticlassLogistic> logistic(Gen& g, std::size_t n, int p, int k,
                                                          double density = 1.0) {
  return std::make_shared<scsg::MulticlassLogistic>(g.sparse(static_cast<Eigen::Index>(n), p,
                                                             density),
                                                    g.labels(n, k), k);
}

struct Quadratic {
  Eigen::MatrixXd a;
  Vector b;
  std::shared_ptr<scsg::FiniteSumProblem> problem;
  Vector x_star;
  double f_star = 0.0;
};

/// Least squares whose Hessian A^T A / n has eigenvalues `spectrum` exactly:
/// A = sqrt(n) Q diag(sqrt(spectrum)) V^T with Q, V random orthonormal.
inline Quadratic spectral_quadratic(Gen& g, std::size_t n, const std::vector<double>& spectrum,
                                    double noise) {
  const auto d = static_cast<Eigen::Index>(spectrum.size());
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g.matrix(nn, d));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(nn, d);
  Eigen::HouseholderQR<Eigen::MatrixXd> qv(g.matrix(d, d));
  const Eigen::MatrixXd v = qv.householderQ() * Eigen::MatrixXd::Identity(d, d);
  Vector s(d);
  for (Eigen::Index j = 0; j < d; ++j) s[j] = std::sqrt(spectrum[static_cast<std::size_t>(j)]);
  Quadratic out;
  out.a = std::sqrt(static_cast<double>(n)) * q * s.asDiagonal() * v.transpose();
  const Vector x_true = g.vector(d);
  out.b = out.a * x_true + g.vector(nn, noise);
  out.problem = std::make_shared<scsg::FiniteSumProblem>(
      std::make_shared<scsg::LeastSquares>(out.a, out.b));
  out.x_star = oracle::least_squares_optimum(out.a, out.b);
  out.f_star = oracle::least_squares_value(out.a, out.b, out.x_star);
  return out;
}

inline std::vector<double> log_spaced(double hi, double lo, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    v[static_cast<std::size_t>(j)] =
        hi * std::pow(lo / hi, static_cast<double>(j) / static_cast<double>(count - 1));
  return v;
}

}  // namespace fixture

#endif  // SCSG_TESTS_FIXTURES_HPP
