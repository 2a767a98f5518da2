#include <gtest/gtest.h>

#include <cmath>

#include "scsg/geometry.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace scsg;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), x.begin());
  return x;
}

// B_w for w = ||x||^4 / 4, coded from scratch.
double bregman_q4(const Vector& x, const Vector& y) {
  const double nx2 = x.dot(x), ny2 = y.dot(y);
  return nx2 * nx2 / 4.0 - ny2 * ny2 / 4.0 - ny2 * y.dot(x - y);
}

}  // namespace

TEST(Bregman, EuclideanExamples) {
  const auto e = DistanceGenerator::euclidean();
  const Vector x = vec({0.3, -1.2});
  EXPECT_EQ(bregman(e, x, x), 0.0);
  EXPECT_EQ(bregman(e, vec({1.0, 0.0}), vec({0.0, 0.0})), 0.5);
}

TEST(Bregman, QuarticMatchesIndependentFormula) {
  fixture::Gen g(1);
  const auto w = DistanceGenerator::q_norm(4.0);
  for (int t = 0; t < 200; ++t) {
    const Vector x = g.vector(5), y = g.vector(5);
    EXPECT_NEAR(bregman(w, x, y), bregman_q4(x, y), 1e-12 * (1.0 + std::abs(bregman_q4(x, y))));
  }
}

TEST(Bregman, Nonnegative) {
  fixture::Gen g(2);
  for (const auto& w : {DistanceGenerator::euclidean(), DistanceGenerator::q_norm(1.5),
                        DistanceGenerator::q_norm(3.0), DistanceGenerator::q_norm(4.0)})
    for (int t = 0; t < 500; ++t) {
      const Vector x = g.vector(4, g.uniform(0.01, 10.0));
      const Vector y = g.vector(4, g.uniform(0.01, 10.0));
      EXPECT_GE(bregman(w, x, y), -1e-12);
    }
}

TEST(Bregman, DimensionMismatch) {
  EXPECT_THROW(bregman(DistanceGenerator::euclidean(), Vector::Zero(2), Vector::Zero(3)),
               std::invalid_argument);
  EXPECT_THROW(DistanceGenerator::q_norm(1.0), std::invalid_argument);
}

TEST(MirrorStep, EuclideanWithoutRegularizerIsPlainGradientStep) {
  fixture::Gen g(3);
  for (int t = 0; t < 100; ++t) {
    const Vector x = g.vector(7), nu = g.vector(7);
    const double eta = g.uniform(1e-4, 2.0);
    const Vector y = mirror_prox_step({eta, Regularizer::none(), {}}, x, nu);
    EXPECT_EQ(y, Vector(x - eta * nu));
  }
}

TEST(MirrorStep, EuclideanL1IsSoftThreshold) {
  fixture::Gen g(4);
  const Vector x = g.vector(8), nu = g.vector(8);
  const Regularizer psi = Regularizer::l1(0.7);
  const Vector y = mirror_prox_step({0.5, psi, {}}, x, nu);
  EXPECT_EQ(y, prox(psi, x - 0.5 * nu, 0.5));
  const Vector z = x - 0.5 * nu;
  for (Eigen::Index j = 0; j < 8; ++j)
    EXPECT_DOUBLE_EQ(y[j], std::copysign(std::max(0.0, std::abs(z[j]) - 0.35), z[j]));
}

TEST(MirrorStep, FirstOrderResidualAllSupportedConfigurations) {
  fixture::Gen g(5);
  std::vector<MirrorStepSpec> specs;
  for (double eta : {0.01, 0.3, 2.0}) {
    for (double w : {0.0, 0.1, 1.5}) {
      specs.push_back({eta, Regularizer::l2_scaled(w), DistanceGenerator::euclidean()});
      specs.push_back({eta, Regularizer::l1(w), DistanceGenerator::euclidean()});
      for (double q : {1.3, 1.5, 2.0, 3.0, 4.0, 6.0})
        specs.push_back({eta, Regularizer::l2_scaled(w), DistanceGenerator::q_norm(q)});
    }
    specs.push_back({eta, Regularizer::none(), DistanceGenerator::euclidean()});
    for (double q : {1.3, 1.5, 2.0, 3.0, 4.0, 6.0})
      specs.push_back({eta, Regularizer::none(), DistanceGenerator::q_norm(q)});
  }
  double worst = 0.0;
  for (const auto& spec : specs)
    for (int t = 0; t < 30; ++t) {
      const Vector x = g.vector(5, g.uniform(0.1, 3.0));
      const Vector nu = g.vector(5, g.uniform(0.1, 3.0));
      const Vector y = mirror_prox_step(spec, x, nu);
      ASSERT_TRUE(y.allFinite());
      worst = std::max(worst, oracle::first_order_residual(spec, x, nu, y));
    }
  EXPECT_LE(worst, 1e-8);
}

TEST(MirrorStep, QuadraticGeneratorMatchesEuclidean) {
  fixture::Gen g(6);
  for (int t = 0; t < 50; ++t) {
    const Vector x = g.vector(4), nu = g.vector(4);
    for (const Regularizer& psi : {Regularizer::none(), Regularizer::l2_scaled(0.4)}) {
      const Vector a = mirror_prox_step({0.3, psi, DistanceGenerator::euclidean()}, x, nu);
      const Vector b = mirror_prox_step({0.3, psi, DistanceGenerator::q_norm(2.0)}, x, nu);
      EXPECT_LT((a - b).norm(), 1e-13);
    }
  }
}

TEST(MirrorStep, OriginAndUnsupportedConfigurations) {
  const auto w = DistanceGenerator::q_norm(3.0);
  // theta = grad w(x) - eta nu = 0 sends the step to the origin.
  const Vector x = vec({1.0, 0.0});
  const Vector nu = w.gradient(x) / 0.5;
  EXPECT_EQ(mirror_prox_step({0.5, Regularizer::none(), w}, x, nu), Vector::Zero(2));
  EXPECT_THROW(mirror_prox_step({0.5, Regularizer::l1(0.1), w}, x, nu), UnsupportedConfiguration);
  EXPECT_THROW(mirror_prox_step({0.0, Regularizer::none(), {}}, x, nu), std::invalid_argument);
  EXPECT_THROW(mirror_prox_step({0.5, Regularizer::none(), {}}, x, Vector::Zero(3)),
               std::invalid_argument);
}

TEST(Norms, LpAndDualExponents) {
  const Vector x = vec({3.0, -4.0});
  EXPECT_EQ(lp_norm(x, 1.0), 7.0);
  EXPECT_EQ(lp_norm(x, 2.0), 5.0);
  EXPECT_EQ(lp_norm(x, std::numeric_limits<double>::infinity()), 4.0);
  EXPECT_NEAR(lp_norm(x, 3.0), std::cbrt(91.0), 1e-14);
  EXPECT_EQ(dual_exponent(2.0), 2.0);
  EXPECT_EQ(dual_exponent(1.0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(dual_exponent(std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_DOUBLE_EQ(dual_exponent(3.0), 1.5);
}

TEST(Conjugate, ClosedFormMatchesSearch) {
  fixture::Gen g(7);
  const double inf = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 100;
  for (Eigen::Index d : {1, 2, 3, 4})
    for (double q : {1.5, 2.0, 3.0})
      for (double r : {1.0, 1.5, 2.0, 4.0, inf}) {
        const Vector z = g.vector(d);
        const double closed = gq_conjugate(z, q, r);
        const double search = oracle::conjugate_by_search(z, q, r, seed++);
        EXPECT_NEAR(search, closed, 0.01 * closed) << "d=" << d << " q=" << q << " r=" << r;
      }
}
