#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "scsg/core.hpp"
#include "scsg/objectives.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace scsg;

namespace {

std::shared_ptr<FiniteSumProblem> ls_problem(const Eigen::MatrixXd& a, const Vector& b,
                                             double l2 = 0.0, Regularizer psi = {}) {
  return std::make_shared<FiniteSumProblem>(std::make_shared<LeastSquares>(a, b), l2, psi);
}

Vector vec(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  std::copy(v.begin(), v.end(), x.begin());
  return x;
}

}  // namespace

TEST(ComponentGradient, LeastSquaresDirectFormula) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 0;
  auto p = ls_problem(a, vec({0.0}));
  IfoCounter c;
  const Vector g = component_gradient(*p, 0, vec({2.0, 0.0}), c);
  EXPECT_EQ(g, vec({2.0, 0.0}));
  EXPECT_EQ(c.units(), 1u);
}

TEST(ComponentGradient, ZeroAtComponentMinimizer) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 2, -1;
  auto p = ls_problem(a, vec({1.0, 1.0}));
  IfoCounter c;
  // x = (1, 0) solves row 0; x = (0.5, 0) solves row 1.
  EXPECT_EQ(component_gradient(*p, 0, vec({1.0, 0.0}), c), Vector::Zero(2));
  EXPECT_EQ(component_gradient(*p, 1, vec({0.5, 0.0}), c), Vector::Zero(2));
}

TEST(ComponentGradient, LogisticMatchesFiniteDifferences) {
  fixture::Gen g(11);
  auto model = fixture::logistic(g, 6, 2, 3);
  FiniteSumProblem p(model);
  IfoCounter c;
  for (int t = 0; t < 10; ++t) {
    const Vector x = g.vector(static_cast<Eigen::Index>(p.dim()));
    const Index i = static_cast<Index>(t % 6);
    const Vector fd = oracle::fd_gradient([&](const Vector& y) { return p.component_value(i, y); }, x);
    EXPECT_LT(oracle::relative_error(component_gradient(p, i, x, c), fd), 1e-6);
  }
}

TEST(ComponentGradient, RangeAndDimensionErrors) {
  auto p = ls_problem(Eigen::MatrixXd::Identity(3, 2), Vector::Zero(3));
  IfoCounter c;
  EXPECT_THROW(component_gradient(*p, 3, Vector::Zero(2), c), std::out_of_range);
  EXPECT_THROW(component_gradient(*p, 0, Vector::Zero(3), c), std::invalid_argument);
  EXPECT_EQ(c.units(), 0u);
}

TEST(BatchGradient, FullSetIsMeanOfComponents) {
  fixture::Gen g(3);
  auto p = ls_problem(g.matrix(7, 3), g.vector(7));
  const Vector x = g.vector(3);
  IfoCounter c;
  std::vector<Index> all(7);
  std::iota(all.begin(), all.end(), Index{0});
  Vector mean = Vector::Zero(3);
  for (Index i = 0; i < 7; ++i) mean += component_gradient(*p, i, x, c) / 7.0;
  EXPECT_LT((batch_gradient(*p, all, x, c) - mean).norm(), 1e-14);
  EXPECT_LT((full_gradient(*p, x, c) - mean).norm(), 1e-14);
}

TEST(BatchGradient, SingletonEqualsComponent) {
  fixture::Gen g(4);
  auto p = ls_problem(g.matrix(5, 3), g.vector(5));
  const Vector x = g.vector(3);
  IfoCounter c;
  const std::vector<Index> one{2};
  EXPECT_EQ(batch_gradient(*p, one, x, c), component_gradient(*p, 2, x, c));
}

TEST(BatchGradient, SubsetAverageOverAllPairsIsFullGradient) {
  fixture::Gen g(5);
  auto p = ls_problem(g.matrix(4, 3), g.vector(4));
  const Vector x = g.vector(3);
  IfoCounter c;
  const auto subsets = oracle::all_subsets(4, 2);
  ASSERT_EQ(subsets.size(), 6u);
  Vector avg = Vector::Zero(3);
  for (const auto& s : subsets) avg += batch_gradient(*p, s, x, c) / 6.0;
  EXPECT_LT((avg - full_gradient(*p, x, c)).norm(), 1e-14);
}

TEST(BatchGradient, RejectsEmptyDuplicateAndOutOfRange) {
  auto p = ls_problem(Eigen::MatrixXd::Identity(3, 3), Vector::Zero(3));
  IfoCounter c;
  const Vector x = Vector::Zero(3);
  EXPECT_THROW(batch_gradient(*p, std::vector<Index>{}, x, c), std::invalid_argument);
  EXPECT_THROW(batch_gradient(*p, std::vector<Index>{1, 1}, x, c), std::invalid_argument);
  EXPECT_THROW(batch_gradient(*p, std::vector<Index>{0, 3}, x, c), std::out_of_range);
  EXPECT_EQ(c.units(), 0u);
}

TEST(FullObjective, LogisticAtZeroIsLogK) {
  fixture::Gen g(6);
  for (int k : {2, 3, 5}) {
    FiniteSumProblem p(fixture::logistic(g, 9, 4, k));
    IfoCounter c;
    EXPECT_NEAR(full_objective(p, Vector::Zero(static_cast<Eigen::Index>(p.dim())), c),
                std::log(static_cast<double>(k)), 1e-15);
    EXPECT_EQ(c.units(), 9u);
  }
}

TEST(FullObjective, ScaledL2AddsNothingAtZero) {
  fixture::Gen g(7);
  auto model = fixture::logistic(g, 10, 3, 3);
  FiniteSumProblem smooth(model, 0.1);
  FiniteSumProblem composite(model, 0.0, Regularizer::l2_scaled(0.1));
  IfoCounter c;
  const Vector z = Vector::Zero(static_cast<Eigen::Index>(smooth.dim()));
  const double plain = full_objective(FiniteSumProblem(model), z, c);
  EXPECT_DOUBLE_EQ(plain, std::log(3.0));
  EXPECT_EQ(full_objective(smooth, z, c), plain);
  EXPECT_EQ(full_objective(composite, z, c), plain);
}

TEST(FullObjective, LeastSquaresHandSum) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 2, 0, 1, -1, 1;
  auto p = ls_problem(a, vec({1.0, 0.0, 2.0}), 0.0, Regularizer::l1(0.5));
  // residuals at x = (1, 1): 2, 1, -2 -> (4 + 1 + 4) / 2 / 3 = 1.5; psi = 0.5 * 2 = 1.
  IfoCounter c;
  EXPECT_DOUBLE_EQ(full_objective(*p, vec({1.0, 1.0}), c), 2.5);
}

TEST(EffectivePasses, Examples) {
  EXPECT_EQ(effective_passes(0, 10), 0.0);
  EXPECT_EQ(effective_passes(10, 10), 1.0);
  EXPECT_EQ(effective_passes(15, 10), 1.5);
  IfoCounter c;
  c.charge(30);
  EXPECT_EQ(effective_passes(c, 20), 1.5);
}

TEST(CostAdditivity, CounterEqualsSumOfRequestedSizes) {
  fixture::Gen g(8);
  auto p = ls_problem(g.matrix(12, 4), g.vector(12));
  for (int trial = 0; trial < 50; ++trial) {
    IfoCounter c;
    std::uint64_t expected = 0;
    const Vector x = g.vector(4);
    for (int call = 0; call < 20; ++call) {
      switch (g.integer(0, 3)) {
        case 0:
          component_gradient(*p, static_cast<Index>(g.integer(0, 11)), x, c);
          expected += 1;
          break;
        case 1: {
          const auto size = static_cast<std::size_t>(g.integer(1, 12));
          std::vector<Index> idx(12);
          std::iota(idx.begin(), idx.end(), Index{0});
          std::shuffle(idx.begin(), idx.end(), g.engine());
          idx.resize(size);
          batch_gradient(*p, idx, x, c);
          expected += size;
          break;
        }
        case 2:
          full_gradient(*p, x, c);
          expected += 12;
          break;
        default:
          full_objective(*p, x, c);
          expected += 12;
      }
    }
    EXPECT_EQ(c.units(), expected);
  }
}

TEST(FiniteSumProblem, ConstructionChecks) {
  EXPECT_THROW(FiniteSumProblem(nullptr), std::invalid_argument);
  auto m = std::make_shared<LeastSquares>(Eigen::MatrixXd::Identity(2, 2), Vector::Zero(2));
  EXPECT_THROW(FiniteSumProblem(m, -1.0), std::invalid_argument);
  EXPECT_THROW(Regularizer::l1(-1.0), std::invalid_argument);
}

TEST(RunTrace, UnitsMustStrictlyIncrease) {
  RunTrace t;
  t.n = 4;
  t.record(0, 1.0);
  t.record(4, 0.5);
  EXPECT_THROW(t.record(4, 0.4), std::logic_error);
  EXPECT_EQ(t.passes(1), 1.0);
}
