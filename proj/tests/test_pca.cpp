#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gpca/oracle.hpp"
#include "gpca/pca.hpp"
#include "test_support.hpp"

namespace {

using gpca::Matrix;
using gpca::ObjectiveSpec;
using gpca::Vector;

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(Center, Examples) {
  const auto d = gpca::center(rows({{1, 2}, {3, 4}}));
  EXPECT_TRUE(d.samples.isApprox(rows({{-1, -1}, {1, 1}})));
  EXPECT_TRUE(d.mean.isApprox(vec({2, 3})));

  const Matrix centered = rows({{1, -2}, {-1, 2}});
  const auto again = gpca::center(centered);
  EXPECT_EQ(again.samples, centered);
  EXPECT_EQ(again.mean, Vector::Zero(2));

  const auto single = gpca::center(rows({{5}}));
  EXPECT_EQ(single.samples(0, 0), 0.0);
  EXPECT_EQ(single.mean[0], 5.0);
}

TEST(Center, ColumnMeansVanish) {
  Matrix x = gpca::testing::gaussian_matrix(37, 6, 4, 100.0);
  x.array() += 1e4;
  const auto d = gpca::center(x);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    EXPECT_LE(std::abs(d.samples.col(j).mean()), 1e-10 * x.col(j).cwiseAbs().maxCoeff());
  }
}

TEST(Center, RejectsBadInput) {
  Matrix x = rows({{1, 2}, {3, 4}});
  x(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(gpca::center(x), gpca::DataError);
  EXPECT_THROW(gpca::center(Matrix(0, 3)), gpca::DataError);
}

TEST(InitDirection, Examples) {
  EXPECT_TRUE(gpca::init_direction(Matrix(rows({{3, 4}, {1, 0}}))).isApprox(vec({0.6, 0.8})));
  EXPECT_EQ(gpca::init_direction(Matrix(rows({{1, 0}, {0, 1}}))), vec({1, 0}));
  EXPECT_EQ(gpca::init_direction(Matrix(rows({{0, 0}, {0, 2}}))), vec({0, 1}));
  EXPECT_THROW(gpca::init_direction(Matrix(Matrix::Zero(3, 2))), gpca::DegenerateError);
}

TEST(Ascend, SingleSampleFixedPoint) {
  const Matrix x = rows({{3, 4}});
  for (const auto& spec : {ObjectiveSpec::lp(2), ObjectiveSpec::lp(1), ObjectiveSpec::zeta1(),
                           ObjectiveSpec::gaussian_like(2)}) {
    const auto res = gpca::ascend(x, spec, vec({1, 0}));
    EXPECT_NEAR(res.w[0], 0.6, 1e-15);
    EXPECT_NEAR(res.w[1], 0.8, 1e-15);
    EXPECT_TRUE(res.diagnostics.converged);
  }
  // from the data direction itself the first step is already the fixed point
  const auto first = gpca::ascend(x, ObjectiveSpec::lp(1.5), vec({0.6, 0.8}));
  EXPECT_EQ(first.diagnostics.iterations, 1);
}

TEST(Ascend, CrossWithL2MatchesEigenvector) {
  const Matrix x = rows({{2, 0}, {-2, 0}, {0, 1}, {0, -1}});
  const auto oracle = gpca::oracle::eig_top(x.transpose() * x, 1);
  EXPECT_NEAR(oracle.values[0], 8.0, 1e-12);
  const Vector start = vec({0.6, 0.8});
  const auto res = gpca::ascend(x, ObjectiveSpec::lp(2), start);
  EXPECT_NEAR(std::abs(res.w.dot(oracle.vectors.col(0))), 1.0, 1e-12);
  EXPECT_NEAR(res.w[0], 1.0, 1e-9);
  EXPECT_NEAR(res.diagnostics.objective, 8.0, 1e-9);
}

TEST(Ascend, L1OnPlanarCloudReachesGridOptimum) {
  const Matrix x = gpca::center(gpca::testing::gaussian_matrix(20, 2, 77)).samples;
  const auto spec = ObjectiveSpec::lp(1);
  const auto grid = gpca::oracle::sphere_grid_argmax(x, spec, 1e-4);
  const auto res = gpca::ascend(x, spec, gpca::init_direction(x));
  EXPECT_GE(res.diagnostics.objective, grid.value - 1e-6);
  EXPECT_TRUE(res.diagnostics.converged);
}

TEST(Ascend, MonotoneTraceForConvexObjectives) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix x = gpca::center(gpca::testing::anisotropic_samples(30, 5, seed)).samples;
    for (const auto& spec : {ObjectiveSpec::lp(1), ObjectiveSpec::lp(1.5), ObjectiveSpec::lp(2),
                             ObjectiveSpec::zeta1(), ObjectiveSpec::zeta2()}) {
      const auto res = gpca::ascend(x, spec, gpca::init_direction(x));
      ASSERT_GE(res.diagnostics.trace.size(), 2u);
      for (std::size_t t = 1; t < res.diagnostics.trace.size(); ++t) {
        EXPECT_GE(res.diagnostics.trace[t], res.diagnostics.trace[t - 1] - 1e-10)
            << spec.to_string() << " seed " << seed;
      }
      EXPECT_TRUE(res.diagnostics.monotone);
    }
  }
}

TEST(Ascend, ReturnsFixedPoint) {
  const Matrix x = gpca::center(gpca::testing::anisotropic_samples(40, 4, 5)).samples;
  for (const auto& spec : {ObjectiveSpec::lp(1.5), ObjectiveSpec::lp(2), ObjectiveSpec::zeta2(),
                           ObjectiveSpec::lp(0.5)}) {
    const auto res = gpca::ascend(x, spec, gpca::init_direction(x));
    ASSERT_TRUE(res.diagnostics.converged) << spec.to_string();
    Vector proj = x * res.w;
    proj = proj.unaryExpr([&](double t) { return spec.fprime(t); });
    const Vector g = (x.transpose() * proj).normalized();
    EXPECT_LT((g - res.w).lpNorm<Eigen::Infinity>(), 1e-7) << spec.to_string();
  }
}

TEST(Ascend, ScaleInvariantForPowerObjectives) {
  const Matrix x = gpca::center(gpca::testing::anisotropic_samples(25, 3, 9)).samples;
  for (const auto& spec : {ObjectiveSpec::lp(1), ObjectiveSpec::lp(1.5), ObjectiveSpec::lp(2)}) {
    const auto a = gpca::ascend(x, spec, gpca::init_direction(x));
    const auto b = gpca::ascend(Matrix(7.5 * x), spec, gpca::init_direction(x));
    EXPECT_LT((a.w - b.w).lpNorm<Eigen::Infinity>(), 1e-7) << spec.to_string();
  }
}

TEST(Ascend, SignIsCanonical) {
  const Matrix x = rows({{-3, -1}, {3, 1}, {0.1, -0.2}});
  const auto res = gpca::ascend(x, ObjectiveSpec::lp(2), gpca::init_direction(x));
  EXPECT_GT(res.w[0], 0.0);
}

TEST(Ascend, NonConvergenceIsReportedNotThrown) {
  const Matrix x = gpca::center(gpca::testing::anisotropic_samples(30, 4, 3)).samples;
  gpca::AscentSettings s;
  s.max_iter = 1;
  s.tol = 1e-300;
  const auto res = gpca::ascend(x, ObjectiveSpec::lp(2), gpca::init_direction(x), s);
  EXPECT_FALSE(res.diagnostics.converged);
  EXPECT_EQ(res.diagnostics.iterations, 1);
}

TEST(Ascend, DegenerateGradientThrows) {
  const Matrix x = rows({{1, 0}, {-1, 0}});
  EXPECT_THROW(gpca::ascend(x, ObjectiveSpec::lp(2), vec({0, 1})), gpca::DegenerateError);
  EXPECT_THROW(gpca::ascend(x, ObjectiveSpec::lp(2), vec({3, 1})), gpca::ConfigError);
  EXPECT_THROW(gpca::ascend(x, ObjectiveSpec::lp(2), vec({1, 0, 0})), gpca::DimensionError);
}

TEST(Fit, FullBasisIsOrthonormal) {
  const auto data = gpca::center(gpca::testing::gaussian_matrix(40, 6, 12));
  const auto basis = gpca::fit(data, ObjectiveSpec::lp(2), 6);
  ASSERT_EQ(basis.size(), 6);
  EXPECT_LT((basis.vectors * basis.vectors.transpose() - Matrix::Identity(6, 6)).norm(), 1e-8);
  for (Eigen::Index j = 0; j < 6; ++j) EXPECT_NEAR(basis.vector(j).norm(), 1.0, 1e-12);
  for (const auto& spec : {ObjectiveSpec::lp(1), ObjectiveSpec::crossover(1), ObjectiveSpec::zeta1()}) {
    const auto b = gpca::fit(data, spec, 6);
    const Matrix gram = b.vectors.transpose() * b.vectors;
    for (Eigen::Index i = 0; i < 6; ++i)
      for (Eigen::Index j = 0; j < 6; ++j)
        EXPECT_NEAR(gram(i, j), i == j ? 1.0 : 0.0, i == j ? 1e-12 : 1e-8) << spec.to_string();
  }
}

TEST(Fit, L2MatchesTopCovarianceEigenvectors) {
  const Matrix raw = gpca::testing::anisotropic_samples(50, 5, 21);
  const auto data = gpca::center(raw);
  const auto basis = gpca::fit(data, ObjectiveSpec::lp(2), 2);
  const auto eig = gpca::oracle::eig_top(gpca::testing::centered_scatter(raw), 2);
  for (Eigen::Index j = 0; j < 2; ++j) {
    EXPECT_GT(std::abs(basis.vector(j).dot(eig.vectors.col(j))), 1 - 1e-6);
  }
}

TEST(Fit, SingleComponentEqualsAscend) {
  const auto data = gpca::center(gpca::testing::anisotropic_samples(30, 4, 8));
  for (const auto& spec : {ObjectiveSpec::lp(1), ObjectiveSpec::zeta2()}) {
    const auto basis = gpca::fit(data, spec, 1);
    const auto direct = gpca::ascend(data, spec, gpca::init_direction(data));
    EXPECT_LT((basis.vector(0) - direct.w).norm(), 1e-14);
  }
}

TEST(Fit, RankDeficiencyNamesCount) {
  // three samples in R^4 span at most two centered directions
  const auto data = gpca::center(gpca::testing::gaussian_matrix(3, 4, 2));
  try {
    gpca::fit(data, ObjectiveSpec::lp(2), 3);
    FAIL() << "expected RankDeficiencyError";
  } catch (const gpca::RankDeficiencyError& e) {
    EXPECT_EQ(e.obtained(), 2u);
  }
  EXPECT_THROW(gpca::fit(data, ObjectiveSpec::lp(2), 0), gpca::ConfigError);
  EXPECT_THROW(gpca::fit(data, ObjectiveSpec::lp(2), 5), gpca::ConfigError);
}

TEST(Project, Examples) {
  gpca::PrincipalBasis e1;
  e1.vectors = Matrix(rows({{1}, {0}}));
  EXPECT_EQ(gpca::project(e1, vec({3, 4})), vec({3}));
  EXPECT_EQ(gpca::project(e1, vec({0, 7})), vec({0}));
  gpca::PrincipalBasis diag;
  diag.vectors = Matrix(rows({{0.6}, {0.8}}));
  EXPECT_NEAR(gpca::project(diag, vec({0.6, 0.8}))[0], 1.0, 1e-15);
  EXPECT_THROW(gpca::project(e1, vec({1, 2, 3})), gpca::DimensionError);
}

TEST(Reconstruct, Examples) {
  gpca::PrincipalBasis e1;
  e1.vectors = Matrix(rows({{1}, {0}}));
  EXPECT_EQ(gpca::reconstruct(e1, vec({3, 4})), vec({3, 0}));
  EXPECT_DOUBLE_EQ(gpca::reconstruction_error(e1, vec({3, 4})), 16.0);

  const auto empty = gpca::PrincipalBasis::empty(2);
  EXPECT_EQ(gpca::reconstruct(empty, vec({3, 4})), vec({0, 0}));
  EXPECT_DOUBLE_EQ(gpca::reconstruction_error(empty, vec({3, 4})), 25.0);

  const auto data = gpca::center(gpca::testing::gaussian_matrix(20, 3, 31));
  const auto full = gpca::fit(data, ObjectiveSpec::lp(1.5), 3);
  const Vector x = vec({0.3, -2, 5});
  EXPECT_LT((gpca::reconstruct(full, x) - x).norm(), 1e-10);
  EXPECT_LT(gpca::reconstruction_error(full, x), 1e-18);
  EXPECT_THROW(gpca::reconstruction_error(e1, vec({1})), gpca::DimensionError);
}
