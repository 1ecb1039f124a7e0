#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gpca/oracle.hpp"
#include "test_support.hpp"

using Matrix = Eigen::MatrixXd;
using gpca::ObjectiveSpec;
using Vector = Eigen::VectorXd;
namespace oracle = gpca::oracle;

TEST(Jacobi, Diagonal) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 3.0;
  const auto e = oracle::jacobi_eigen(a);
  EXPECT_DOUBLE_EQ(e.values[0], 3.0);
  EXPECT_DOUBLE_EQ(e.values[1], 1.0);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
}

TEST(Jacobi, Identity) {
  const auto e = oracle::jacobi_eigen(Matrix::Identity(4, 4));
  EXPECT_LT((e.values - Vector::Ones(4)).norm(), 1e-15);
  EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(Jacobi, RandomReconstruction) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix g = gpca::testing::gaussian_matrix(5, 5, seed);
    const Matrix a = g + g.transpose();
    const auto e = oracle::jacobi_eigen(a);
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((back - a).norm(), 1e-12 * a.norm());
    for (Eigen::Index j = 0; j < 5; ++j) {
      EXPECT_LT((a * e.vectors.col(j) - e.values[j] * e.vectors.col(j)).norm(), 1e-10 * a.norm());
    }
    for (Eigen::Index j = 1; j < 5; ++j) EXPECT_GE(e.values[j - 1], e.values[j]);
  }
}

TEST(Jacobi, RejectsAsymmetric) {
  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(oracle::jacobi_eigen(a), gpca::DataError);
}

TEST(EigTop, Truncates) {
  const Matrix a = Vector::LinSpaced(5, 1.0, 5.0).asDiagonal();
  const auto e = oracle::eig_top(a, 2);
  EXPECT_EQ(e.values.size(), 2);
  EXPECT_EQ(e.vectors.cols(), 2);
  EXPECT_NEAR(e.values[0], 5.0, 1e-14);
  EXPECT_NEAR(e.values[1], 4.0, 1e-14);
}

TEST(SphereGrid, AxisData) {
  Matrix x(2, 2);
  x << 1, 0, -1, 0;
  const auto r = oracle::sphere_grid_argmax(x, ObjectiveSpec::lp(1.0), 1e-3);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_NEAR(std::abs(r.argmax[0]), 1.0, 1e-9);
}

TEST(SphereGrid, QuadraticMatchesEigen) {
  const Matrix x = gpca::testing::gaussian_matrix(20, 2, 4);
  const auto r = oracle::sphere_grid_argmax(x, ObjectiveSpec::lp(2.0), 1e-4);
  const auto e = oracle::eig_top(x.transpose() * x, 1);
  EXPECT_NEAR(r.value, e.values[0], 1e-5 * e.values[0]);
}

TEST(SphereGrid, ThreeDimensions) {
  Matrix x(1, 3);
  x << 0, 0, 2;
  const auto r = oracle::sphere_grid_argmax(x, ObjectiveSpec::lp(2.0), 1e-2);
  EXPECT_NEAR(r.value, 4.0, 1e-6);
}

TEST(SignEnumerate, Examples) {
  const auto r = oracle::sign_enumerate(Matrix::Ones(3, 3));
  EXPECT_NEAR(r.value, 3.0, 1e-15);
  Matrix k(2, 2);
  k << 1, -1, -1, 1;
  const auto s = oracle::sign_enumerate(k);
  EXPECT_NEAR(s.value, 2.0, 1e-15);
  EXPECT_EQ(s.argmax[0], -s.argmax[1]);
  EXPECT_THROW(oracle::sign_enumerate(Matrix::Identity(13, 13)), gpca::ConfigError);
}
