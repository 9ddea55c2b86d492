#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rpqp/errors.hpp"
#include "rpqp/projection.hpp"
#include "rpqp/random.hpp"

namespace rpqp {
namespace {

std::vector<Vector> random_vectors(std::uint64_t seed, Index n, int count) {
  Rng rng(seed);
  std::vector<Vector> xs;
  for (int k = 0; k < count; ++k) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.normal();
    xs.push_back(x);
  }
  return xs;
}

TEST(Rng, Deterministic) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
  }
  Rng a2(42);
  EXPECT_NE(a2.next_u64(), c.next_u64());
}

TEST(Rng, UniformRangeAndMoments) {
  Rng rng(7);
  double sum = 0, sq = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / N, 0.5, 5e-3);
  EXPECT_NEAR(sq / N - (sum / N) * (sum / N), 1.0 / 12.0, 2e-3);
}

TEST(Rng, NormalMoments) {
  Rng rng(9);
  double sum = 0, sq = 0, quart = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
    quart += z * z * z * z;
  }
  EXPECT_NEAR(sum / N, 0.0, 1e-2);
  EXPECT_NEAR(sq / N, 1.0, 1e-2);
  EXPECT_NEAR(quart / N, 3.0, 6e-2);
}

TEST(Rng, HashSeparatesStreams) {
  EXPECT_EQ(hash64({1, 2}), hash64({1, 2}));
  EXPECT_NE(hash64({1, 2}), hash64({2, 1}));
  EXPECT_NE(hash64({1, 2}), hash64({1, 3}));
}

TEST(Projection, ShapeAndDeterminism) {
  const ProjectionMatrix P = sample_projection(30, 7, 5);
  EXPECT_EQ(P.reduced_dim(), 7);
  EXPECT_EQ(P.original_dim(), 30);
  EXPECT_EQ(P.seed(), 5u);
  EXPECT_EQ(P.matrix(), sample_projection(30, 7, 5).matrix());
  EXPECT_NE(P.matrix(), sample_projection(30, 7, 6).matrix());
}

TEST(Projection, RowMajorStream) {
  // Entry (i, j) is the (i n + j)-th normal draw scaled by 1/sqrt(d).
  const Index n = 6, d = 3;
  const ProjectionMatrix P = sample_projection(n, d, 11);
  Rng rng(11);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < n; ++j) EXPECT_EQ(P.matrix()(i, j), rng.normal() / std::sqrt(3.0));
}

TEST(Projection, RejectsBadDimensions) {
  EXPECT_THROW(sample_projection(5, 0, 1), DimensionError);
  EXPECT_THROW(sample_projection(5, 6, 1), DimensionError);
  EXPECT_NO_THROW(sample_projection(5, 5, 1));
}

TEST(Projection, EntryMoments) {
  const Index n = 2000, d = 200;
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    const ProjectionMatrix P = sample_projection(n, d, seed);
    const double N = static_cast<double>(n * d);
    const double mean = P.matrix().sum() / N;
    const double var = (P.matrix().array() - mean).square().sum() / (N - 1.0);
    // Standard error of the mean is sqrt(1/d) / sqrt(n d).
    EXPECT_LE(std::abs(mean), 3.0 / std::sqrt(static_cast<double>(d * n * d)));
    EXPECT_NEAR(var, 1.0 / d, 0.05 / d);
  }
}

TEST(Projection, ApplyAndLift) {
  const ProjectionMatrix P = sample_projection(8, 3, 2);
  const Vector x = Vector::LinSpaced(8, -1.0, 1.0);
  const Vector u = Vector::LinSpaced(3, 0.5, 2.0);
  EXPECT_TRUE(P.apply(x).isApprox(P.matrix() * x));
  EXPECT_TRUE(P.lift(u).isApprox(P.matrix().transpose() * u));
  // <Px, u> = <x, P'u>
  EXPECT_NEAR(P.apply(x).dot(u), x.dot(P.lift(u)), 1e-12);
  EXPECT_THROW(P.apply(u), DimensionError);
  EXPECT_THROW(P.lift(x), DimensionError);
}

std::vector<Vector> unit_vectors(std::uint64_t seed, Index n, int count) {
  auto xs = random_vectors(seed, n, count);
  for (auto& x : xs) x.normalize();
  return xs;
}

TEST(Projection, NormPreservation) {
  const Index n = 1000;
  const auto xs = unit_vectors(21, n, 100);
  EXPECT_GE(jl_norm_check(sample_projection(n, 200, 1), xs, 0.3), 0.95);
  const std::vector<Vector> zero{Vector::Zero(n)};
  EXPECT_EQ(jl_norm_check(sample_projection(n, 10, 1), zero, 0.01), 1.0);
  const std::vector<Vector> short_x{Vector::Ones(3)};
  EXPECT_THROW(jl_norm_check(sample_projection(n, 10, 1), short_x, 0.3), DimensionError);
}

TEST(Projection, IdentitySketchIsExact) {
  const ProjectionMatrix I = ProjectionMatrix::from_matrix(Matrix::Identity(10, 10));
  const auto xs = random_vectors(4, 10, 20);
  EXPECT_EQ(jl_norm_check(I, xs, 1e-12), 1.0);
  Matrix Q = Matrix::Random(10, 10);
  Q = 0.5 * (Q + Q.transpose()).eval();
  EXPECT_EQ(quadratic_form_check(I, Q, xs, 1e-12), 1.0);
  const Matrix A = Matrix::Random(4, 10);
  EXPECT_LE(linear_constraint_drift(I, A, xs[0]), 1e-12);
}

Matrix random_unit_frobenius(std::uint64_t seed, Index n) {
  Rng rng(seed);
  Matrix Q(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j <= i; ++j) Q(i, j) = Q(j, i) = rng.normal();
  return Q / Q.norm();
}

TEST(Projection, QuadraticFormCheck) {
  const Index n = 500;
  const Matrix Q = random_unit_frobenius(17, n);
  const auto xs = unit_vectors(18, n, 100);
  EXPECT_GE(quadratic_form_check(sample_projection(n, 100, 4), Q, xs, 0.3), 0.9);
  EXPECT_EQ(quadratic_form_check(sample_projection(n, 100, 4), Matrix::Zero(n, n), xs, 0.3), 1.0);
  const std::vector<Vector> zero{Vector::Zero(n)};
  EXPECT_EQ(quadratic_form_check(sample_projection(n, 100, 4), Q, zero, 0.01), 1.0);
  Matrix asym = Q;
  asym(0, 1) += 1e-6;
  EXPECT_THROW(quadratic_form_check(sample_projection(n, 100, 4), asym, xs, 0.3), AsymmetryError);
}

TEST(Projection, QuadraticViolationShrinksWithDimension) {
  // Mean |x'Qx - x'P'(PQP')Px| over unit x and 20 seeds, at d = n/10, n/4, n/2.
  const Index n = 200;
  const Matrix Q = random_unit_frobenius(40, n);
  const auto xs = unit_vectors(41, n, 30);
  std::vector<double> means;
  for (Index d : {n / 10, n / 4, n / 2}) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Matrix P = sample_projection(n, d, hash64({42, seed})).matrix();
      const Matrix Qbar = P * Q * P.transpose();
      for (const Vector& x : xs) {
        const Vector u = P * x;
        total += std::abs(x.dot(Q * x) - u.dot(Qbar * u));
      }
    }
    means.push_back(total);
  }
  EXPECT_GE(means[0], means[1]);
  EXPECT_GE(means[1], means[2]);
}

TEST(Projection, LinearConstraintPreservation) {
  const Index n = 500, d = 100;
  int ok = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = static_cast<std::uint64_t>(t);
    const Vector x = unit_vectors(hash64({60, s}), n, 1)[0];
    Matrix A(5, n);
    const auto rows = unit_vectors(hash64({61, s}), n, 5);
    for (Index i = 0; i < 5; ++i) A.row(i) = rows[static_cast<std::size_t>(i)].transpose();
    if (linear_constraint_drift(sample_projection(n, d, hash64({62, s})), A, x) <= 0.3) ++ok;
  }
  EXPECT_GE(ok, 90);
}

TEST(Projection, LinearDriftScalesLikeInverseSqrtD) {
  // A_i P'P x - A_i x has variance ~ (|A_i|^2 |x|^2 + (A_i x)^2) / d.
  const Index n = 300;
  const auto xs = random_vectors(30, n, 1);
  Matrix A(1, n);
  A.row(0) = random_vectors(31, n, 1)[0].transpose().normalized();
  double m25 = 0, m225 = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    m25 += linear_constraint_drift(sample_projection(n, 25, s), A, xs[0]);
    m225 += linear_constraint_drift(sample_projection(n, 225, s), A, xs[0]);
  }
  // sqrt(225 / 25) = 3; allow Monte-Carlo slack.
  EXPECT_GT(m25 / m225, 2.0);
  EXPECT_LT(m25 / m225, 4.5);
}

}  // namespace
}  // namespace rpqp
