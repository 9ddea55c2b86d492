#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/SVD>

#include "rpqp/bounds.hpp"
#include "rpqp/dca.hpp"
#include "rpqp/errors.hpp"
#include "rpqp/instances.hpp"
#include "rpqp/pipeline.hpp"
#include "rpqp/random.hpp"
#include "rpqp/scaling.hpp"

namespace rpqp {
namespace {

Vector gaussian(Rng& rng, Index k) {
  Vector v(k);
  for (Index i = 0; i < k; ++i) v(i) = rng.normal();
  return v;
}

TEST(Scaling, PositiveTraceAlreadyMeetsTarget) {
  Matrix Q(3, 3);
  Q << 2, 0.5, 0, 0.5, 1, 0, 0, 0, -0.5;
  const SpectralSummary q = sym_eig(Q);
  const ScalingSpec s = choose_sigmas(q, 0.5 * q.trace);
  EXPECT_EQ(s.sigma_hi, 1.0);
  EXPECT_EQ(s.cond_U, 1.0);
  EXPECT_EQ(s.U, Matrix::Identity(3, 3));
  EXPECT_NEAR(s.target_trace, q.trace, 1e-12);
}

TEST(Scaling, DiagonalPlugIn) {
  Matrix Q(2, 2);
  Q << 1, 0, 0, -2;
  const ScalingSpec s = choose_sigmas(sym_eig(Q), 1.0);
  EXPECT_NEAR(s.sigma_hi * s.sigma_hi, 3.0, 1e-12);
  EXPECT_EQ(s.sigma_lo, 1.0);
  EXPECT_EQ(s.split_index, 1);
  EXPECT_NEAR(s.target_trace, 1.0, 1e-12);
  const Matrix Qs = s.U.transpose() * Q * s.U;
  EXPECT_NEAR(Qs.trace(), 1.0, 1e-12);
  EXPECT_NEAR(s.cond_U, std::sqrt(3.0), 1e-12);
}

TEST(Scaling, NoPositiveEigenvalue) {
  const Matrix Q = -Matrix::Identity(4, 4);
  try {
    choose_sigmas(sym_eig(Q), 1.0);
    FAIL() << "expected AssumptionError";
  } catch (const AssumptionError& e) {
    EXPECT_EQ(e.label(), "A3'");
  }
  EXPECT_THROW(choose_sigmas(sym_eig(Matrix::Identity(2, 2)), 0.0), DomainError);
  EXPECT_THROW(choose_sigmas(summarize_spectrum(Vector::Ones(2)), 1.0), DomainError);
}

TEST(Scaling, TraceAndConditionIdentities) {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const Index n = 8 + t;
    const RandomQpInstance inst = gen_random_qp({n, 5, -0.5 + 0.2 * rng.normal(), 40u + t});
    const SpectralSummary q = sym_eig(inst.problem.Q);
    if (!(q.eigenvalues.maxCoeff() > 0.0)) continue;
    const double target = std::max(default_target_trace(q), 1e-3);
    const ScalingSpec s = choose_sigmas(q, target);

    double pos = 0.0, neg = 0.0;
    for (Index i = 0; i < n; ++i) (q.eigenvalues(i) >= 0.0 ? pos : neg) += q.eigenvalues(i);
    const double predicted = s.sigma_hi * s.sigma_hi * pos + s.sigma_lo * s.sigma_lo * neg;
    const double actual = (s.U.transpose() * inst.problem.Q * s.U).trace();
    EXPECT_NEAR(actual, predicted, 1e-8 * std::max(1.0, std::abs(predicted)));
    EXPECT_GT(actual, 0.0);
    EXPECT_NEAR(s.target_trace, std::max(target, q.trace), 1e-9 * std::max(1.0, target));

    Eigen::JacobiSVD<Matrix> svd(s.U);
    const Vector sv = svd.singularValues();
    EXPECT_NEAR(s.cond_U, sv(0) / sv(n - 1), 1e-10);
    EXPECT_NEAR(s.norm(), sv(0), 1e-10);
    EXPECT_GE(s.cond_U, 1.0);

    // scaled (iii) against a direct re-evaluation of the displayed formula
    if (q.trace > 0.0 || s.cond_U > 1.0) {
      const DConditions c = scaled_d_conditions(q, s.cond_U, inst.problem.m(), q.numerical_rank(), BoundParams{});
      const double r = q.stable_rank, k = q.effective_rank, cu = s.cond_U;
      EXPECT_NEAR(c.upper_iii, (2.0 * r - std::pow(cu, 4) * k) / (cu * cu * std::sqrt(r)),
                  1e-12 * std::max(1.0, std::abs(c.upper_iii)));
    }
  }
}

TEST(Scaling, IdentityScalingLeavesProblemUnchanged) {
  const RandomQpInstance inst = gen_random_qp({10, 8, 2.0, 3});
  const SpectralSummary q = sym_eig(inst.problem.Q);
  ASSERT_GT(q.trace, 0.0);
  const ScalingSpec s = choose_sigmas(q, 1e-3);
  ASSERT_EQ(s.cond_U, 1.0);
  const QpProblem scaled = build_scaled_problem(inst.problem, s);
  EXPECT_EQ(scaled.Q, inst.problem.Q);
  EXPECT_EQ(scaled.c, inst.problem.c);
  EXPECT_EQ(scaled.A, inst.problem.A);
  EXPECT_EQ(scaled.b, inst.problem.b);
  EXPECT_TRUE(scaled.row_normalized);
}

TEST(Scaling, ObjectiveAndFeasibilityIdentities) {
  Rng rng(23);
  RandomQpInstance inst = gen_random_qp({25, 30, -1.5, 9});
  inst.problem.c = gaussian(rng, 25);
  const SpectralSummary q = sym_eig(inst.problem.Q);
  ASSERT_LT(q.trace, 0.0);
  const ScalingSpec s = choose_sigmas(q, default_target_trace(q));
  ASSERT_GT(s.cond_U, 1.0);
  const QpProblem scaled = build_scaled_problem(inst.problem, s);
  EXPECT_GT(scaled.Q.trace(), 0.0);
  EXPECT_FALSE(scaled.row_normalized);

  for (int k = 0; k < 100; ++k) {
    const Vector z = 0.3 * gaussian(rng, 25);
    const Vector y = unscale(s, z);
    const double fy = objective(inst.problem, y);
    EXPECT_NEAR(objective(scaled, z), fy, 1e-10 * std::max(1.0, std::abs(fy)));
    EXPECT_EQ(max_violation(scaled, z) <= 0.0, max_violation(inst.problem, y) <= 0.0);
    EXPECT_NEAR((scaled.A * z - scaled.b).maxCoeff(), (inst.problem.A * y - inst.problem.b).maxCoeff(), 1e-10);
    EXPECT_LE((scale_inverse(s, y) - z).norm(), 1e-10 * std::max(1.0, z.norm()));
  }
  EXPECT_EQ(unscale(s, Vector::Zero(25)), Vector::Zero(25));
  EXPECT_THROW(unscale(s, Vector::Zero(3)), DimensionError);
  EXPECT_THROW(build_scaled_problem(gen_random_qp({5, 3, 0.0, 1}).problem, s), DimensionError);
}

TEST(Scaling, InscribedBallShrinksByNormOfU) {
  Rng rng(31);
  const RandomQpInstance inst = gen_random_qp({20, 40, -1.0, 12});
  const SpectralSummary q = sym_eig(inst.problem.Q);
  const ScalingSpec s = choose_sigmas(q, default_target_trace(q));
  const QpProblem scaled = build_scaled_problem(inst.problem, s);
  const double rz = scaled_radius(s, inst.ball.radius);
  for (int k = 0; k < 100; ++k) {
    Vector dir = gaussian(rng, 20);
    dir *= rz / dir.norm();
    EXPECT_LE(max_violation(scaled, dir), 1e-12);
  }
}

TEST(Scaling, LiftedScaledCrpIsFeasible) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RandomQpInstance inst = gen_random_qp({40, 60, -1.0, 100 + seed});
    const SpectralSummary q = sym_eig(inst.problem.Q);
    const ScalingSpec s = choose_sigmas(q, default_target_trace(q));
    const QpProblem scaled = build_scaled_problem(inst.problem, s);
    const ProjectedProblem crp = build_crp(build_rp(scaled, sample_projection(40, 15, seed)));
    const SolveResult res = solve_crp(crp);
    ASSERT_TRUE(res.ok()) << to_string(res.status);
    const Vector x = unscale(s, lift(crp.P, res.x));
    EXPECT_LE(max_violation(inst.problem, x), 1e-8);
  }
}

TEST(Scaling, MatchedDcaStartsAgree) {
  const RandomQpInstance inst = gen_random_qp({20, 30, -1.0, 77});
  const SpectralSummary q = sym_eig(inst.problem.Q);
  const ScalingSpec s = choose_sigmas(q, default_target_trace(q));
  ASSERT_GT(s.cond_U, 1.0);
  const QpProblem scaled = build_scaled_problem(inst.problem, s);

  DcaSolver plain(inst.problem);
  DcaSolver warped(scaled);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Vector y0 = plain.sample_start(seed);
    const DcaResult a = plain.solve(y0);
    const DcaResult b = warped.solve(scale_inverse(s, y0));
    EXPECT_NEAR(a.objective, b.objective, 1e-6) << "seed " << seed;
    EXPECT_LE(max_violation(inst.problem, unscale(s, b.x)), 1e-8);
  }
}

}  // namespace
}  // namespace rpqp
