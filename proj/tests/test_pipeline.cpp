#include <gtest/gtest.h>

#include <cmath>

#include "rpqp/errors.hpp"
#include "rpqp/instances.hpp"
#include "rpqp/pipeline.hpp"
#include "rpqp/random.hpp"

namespace rpqp {
namespace {

Vector gaussian(Rng& rng, Index k, double scale = 1.0) {
  Vector v(k);
  for (Index i = 0; i < k; ++i) v(i) = scale * rng.normal();
  return v;
}

TEST(Pipeline, ZeroObjective) {
  RandomQpInstance inst = gen_random_qp({20, 10, 0.0, 1});
  inst.problem.Q.setZero();
  inst.problem.c.setZero();
  const ProjectedProblem rp = build_rp(inst.problem, sample_projection(20, 5, 2));
  EXPECT_EQ(rp.Qbar.norm(), 0.0);
  EXPECT_EQ(rp.cbar.norm(), 0.0);
}

TEST(Pipeline, ReducedObjectiveEqualsLiftedObjective) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const RandomQpInstance inst = gen_random_qp({40, 30, rng.normal(), static_cast<std::uint64_t>(t)});
    const ProjectedProblem rp = build_rp(inst.problem, sample_projection(40, 12, 100 + t));
    EXPECT_LE((rp.Qbar - rp.Qbar.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(rp.Abar.isApprox(inst.problem.A * rp.P.matrix().transpose()));
    for (int k = 0; k < 20; ++k) {
      const Vector u = gaussian(rng, 12);
      const double lifted = objective(inst.problem, lift(rp.P, u));
      EXPECT_NEAR(rp.objective(u), lifted, 1e-10 * std::max(1.0, std::abs(lifted)));
    }
  }
}

TEST(Pipeline, OrthogonalSketchIsChangeOfVariables) {
  const RandomQpInstance inst = gen_random_qp({10, 5, 1.0, 4});
  Eigen::HouseholderQR<Matrix> qr(Matrix::Random(10, 10));
  const Matrix O = qr.householderQ();
  const ProjectedProblem rp = build_rp(inst.problem, ProjectionMatrix::from_matrix(O));
  // u = O x maps the feasible sets and objectives onto each other.
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const Vector x = gaussian(rng, 10, 0.5);
    const Vector u = O * x;
    EXPECT_NEAR(rp.objective(u), objective(inst.problem, x), 1e-12);
    EXPECT_NEAR(rp.max_violation(u), max_violation(inst.problem, x), 1e-12);
  }
}

TEST(Pipeline, CrpDominatesRp) {
  Matrix Q(2, 2);
  Q << 1, 0, 0, -1;
  QpProblem p;
  p.Q = Q;
  p.c = Vector::Zero(2);
  p.A = Matrix::Zero(0, 2);
  p.b = Vector::Zero(0);
  p.E = Matrix::Zero(0, 2);
  p.f = Vector::Zero(0);
  const ProjectedProblem rp = build_rp(p, ProjectionMatrix::from_matrix(Matrix::Identity(2, 2)));
  const ProjectedProblem crp = build_crp(rp);
  const Vector u = Vector::Unit(2, 1);
  EXPECT_NEAR(crp.objective(u), 0.0, 1e-15);
  EXPECT_NEAR(rp.objective(u), -1.0, 1e-15);

  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const RandomQpInstance inst = gen_random_qp({50, 20, 0.0, 10u + t});
    const ProjectedProblem r = build_rp(inst.problem, sample_projection(50, 20, 20 + t));
    const ProjectedProblem c = build_crp(r);
    for (int k = 0; k < 1000; ++k) {
      const Vector v = gaussian(rng, 20);
      EXPECT_GE(c.objective(v), r.objective(v) - 1e-12 * v.squaredNorm());
    }
  }
}

TEST(Pipeline, PsdReducedMatrixIsUnchanged) {
  const RandomQpInstance inst = gen_random_qp({30, 5, 8.0, 2});  // diagonal entries all positive
  ASSERT_GT(inst.problem.Q.diagonal().minCoeff(), 0.0);
  const ProjectedProblem rp = build_rp(inst.problem, sample_projection(30, 10, 1));
  EXPECT_LE((rp.Qbar_plus - rp.Qbar).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Pipeline, RelaxedRhsAndValues) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const RandomQpInstance inst = gen_random_qp({30, 40, rng.uniform(-2, 2), 50u + t});
    const ProjectedProblem crp = build_crp(build_rp(inst.problem, sample_projection(30, 12, 60 + t)));
    const ProjectedProblem same = build_crp_eps(crp, 3.0, 0.0);
    EXPECT_EQ(same.rhs(), crp.rhs());
    const ProjectedProblem eps = build_crp_eps(crp, std::sqrt(30.0), 0.1);
    EXPECT_TRUE((eps.rhs() - crp.rhs()).isApprox(Vector::Constant(crp.m(), 0.1 * std::sqrt(30.0))));
    const SolveResult a = solve_crp(crp), b = solve_crp(eps);
    ASSERT_TRUE(a.ok()) << to_string(a.status) << " t=" << t << " it=" << a.iterations << " pr=" << a.primal_residual << " du=" << a.dual_residual;
    ASSERT_TRUE(b.ok()) << to_string(b.status) << " t=" << t << " it=" << b.iterations << " pr=" << b.primal_residual << " du=" << b.dual_residual;
    EXPECT_LE(eps.max_violation(a.x), 1e-8);  // CRP-feasible stays feasible
    EXPECT_GE(a.objective, b.objective - 1e-6 * (1.0 + std::abs(a.objective)));
  }
  EXPECT_THROW(build_crp_eps(build_crp(build_rp(gen_random_qp({5, 0, 0, 1}).problem, sample_projection(5, 2, 1))), 1.0, -0.1),
               DomainError);
}

TEST(Pipeline, LiftTransfersFeasibilityAndObjective) {
  Rng rng(8);
  const RandomQpInstance inst = gen_random_qp({60, 200, 1.0, 9});
  const ProjectedProblem crp = build_crp(build_rp(inst.problem, sample_projection(60, 25, 10)));
  EXPECT_EQ(lift(crp.P, Vector::Zero(25)), Vector::Zero(60));
  int feasible_seen = 0;
  for (int k = 0; k < 500; ++k) {
    const Vector u = gaussian(rng, 25, rng.uniform(0.01, 0.5));
    const Vector x = lift(crp.P, u);
    EXPECT_LE(objective(inst.problem, x), crp.objective(u) + 1e-9);
    if (crp.max_violation(u) <= 1e-9) {
      ++feasible_seen;
      EXPECT_LE(max_violation(inst.problem, x), 1e-9);
    }
  }
  EXPECT_GT(feasible_seen, 10);
  EXPECT_THROW(lift(crp.P, Vector::Zero(3)), DimensionError);
}

TEST(Pipeline, SolvedCrpIsAnUpperBoundForLiftedPoint) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const RandomQpInstance inst = gen_random_qp({60, 200, static_cast<double>(s % 5) - 1.0, s});
    const ProjectedProblem crp = build_crp(build_rp(inst.problem, sample_projection(60, 30, 1000 + s)));
    const SolveResult res = solve_crp(crp);
    ASSERT_TRUE(res.ok());
    const Vector x = lift(crp.P, res.x);
    EXPECT_LE(max_violation(inst.problem, x), 1e-8);
    EXPECT_LE(objective(inst.problem, x), res.objective + 1e-9);
    EXPECT_LE(res.objective, 1e-9);  // u = 0 is feasible with value 0
  }
}

TEST(Pipeline, DimensionMismatch) {
  const RandomQpInstance inst = gen_random_qp({10, 0, 0.0, 1});
  EXPECT_THROW(build_rp(inst.problem, sample_projection(11, 3, 1)), DimensionError);
  EXPECT_THROW(build_rp(inst.problem, sample_projection(10, 3, 1)).to_convex_qp(), DomainError);
}

}  // namespace
}  // namespace rpqp
