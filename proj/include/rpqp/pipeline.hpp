#pragma once

#include "rpqp/model.hpp"
#include "rpqp/projection.hpp"
#include "rpqp/solver.hpp"
#include "rpqp/spectral.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

/// A problem pushed through the sketch u = P x:
///   min u'Qbar u + cbar'u  s.t.  Abar u <= b + relaxation,  Ebar u = f
/// with Qbar = P Q P', cbar = P c, Abar = A P', Ebar = E P'. When
/// `convexified` is set the objective matrix is Qbar_plus = F+(Qbar).
struct ProjectedProblem {
  ProjectionMatrix P;
  Matrix Qbar;
  SpectralSummary Qbar_spectrum;  // eigendecomposition of Qbar, computed once
  Matrix Qbar_plus;
  Vector cbar;
  Matrix Abar;
  Vector b;
  Matrix Ebar;
  Vector f;
  double relaxation = 0.0;
  bool convexified = false;

  Index d() const { return P.reduced_dim(); }
  Index n() const { return P.original_dim(); }
  Index m() const { return Abar.rows(); }

  const Matrix& objective_matrix() const { return convexified ? Qbar_plus : Qbar; }
  Vector rhs() const { return b.array() + relaxation; }
  double objective(const Vector& u) const;
  double max_violation(const Vector& u) const;

  /// Reduced problem as a QpProblem in u (objective matrix as above).
  QpProblem to_qp_problem() const;
  /// Convex reduced problem; requires `convexified`.
  ConvexQp to_convex_qp() const;
};

ProjectedProblem build_rp(const QpProblem& p, const ProjectionMatrix& P);
ProjectedProblem build_crp(ProjectedProblem rp);
/// Relaxes the right-hand side to b + eps * x_ref_norm.
ProjectedProblem build_crp_eps(ProjectedProblem crp, double x_ref_norm, double eps);

inline Vector lift(const ProjectionMatrix& P, const Vector& u) { return P.lift(u); }

/// Solves a convexified reduced problem.
SolveResult solve_crp(const ProjectedProblem& crp, const SolverSettings& settings = {});

}  // namespace rpqp
