#include "rpqp/pipeline.hpp"

#include "rpqp/errors.hpp"

namespace rpqp {

double ProjectedProblem::objective(const Vector& u) const {
  if (u.size() != d()) throw DimensionError("projected objective: |u| != d");
  return u.dot(objective_matrix() * u) + cbar.dot(u);
}

double ProjectedProblem::max_violation(const Vector& u) const {
  if (u.size() != d()) throw DimensionError("projected max_violation: |u| != d");
  double v = 0.0;
  if (m()) v = std::max(v, (Abar * u - rhs()).maxCoeff());
  if (Ebar.rows()) v = std::max(v, (Ebar * u - f).cwiseAbs().maxCoeff());
  return v;
}

QpProblem ProjectedProblem::to_qp_problem() const {
  QpProblem q;
  q.Q = objective_matrix();
  q.c = cbar;
  q.A = Abar;
  q.b = rhs();
  q.E = Ebar.rows() ? Ebar : Matrix::Zero(0, d());
  q.f = f;
  return q;
}

ConvexQp ProjectedProblem::to_convex_qp() const {
  if (!convexified) throw DomainError("to_convex_qp: reduced problem is not convexified");
  ConvexQp qp;
  qp.H = Qbar_plus;
  qp.g = cbar;
  qp.A = Abar;
  qp.b = rhs();
  qp.E = Ebar.rows() ? Ebar : Matrix::Zero(0, d());
  qp.f = f;
  return qp;
}

ProjectedProblem build_rp(const QpProblem& p, const ProjectionMatrix& P) {
  p.validate();
  if (P.original_dim() != p.n())
    throw DimensionError("build_rp: projection has " + std::to_string(P.original_dim()) +
                         " columns, problem has n=" + std::to_string(p.n()));
  const Matrix& Pm = P.matrix();
  ProjectedProblem rp{P, {}, {}, {}, {}, {}, {}, {}, {}, 0.0, false};
  rp.Qbar = symmetrized(Pm * p.Q * Pm.transpose());
  rp.Qbar_spectrum = sym_eig(rp.Qbar);
  rp.Qbar_plus = psd_projection(rp.Qbar_spectrum);
  rp.cbar = Pm * p.c;
  rp.Abar = p.A * Pm.transpose();
  rp.b = p.b;
  rp.Ebar = p.has_equalities() ? Matrix(p.E * Pm.transpose()) : Matrix::Zero(0, P.reduced_dim());
  rp.f = p.f;
  return rp;
}

ProjectedProblem build_crp(ProjectedProblem rp) {
  rp.convexified = true;
  return rp;
}

ProjectedProblem build_crp_eps(ProjectedProblem crp, double x_ref_norm, double eps) {
  if (!(eps >= 0.0) || !(x_ref_norm >= 0.0))
    throw DomainError("build_crp_eps: eps and x_ref_norm must be non-negative");
  crp.convexified = true;
  crp.relaxation = eps * x_ref_norm;
  return crp;
}

SolveResult solve_crp(const ProjectedProblem& crp, const SolverSettings& settings) {
  return solve_convex_qp(crp.to_convex_qp(), settings);
}

}  // namespace rpqp
