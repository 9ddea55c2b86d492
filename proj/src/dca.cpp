#include "rpqp/dca.hpp"

#include <cmath>
#include <string>

#include "rpqp/errors.hpp"
#include "rpqp/random.hpp"

namespace rpqp {

namespace {

ConvexQp constraint_qp(const QpProblem& p, Matrix H) {
  ConvexQp qp;
  qp.H = std::move(H);
  qp.g = Vector::Zero(p.n());
  qp.A = p.A;
  qp.b = p.b;
  qp.E = p.E;
  qp.f = p.f;
  return qp;
}

}  // namespace

DcSplit dc_split(const SpectralSummary& eig) {
  const Vector pos = eig.eigenvalues.cwiseMax(0.0);
  const Vector neg = (-eig.eigenvalues).cwiseMax(0.0);
  const Matrix& V = eig.eigenvectors;
  return {V * pos.asDiagonal() * V.transpose(), V * neg.asDiagonal() * V.transpose()};
}

DcSplit dc_split(const Matrix& Q) { return dc_split(sym_eig(Q)); }

DcaSolver::DcaSolver(QpProblem p, DcaConfig cfg) : p_(std::move(p)), cfg_(cfg) {
  p_.validate();
  split_ = dc_split(p_.Q);
  init();
}

DcaSolver::DcaSolver(QpProblem p, DcSplit split, DcaConfig cfg)
    : p_(std::move(p)), split_(std::move(split)), cfg_(cfg) {
  p_.validate();
  if (split_.plus.rows() != p_.n() || split_.minus.rows() != p_.n())
    throw DimensionError("DcaSolver: split does not match problem size");
  init();
}

void DcaSolver::init() {
  if (cfg_.n_starts < 1) throw DomainError("DcaConfig: n_starts must be >= 1");
  if (cfg_.max_outer_iters < 1) throw DomainError("DcaConfig: max_outer_iters must be >= 1");
  if (!(cfg_.obj_tol > 0.0) || !(cfg_.sample_radius > 0.0))
    throw DomainError("DcaConfig: tolerances and sample radius must be positive");
  // The plus part is PSD by construction; symmetrize to scrub round-off.
  split_.plus = symmetrized(split_.plus);
  split_.minus = symmetrized(split_.minus);
  sub_.emplace(constraint_qp(p_, split_.plus), cfg_.solver);
  if (auto box = coordinate_box(p_)) {
    box_lo_ = box->first;
    box_hi_ = box->second;
  } else {
    box_lo_ = Vector::Constant(p_.n(), -cfg_.sample_radius);
    box_hi_ = Vector::Constant(p_.n(), cfg_.sample_radius);
  }
}

Vector DcaSolver::project_feasible(const Vector& x) {
  if (x.size() != p_.n()) throw DimensionError("project_feasible: |x| != n");
  if (!proj_) proj_.emplace(constraint_qp(p_, Matrix::Identity(p_.n(), p_.n())), cfg_.solver);
  // |y - x|^2 = y'y - 2x'y + const
  const Vector g = -2.0 * x;
  const SolveResult res = proj_->solve(g);
  if (res.status == SolveStatus::infeasible)
    throw InfeasibleError("dca: feasible set is empty");
  if (!res.ok() && max_violation(p_, res.x) > cfg_.feas_tol)
    throw ConvergenceError("dca: projection onto the feasible set failed (" + to_string(res.status) + ")");
  return res.x;
}

Vector DcaSolver::sample_start(std::uint64_t seed) {
  Rng rng(seed);
  Vector x(p_.n());
  for (Index i = 0; i < p_.n(); ++i) x(i) = rng.uniform(box_lo_(i), box_hi_(i));
  if (feasible(p_, x, cfg_.feas_tol)) return x;
  return project_feasible(x);
}

DcaResult DcaSolver::solve(const Vector& x_init) {
  if (x_init.size() != p_.n()) throw DimensionError("dca_solve: |x_init| != n");
  DcaResult out;
  Vector x = feasible(p_, x_init, cfg_.feas_tol) ? x_init : project_feasible(x_init);
  double fx = objective(p_, x);
  out.objective_history.push_back(fx);
  out.status = SolveStatus::optimal;

  for (int k = 0; k < cfg_.max_outer_iters; ++k) {
    const Vector g = p_.c - 2.0 * (split_.minus * x);
    const SolveResult sub = sub_->solve(g);
    if (sub.status == SolveStatus::infeasible || sub.status == SolveStatus::unbounded)
      throw ConvergenceError("dca: subproblem at outer iteration " + std::to_string(k) +
                             " ended with status " + to_string(sub.status));
    if (!sub.ok()) out.status = SolveStatus::max_iters;
    if (max_violation(p_, sub.x) > cfg_.feas_tol) break;
    const double f_next = objective(p_, sub.x);
    // Safeguard: an inexact subproblem may not decrease f; keep x_k then.
    if (!(f_next <= fx)) {
      out.converged = true;
      break;
    }
    const double decrease = fx - f_next;
    x = sub.x;
    fx = f_next;
    out.objective_history.push_back(fx);
    out.iterations = k + 1;
    if (decrease <= cfg_.obj_tol * std::max(1.0, std::abs(fx))) {
      out.converged = true;
      break;
    }
  }
  if (out.converged) out.status = SolveStatus::optimal;
  out.x = x;
  out.objective = fx;
  return out;
}

DcaResult DcaSolver::multistart(std::uint64_t seed) {
  std::optional<DcaResult> best;
  std::string failures;
  for (int i = 0; i < cfg_.n_starts; ++i) {
    try {
      DcaResult r = solve(sample_start(hash64({seed, static_cast<std::uint64_t>(i)})));
      r.start_index = i;
      if (!best || r.objective < best->objective) best = std::move(r);
    } catch (const InfeasibleError&) {
      throw;
    } catch (const Error& e) {
      failures += "start " + std::to_string(i) + ": " + e.what() + "; ";
    }
  }
  if (!best) throw ConvergenceError("dca multistart: every start failed: " + failures);
  return *best;
}

DcaResult dca_solve(const QpProblem& p, const Vector& x_init, const DcaConfig& cfg) {
  return DcaSolver(p, cfg).solve(x_init);
}

DcaResult multistart(const QpProblem& p, const DcaConfig& cfg, std::uint64_t seed) {
  return DcaSolver(p, cfg).multistart(seed);
}

}  // namespace rpqp
