#include "rpqp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "rpqp/errors.hpp"
#include "rpqp/spectral.hpp"

namespace rpqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr double kEqRhoScale = 1e3;
constexpr double kPolishDelta = 1e-7;
constexpr int kRefineSteps = 20;

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

QpWorkspace::QpWorkspace(const ConvexQp& qp, SolverSettings settings)
    : settings_(settings), rho_(settings.rho) {
  const Index k = qp.H.rows();
  if (k < 1 || qp.H.cols() != k) throw DimensionError("solve_convex_qp: H must be square, k >= 1");
  if (qp.g.size() != 0 && qp.g.size() != k) throw DimensionError("solve_convex_qp: |g| != k");
  if (qp.A.rows() > 0 && (qp.A.cols() != k || qp.b.size() != qp.A.rows()))
    throw DimensionError("solve_convex_qp: A/b dimensions");
  if (qp.A.rows() == 0 && qp.b.size() != 0) throw DimensionError("solve_convex_qp: b without A");
  if (qp.E.rows() > 0 && (qp.E.cols() != k || qp.f.size() != qp.E.rows()))
    throw DimensionError("solve_convex_qp: E/f dimensions");
  if ((qp.lo.size() != 0 && qp.lo.size() != k) || (qp.hi.size() != 0 && qp.hi.size() != k))
    throw DimensionError("solve_convex_qp: box dimensions");

  require_symmetric(qp.H, 1e-10, "solve_convex_qp");
  H_ = symmetrized(qp.H);
  {
    const double tau = settings_.psd_tol * std::max(1.0, H_.norm());
    Matrix shifted = H_;
    shifted.diagonal().array() += tau;
    Eigen::LLT<Matrix> probe(shifted);
    if (probe.info() != Eigen::Success)
      throw NotConvexError("solve_convex_qp: H is not positive semidefinite");
  }
  P_ = 2.0 * H_;

  num_ineq_ = qp.A.rows();
  num_eq_ = qp.E.rows();
  for (Index j = 0; j < k; ++j) {
    const double lo = qp.lo.size() ? qp.lo(j) : -kInf;
    const double hi = qp.hi.size() ? qp.hi(j) : kInf;
    if (lo > hi) throw DomainError("solve_convex_qp: box lower bound above upper bound");
    if (std::isfinite(lo) || std::isfinite(hi)) box_vars_.push_back(j);
  }
  const Index nbox = static_cast<Index>(box_vars_.size());
  const Index nc = num_ineq_ + num_eq_ + nbox;
  C_ = Matrix::Zero(nc, k);
  lower_.resize(nc);
  upper_.resize(nc);
  if (num_ineq_) {
    C_.topRows(num_ineq_) = qp.A;
    lower_.head(num_ineq_).setConstant(-kInf);
    upper_.head(num_ineq_) = qp.b;
  }
  if (num_eq_) {
    C_.middleRows(num_ineq_, num_eq_) = qp.E;
    lower_.segment(num_ineq_, num_eq_) = qp.f;
    upper_.segment(num_ineq_, num_eq_) = qp.f;
  }
  for (Index i = 0; i < nbox; ++i) {
    const Index j = box_vars_[static_cast<std::size_t>(i)];
    C_(num_ineq_ + num_eq_ + i, j) = 1.0;
    lower_(num_ineq_ + num_eq_ + i) = qp.lo.size() ? qp.lo(j) : -kInf;
    upper_(num_ineq_ + num_eq_ + i) = qp.hi.size() ? qp.hi(j) : kInf;
  }
  bound_scale_ = 0.0;
  for (Index i = 0; i < nc; ++i) {
    if (std::isfinite(lower_(i))) bound_scale_ = std::max(bound_scale_, std::abs(lower_(i)));
    if (std::isfinite(upper_(i))) bound_scale_ = std::max(bound_scale_, std::abs(upper_(i)));
  }
  factor();
}

void QpWorkspace::factor() {
  const Index nc = C_.rows();
  rho_vec_.resize(nc);
  for (Index i = 0; i < nc; ++i) {
    if (lower_(i) == upper_(i))
      rho_vec_(i) = kEqRhoScale * rho_;
    else if (!std::isfinite(lower_(i)) && !std::isfinite(upper_(i)))
      rho_vec_(i) = kRhoMin;
    else
      rho_vec_(i) = rho_;
  }
  Matrix K = P_;
  K.diagonal().array() += settings_.sigma;
  if (nc) K.noalias() += C_.transpose() * rho_vec_.asDiagonal() * C_;
  llt_.compute(K);
  if (llt_.info() != Eigen::Success)
    throw ConvergenceError("solve_convex_qp: KKT factorization failed");
}

Vector QpWorkspace::project(const Vector& v) const {
  return v.cwiseMax(lower_).cwiseMin(upper_);
}

QpWorkspace::Residuals QpWorkspace::residuals(const Vector& x, const Vector& z, const Vector& y,
                                              const Vector& q) const {
  Residuals r;
  const Vector Cx = C_ * x;
  const Vector Px = P_ * x;
  const Vector Cty = C_.transpose() * y;
  r.primal = C_.rows() ? inf_norm(Cx - z) : 0.0;
  r.dual = inf_norm(Px + q + Cty);
  r.primal_scale = std::max(inf_norm(Cx), inf_norm(z));
  r.dual_scale = std::max({inf_norm(Px), inf_norm(Cty), inf_norm(q)});
  return r;
}

bool QpWorkspace::primal_infeasible(const Vector& dy) const {
  const double norm_dy = inf_norm(dy);
  if (!(norm_dy > 1e-30)) return false;
  const double eps = settings_.infeasibility_tol * norm_dy;
  if (inf_norm(C_.transpose() * dy) > eps) return false;
  double support = 0.0;
  for (Index i = 0; i < dy.size(); ++i) {
    if (dy(i) > 0.0) {
      if (!std::isfinite(upper_(i))) {
        if (dy(i) > eps) return false;
      } else {
        support += upper_(i) * dy(i);
      }
    } else if (dy(i) < 0.0) {
      if (!std::isfinite(lower_(i))) {
        if (-dy(i) > eps) return false;
      } else {
        support += lower_(i) * dy(i);
      }
    }
  }
  return support < -eps;
}

bool QpWorkspace::dual_infeasible(const Vector& dx, const Vector& q) const {
  const double norm_dx = inf_norm(dx);
  if (!(norm_dx > 1e-30)) return false;
  const double eps = settings_.infeasibility_tol * norm_dx;
  if (inf_norm(P_ * dx) > eps) return false;
  if (!(q.dot(dx) < -eps)) return false;
  const Vector Cdx = C_ * dx;
  for (Index i = 0; i < Cdx.size(); ++i) {
    if (std::isfinite(upper_(i)) && Cdx(i) > eps) return false;
    if (std::isfinite(lower_(i)) && Cdx(i) < -eps) return false;
  }
  return true;
}

// Guess the active set from (z, y), solve the equality-constrained KKT system
// on it with iterative refinement, and accept the point only if it meets the
// strict tolerances with sign-consistent multipliers.
std::optional<SolveResult> QpWorkspace::try_polish(const Vector& q, const Vector& z,
                                                   const Vector& y,
                                                   std::vector<signed char>& last_active) const {
  const Index k = H_.rows();
  const Index nc = C_.rows();
  std::vector<signed char> active(static_cast<std::size_t>(nc), 0);
  std::vector<Index> rows;
  for (Index i = 0; i < nc; ++i) {
    signed char a = 0;
    if (lower_(i) == upper_(i))
      a = 2;
    else if (std::isfinite(lower_(i)) && z(i) - lower_(i) < -y(i))
      a = -1;
    else if (std::isfinite(upper_(i)) && upper_(i) - z(i) < y(i))
      a = 1;
    active[static_cast<std::size_t>(i)] = a;
    if (a != 0) rows.push_back(i);
  }
  if (active == last_active) return std::nullopt;
  last_active = active;

  const Index na = static_cast<Index>(rows.size());
  Matrix Ca(na, k);
  Vector target(na);
  for (Index r = 0; r < na; ++r) {
    const Index i = rows[static_cast<std::size_t>(r)];
    Ca.row(r) = C_.row(i);
    target(r) = active[static_cast<std::size_t>(i)] == -1 ? lower_(i) : upper_(i);
  }
  Matrix kkt = Matrix::Zero(k + na, k + na);
  kkt.topLeftCorner(k, k) = P_;
  kkt.topRightCorner(k, na) = Ca.transpose();
  kkt.bottomLeftCorner(na, k) = Ca;
  Matrix reg = kkt;
  reg.diagonal().head(k).array() += kPolishDelta;
  reg.diagonal().tail(na).array() -= kPolishDelta;
  Eigen::PartialPivLU<Matrix> lu(reg);

  Vector rhs(k + na);
  rhs << -q, target;
  Vector sol = lu.solve(rhs);
  const double rhs_scale = std::max(1.0, inf_norm(rhs));
  for (int it = 0; it < kRefineSteps; ++it) {
    const Vector res = rhs - kkt * sol;
    if (!(inf_norm(res) > 1e-15 * rhs_scale)) break;
    sol += lu.solve(res);
  }
  if (!sol.allFinite()) return std::nullopt;

  const Vector x = sol.head(k);
  Vector y_full = Vector::Zero(nc);
  for (Index r = 0; r < na; ++r) {
    const Index i = rows[static_cast<std::size_t>(r)];
    const double v = sol(k + r);
    switch (active[static_cast<std::size_t>(i)]) {
      case -1: y_full(i) = std::min(v, 0.0); break;
      case 1: y_full(i) = std::max(v, 0.0); break;
      default: y_full(i) = v; break;
    }
  }
  const Vector Cx = C_ * x;
  const double primal = nc ? inf_norm(Cx - project(Cx)) : 0.0;
  const double dual = inf_norm(P_ * x + q + C_.transpose() * y_full);
  const double eps_p = settings_.eps_rel * (1.0 + bound_scale_);
  const double eps_d = settings_.eps_rel * (1.0 + inf_norm(q));
  if (primal <= eps_p && dual <= eps_d) {
    SolveResult res = finish(x, y_full, q, SolveStatus::optimal, 0);
    res.polished = true;
    return res;
  }
  return std::nullopt;
}

SolveResult QpWorkspace::finish(const Vector& x, const Vector& y, const Vector& q,
                                SolveStatus status, int iterations) const {
  SolveResult res;
  res.x = x;
  res.objective = x.dot(H_ * x) + q.dot(x);
  res.status = status;
  res.iterations = iterations;
  const Vector Cx = C_ * x;
  res.primal_residual = C_.rows() ? inf_norm(Cx - project(Cx)) : 0.0;
  res.dual_residual = inf_norm(P_ * x + q + C_.transpose() * y);
  res.ineq_multipliers = y.head(num_ineq_);
  res.eq_multipliers = y.segment(num_ineq_, num_eq_);
  res.box_multipliers = Vector::Zero(H_.rows());
  for (std::size_t i = 0; i < box_vars_.size(); ++i)
    res.box_multipliers(box_vars_[i]) = y(num_ineq_ + num_eq_ + static_cast<Index>(i));
  return res;
}

SolveResult QpWorkspace::solve(const Vector& g, const Vector* x_init) {
  const Index k = H_.rows();
  const Index nc = C_.rows();
  const Vector q = g.size() ? g : Vector::Zero(k);
  if (q.size() != k) throw DimensionError("solve_convex_qp: |g| != k");

  Vector x, z, y;
  if (x_init) {
    if (x_init->size() != k) throw DimensionError("solve_convex_qp: |x_init| != k");
    x = *x_init;
    z = project(C_ * x);
    y = Vector::Zero(nc);
  } else if (warm_x_.size() == k) {
    x = warm_x_;
    z = warm_z_;
    y = warm_y_;
  } else {
    x = Vector::Zero(k);
    z = project(C_ * x);
    y = Vector::Zero(nc);
  }

  const double eps_p = settings_.eps_rel * (1.0 + bound_scale_);
  const double eps_d = settings_.eps_rel * (1.0 + inf_norm(q));
  std::vector<signed char> last_active;
  Vector dx = Vector::Zero(k), dy = Vector::Zero(nc);

  auto store_warm = [&](const SolveResult& r, const Vector& zz, const Vector& yy) {
    warm_x_ = r.x;
    warm_z_ = zz;
    warm_y_ = yy;
  };
  // A polished point carries exact multipliers; prefer them for the next start.
  auto store_polished = [&](const SolveResult& r) {
    Vector yy(nc);
    yy.head(num_ineq_) = r.ineq_multipliers;
    yy.segment(num_ineq_, num_eq_) = r.eq_multipliers;
    for (std::size_t i = 0; i < box_vars_.size(); ++i)
      yy(num_ineq_ + num_eq_ + static_cast<Index>(i)) = r.box_multipliers(box_vars_[i]);
    store_warm(r, project(C_ * r.x), yy);
  };

  // A warm start may already be optimal.
  if (settings_.polish) {
    const Residuals r0 = residuals(x, z, y, q);
    if (r0.primal <= settings_.polish_trigger * (1.0 + bound_scale_) &&
        r0.dual <= settings_.polish_trigger * (1.0 + inf_norm(q))) {
      if (auto polished = try_polish(q, z, y, last_active)) {
        store_polished(*polished);
        return *polished;
      }
    }
  }

  int iter = 0;
  int adapt_interval = settings_.adapt_interval;
  int next_adapt = adapt_interval;
  int last_dir = 0;
  while (iter < settings_.max_iters) {
    ++iter;
    const Vector rhs = settings_.sigma * x - q + C_.transpose() * (rho_vec_.cwiseProduct(z) - y);
    const Vector x_tilde = llt_.solve(rhs);
    const Vector z_tilde = C_ * x_tilde;
    const Vector x_next = settings_.alpha * x_tilde + (1.0 - settings_.alpha) * x;
    const Vector z_relaxed = settings_.alpha * z_tilde + (1.0 - settings_.alpha) * z;
    const Vector z_next = project(z_relaxed + y.cwiseQuotient(rho_vec_));
    const Vector y_next = y + rho_vec_.cwiseProduct(z_relaxed - z_next);
    dx = x_next - x;
    dy = y_next - y;
    x = x_next;
    z = z_next;
    y = y_next;

    if (iter % settings_.check_interval != 0 && iter != 1) continue;

    const Residuals r = residuals(x, z, y, q);
    if (r.primal <= eps_p && r.dual <= eps_d) {
      if (settings_.polish) {
        if (auto polished = try_polish(q, z, y, last_active)) {
          polished->iterations = iter;
          store_polished(*polished);
          return *polished;
        }
      }
      SolveResult res = finish(x, y, q, SolveStatus::optimal, iter);
      store_warm(res, z, y);
      return res;
    }
    if (settings_.polish && r.primal <= settings_.polish_trigger * (1.0 + bound_scale_) &&
        r.dual <= settings_.polish_trigger * (1.0 + inf_norm(q))) {
      if (auto polished = try_polish(q, z, y, last_active)) {
        polished->iterations = iter;
        store_polished(*polished);
        return *polished;
      }
    }
    if (r.primal > eps_p && primal_infeasible(dy)) {
      SolveResult res = finish(x, y, q, SolveStatus::infeasible, iter);
      warm_x_.resize(0);
      return res;
    }
    if (r.dual > eps_d && dual_infeasible(dx, q)) {
      SolveResult res = finish(x, y, q, SolveStatus::unbounded, iter);
      warm_x_.resize(0);
      return res;
    }

    const double pn = r.primal / std::max(r.primal_scale, 1e-30);
    const double dn = r.dual / std::max(r.dual_scale, 1e-30);
    const double ratio = pn / std::max(dn, 1e-30);
    if (iter < next_adapt) continue;
    int dir = 0;
    if (ratio > settings_.adapt_ratio && rho_ < kRhoMax)
      dir = 1;
    else if (ratio < 1.0 / settings_.adapt_ratio && rho_ > kRhoMin)
      dir = -1;
    if (dir != 0) {
      // Back-and-forth moves mean the ratio is noise; slow down.
      if (last_dir != 0 && dir != last_dir) adapt_interval *= 2;
      last_dir = dir;
      rho_ = dir > 0 ? std::min(kRhoMax, rho_ * settings_.adapt_factor)
                     : std::max(kRhoMin, rho_ / settings_.adapt_factor);
      factor();
      next_adapt = iter + adapt_interval;
    }
  }
  SolveResult res = finish(x, y, q, SolveStatus::max_iters, iter);
  store_warm(res, z, y);
  return res;
}

SolveResult solve_convex_qp(const ConvexQp& qp, const SolverSettings& settings,
                            const Vector* x_init) {
  QpWorkspace ws(qp, settings);
  return ws.solve(qp.g, x_init);
}

}  // namespace rpqp
