#include "rpqp/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rpqp/errors.hpp"
#include "rpqp/spectral.hpp"

namespace rpqp {

namespace {
constexpr double kUnboundedRadius = 1e6;
}

void QpProblem::validate() const {
  const Index n = Q.rows();
  if (n < 1 || Q.cols() != n) throw DimensionError("QpProblem: Q must be square with n >= 1");
  if (c.size() != n) throw DimensionError("QpProblem: |c| != n");
  if (A.rows() > 0 && A.cols() != n) throw DimensionError("QpProblem: A must have n columns");
  if (b.size() != A.rows()) throw DimensionError("QpProblem: |b| != rows(A)");
  if (E.rows() > 0 && E.cols() != n) throw DimensionError("QpProblem: E must have n columns");
  if (f.size() != E.rows()) throw DimensionError("QpProblem: |f| != rows(E)");
  require_symmetric(Q, 1e-12, "QpProblem");
}

QpProblem normalize_rows(const QpProblem& p) {
  p.validate();
  QpProblem out = p;
  for (Index i = 0; i < p.m(); ++i) {
    const double norm = p.A.row(i).norm();
    if (!(norm > 0.0)) throw DomainError("normalize_rows: row " + std::to_string(i) + " of A is zero");
    out.A.row(i) /= norm;
    out.b(i) /= norm;
  }
  out.row_normalized = true;
  return out;
}

double objective(const QpProblem& p, const Vector& x) {
  if (x.size() != p.n()) throw DimensionError("objective: |x| != n");
  return x.dot(p.Q * x) + p.c.dot(x);
}

double max_violation(const QpProblem& p, const Vector& x) {
  if (x.size() != p.n()) throw DimensionError("max_violation: |x| != n");
  double v = 0.0;
  if (p.m()) v = std::max(v, (p.A * x - p.b).maxCoeff());
  if (p.p()) v = std::max(v, (p.E * x - p.f).cwiseAbs().maxCoeff());
  return v;
}

bool ball_inside(const QpProblem& p, const BallInfo& ball, double tol) {
  if (ball.center.size() != p.n()) throw DimensionError("ball_inside: |center| != n");
  for (Index i = 0; i < p.m(); ++i) {
    if (p.A.row(i).dot(ball.center) + ball.radius * p.A.row(i).norm() > p.b(i) + tol) return false;
  }
  return true;
}

BallInfo chebyshev_center(const QpProblem& p, const ChebyshevOptions& options) {
  p.validate();
  if (!p.row_normalized) throw DomainError("chebyshev_center: rows of A must be normalized");
  if (p.has_equalities())
    throw DomainError("chebyshev_center: equality constraints leave no full-dimensional ball");
  const Index n = p.n();
  const Index box_rows = options.box_radius ? 2 * n : 0;
  const Index rows = p.m() + box_rows;
  if (rows == 0) throw UnboundedError("chebyshev_center: no constraints");

  ConvexQp lp;
  lp.H = options.regularization * Matrix::Identity(n + 1, n + 1);
  lp.g = Vector::Zero(n + 1);
  lp.g(n) = -1.0;
  lp.A = Matrix::Zero(rows, n + 1);
  lp.b.resize(rows);
  lp.A.topLeftCorner(p.m(), n) = p.A;
  lp.A.block(0, n, p.m(), 1).setOnes();
  lp.b.head(p.m()) = p.b;
  if (options.box_radius) {
    const double R = *options.box_radius;
    for (Index j = 0; j < n; ++j) {
      lp.A(p.m() + 2 * j, j) = 1.0;
      lp.A(p.m() + 2 * j + 1, j) = -1.0;
      lp.A(p.m() + 2 * j, n) = 1.0;
      lp.A(p.m() + 2 * j + 1, n) = 1.0;
      lp.b(p.m() + 2 * j) = R;
      lp.b(p.m() + 2 * j + 1) = R;
    }
  }
  const SolveResult res = solve_convex_qp(lp, options.solver);
  if (res.status == SolveStatus::unbounded || (res.ok() && res.x(n) >= kUnboundedRadius))
    throw UnboundedError("chebyshev_center: inscribed radius is unbounded; supply a search box");
  if (!res.ok())
    throw ConvergenceError("chebyshev_center: LP solve ended with status " + to_string(res.status));

  BallInfo ball;
  ball.center = res.x.head(n);
  // Certified radius: exact minimum slack at the center (unit rows).
  double slack = std::numeric_limits<double>::infinity();
  if (p.m()) slack = (p.b - p.A * ball.center).minCoeff();
  if (options.box_radius)
    slack = std::min(slack, *options.box_radius - ball.center.cwiseAbs().maxCoeff());
  ball.radius = slack;
  if (!(ball.radius > 0.0))
    throw InfeasibleError("chebyshev_center: no inscribed ball (polytope empty or not full-dimensional)");
  return ball;
}

TranslatedProblem translate(const QpProblem& p, const Vector& x0) {
  p.validate();
  if (x0.size() != p.n()) throw DimensionError("translate: |x0| != n");
  TranslatedProblem t;
  t.problem = p;
  t.problem.c = 2.0 * (p.Q * x0) + p.c;
  if (p.m()) t.problem.b = p.b - p.A * x0;
  if (p.p()) t.problem.f = p.f - p.E * x0;
  t.center = x0;
  t.offset = x0.dot(p.Q * x0) + p.c.dot(x0);
  return t;
}

std::optional<std::pair<Vector, Vector>> coordinate_box(const QpProblem& p) {
  const Index n = p.n();
  Vector lo = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(n, std::numeric_limits<double>::infinity());
  for (Index i = 0; i < p.m(); ++i) {
    Index nz = 0, j_nz = -1;
    for (Index j = 0; j < n; ++j) {
      if (p.A(i, j) != 0.0) {
        ++nz;
        j_nz = j;
      }
    }
    if (nz != 1) continue;
    const double a = p.A(i, j_nz);
    const double bound = p.b(i) / a;
    if (a > 0.0)
      hi(j_nz) = std::min(hi(j_nz), bound);
    else
      lo(j_nz) = std::max(lo(j_nz), bound);
  }
  if (!lo.allFinite() || !hi.allFinite()) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::optional<double> box_radius_bound(const QpProblem& p, const Vector& center) {
  const auto box = coordinate_box(p);
  if (!box) return std::nullopt;
  const Vector reach = (box->first - center).cwiseAbs().cwiseMax((box->second - center).cwiseAbs());
  return reach.norm();
}

}  // namespace rpqp
