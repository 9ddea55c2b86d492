#pragma once

#include <optional>

#include "rpqp/solver.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

/// min x'Qx + c'x  s.t.  A x <= b  (and E x = f when the equality block is
/// non-empty). Dense storage throughout.
struct QpProblem {
  Matrix Q;
  Vector c;
  Matrix A;
  Vector b;
  Matrix E;  // zero rows when there are no equalities
  Vector f;
  bool row_normalized = false;

  Index n() const { return Q.rows(); }
  Index m() const { return A.rows(); }
  Index p() const { return E.rows(); }
  bool has_equalities() const { return E.rows() > 0; }

  /// Dimension and symmetry checks; throws DimensionError / AsymmetryError.
  void validate() const;
};

/// Center and radius of a closed ball contained in {x : A x <= b}.
struct BallInfo {
  Vector center;
  double radius = 0.0;
};

/// Scale every inequality row to unit norm (and its rhs by the same factor).
QpProblem normalize_rows(const QpProblem& p);

double objective(const QpProblem& p, const Vector& x);

/// max(max(Ax - b), max|Ex - f|, 0)
double max_violation(const QpProblem& p, const Vector& x);

inline bool feasible(const QpProblem& p, const Vector& x, double tol = 1e-8) {
  return max_violation(p, x) <= tol;
}

/// Checks A x0 + r |A_i| <= b + tol row by row.
bool ball_inside(const QpProblem& p, const BallInfo& ball, double tol = 1e-8);

struct ChebyshevOptions {
  /// Restrict the ball to the cube |x_i| <= box_radius as well.
  std::optional<double> box_radius;
  double regularization = 1e-8;
  SolverSettings solver;
};

/// Largest inscribed ball of a unit-row polytope, from the LP
/// max r s.t. A x0 + r 1 <= b with a tiny quadratic tie-breaker. The
/// reported radius is the exact minimum slack at the returned center.
/// Throws InfeasibleError when no ball with r > 0 exists and
/// UnboundedError when the radius is unbounded.
BallInfo chebyshev_center(const QpProblem& p, const ChebyshevOptions& options = {});

struct TranslatedProblem {
  QpProblem problem;  // in y = x - x0
  Vector center;      // x0
  double offset = 0.0;  // x0'Qx0 + c'x0, so opt(P) = opt(P_T) + offset
};

TranslatedProblem translate(const QpProblem& p, const Vector& x0);

/// Per-coordinate bounds implied by rows of A with a single nonzero entry.
/// Returns nullopt unless every coordinate is bounded on both sides.
std::optional<std::pair<Vector, Vector>> coordinate_box(const QpProblem& p);

/// Upper bound R >= |x - center| over the feasible set, derived from
/// coordinate_box. nullopt when the box is not available.
std::optional<double> box_radius_bound(const QpProblem& p, const Vector& center);

}  // namespace rpqp
