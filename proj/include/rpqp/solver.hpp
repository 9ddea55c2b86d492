#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "rpqp/types.hpp"

namespace rpqp {

/// Operator-splitting (ADMM) settings. Residuals are measured in the
/// infinity norm; convergence needs
///   primal <= eps_rel * (1 + max finite |bound|)
///   dual   <= eps_rel * (1 + |g|_inf).
struct SolverSettings {
  double eps_rel = 1e-8;
  int max_iters = 20000;
  double rho = 0.1;
  double sigma = 1e-6;
  double alpha = 1.6;  // over-relaxation
  int check_interval = 10;
  /// Penalty is doubled (halved) when the normalized primal/dual residual
  /// ratio exceeds adapt_ratio (drops below 1/adapt_ratio).
  /// At most one change per adapt_interval iterations; the interval doubles
  /// each time the direction of change flips.
  double adapt_ratio = 10.0;
  double adapt_factor = 2.0;
  int adapt_interval = 50;
  double infeasibility_tol = 1e-10;
  /// Active-set refinement once residuals reach polish_trigger * scale.
  bool polish = true;
  double polish_trigger = 1e-3;
  double psd_tol = 1e-8;
};

/// min x'Hx + g'x  s.t.  A x <= b,  E x = f,  lo <= x <= hi.
/// Empty A/E (zero rows) and empty lo/hi mean "no such constraints";
/// lo/hi entries may be +-infinity.
struct ConvexQp {
  Matrix H;
  Vector g;
  Matrix A;
  Vector b;
  Matrix E;
  Vector f;
  Vector lo;
  Vector hi;
};

enum class SolveStatus { optimal, max_iters, infeasible, unbounded };

std::string to_string(SolveStatus status);

struct SolveResult {
  Vector x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::max_iters;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool polished = false;
  // Multipliers in the sign convention 2Hx + g + A'lambda + E'mu + box = 0.
  Vector ineq_multipliers;  // one per row of A, >= 0
  Vector eq_multipliers;    // one per row of E
  Vector box_multipliers;   // > 0 at an active upper bound, < 0 at a lower one

  bool ok() const { return status == SolveStatus::optimal; }
};

/// Factorization cache for a fixed Hessian and constraint set. Repeated
/// solves with different linear terms reuse the factorization and warm
/// start from the previous solution.
class QpWorkspace {
 public:
  QpWorkspace(const ConvexQp& qp, SolverSettings settings = {});

  Index num_vars() const { return H_.rows(); }
  const SolverSettings& settings() const { return settings_; }

  /// Solve with linear term g. When x_init is null the previous primal and
  /// dual iterates are reused (zeros on the first call).
  SolveResult solve(const Vector& g, const Vector* x_init = nullptr);

 private:
  struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
    double primal_scale = 0.0;
    double dual_scale = 0.0;
  };

  void factor();
  Vector project(const Vector& v) const;
  Residuals residuals(const Vector& x, const Vector& z, const Vector& y, const Vector& q) const;
  bool primal_infeasible(const Vector& dy) const;
  bool dual_infeasible(const Vector& dx, const Vector& q) const;
  std::optional<SolveResult> try_polish(const Vector& q, const Vector& z, const Vector& y,
                                        std::vector<signed char>& last_active) const;
  SolveResult finish(const Vector& x, const Vector& y, const Vector& q, SolveStatus status,
                     int iterations) const;

  SolverSettings settings_;
  Matrix H_;
  Matrix P_;  // 2H
  Matrix C_;  // stacked [A; E; box rows]
  Vector lower_;
  Vector upper_;
  Index num_ineq_ = 0;
  Index num_eq_ = 0;
  std::vector<Index> box_vars_;  // variable index of each box row
  Vector rho_vec_;
  double rho_ = 0.1;
  double bound_scale_ = 1.0;
  Eigen::LLT<Matrix> llt_;

  Vector warm_x_;
  Vector warm_z_;
  Vector warm_y_;
};

/// One-shot convenience wrapper around QpWorkspace. Throws NotConvexError
/// if H has an eigenvalue below -psd_tol * max(1, |H|_F).
SolveResult solve_convex_qp(const ConvexQp& qp, const SolverSettings& settings = {},
                            const Vector* x_init = nullptr);

}  // namespace rpqp
