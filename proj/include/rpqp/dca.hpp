#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rpqp/model.hpp"
#include "rpqp/solver.hpp"
#include "rpqp/spectral.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

struct DcaConfig {
  int n_starts = 10;
  int max_outer_iters = 200;
  /// Stop once f(x_k) - f(x_{k+1}) <= obj_tol * max(1, |f(x_k)|).
  double obj_tol = 1e-8;
  /// Starts are drawn uniformly from the coordinate box implied by the
  /// constraints when there is one, otherwise from [-sample_radius, sample_radius]^n.
  double sample_radius = 1.0;
  /// Iterates farther than this from feasibility are rejected.
  double feas_tol = 1e-8;
  SolverSettings solver;
};

/// Q = plus - minus with both parts PSD.
struct DcSplit {
  Matrix plus;
  Matrix minus;
};

DcSplit dc_split(const Matrix& Q);
DcSplit dc_split(const SpectralSummary& eig);

struct DcaResult {
  Vector x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::max_iters;
  int iterations = 0;       // outer iterations taken
  bool converged = false;   // stopped on the objective-decrease test
  std::vector<double> objective_history;  // f(x_0), f(x_1), ... (non-increasing)
  int start_index = 0;      // which start produced this result (multistart)
};

/// Reusable DCA engine for one problem: keeps the split and the cached
/// factorizations of the linearized subproblem and of the start projection.
class DcaSolver {
 public:
  DcaSolver(QpProblem p, DcaConfig cfg = {});
  DcaSolver(QpProblem p, DcSplit split, DcaConfig cfg = {});

  const QpProblem& problem() const { return p_; }
  const DcaConfig& config() const { return cfg_; }

  /// Nearest feasible point (Euclidean) to x.
  Vector project_feasible(const Vector& x);
  /// Uniform start in the sampling box, projected onto the feasible set.
  Vector sample_start(std::uint64_t seed);

  /// DCA from x_init (projected first if infeasible).
  DcaResult solve(const Vector& x_init);
  /// Best of cfg.n_starts runs; start i uses seed hash64(seed, i). Lowest
  /// start index wins ties.
  DcaResult multistart(std::uint64_t seed);

 private:
  void init();

  QpProblem p_;
  DcSplit split_;
  DcaConfig cfg_;
  std::optional<QpWorkspace> sub_;
  std::optional<QpWorkspace> proj_;
  Vector box_lo_;
  Vector box_hi_;
};

DcaResult dca_solve(const QpProblem& p, const Vector& x_init, const DcaConfig& cfg = {});
DcaResult multistart(const QpProblem& p, const DcaConfig& cfg, std::uint64_t seed);

}  // namespace rpqp
