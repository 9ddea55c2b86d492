#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rpqp/bounds.hpp"
#include "rpqp/dca.hpp"
#include "rpqp/instances.hpp"
#include "rpqp/model.hpp"
#include "rpqp/projection.hpp"
#include "rpqp/serialization.hpp"
#include "rpqp/solver.hpp"

namespace rpqp {

// ---------------------------------------------------------------- workers

/// RPQP_WORKERS when set to a positive integer, else the hardware thread count.
int default_worker_count();

/// Runs fn(0..count-1) on up to `workers` threads. Each task must catch its
/// own exceptions; results go into caller-owned slots indexed by task.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

// ------------------------------------------------------------------ solve

enum class AssumptionStatus { holds, violated, unverified };
std::string to_string(AssumptionStatus s);

struct AssumptionCheck {
  std::string label;  // A1, A2, A3, A3', A4, A4'
  AssumptionStatus status = AssumptionStatus::unverified;
  std::string detail;
};

struct SolveOptions {
  Index d = 1;
  std::uint64_t seed = 0;
  bool translate = false;  // move the origin to the inscribed-ball center
  bool scale = false;      // eigen-scaling so that tr Q' > 0
  std::optional<double> target_trace;  // default 0.1 |Q|_F
  std::optional<double> box_radius;    // search box for the inscribed-ball LP
  BoundParams params;
  SolverSettings solver;
  /// Use this sketch instead of sampling one (tests inject orthogonal P).
  std::optional<ProjectionMatrix> projection;
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iters;
  Vector x;                      // feasible point of the original problem
  double objective = 0.0;        // x'Qx + c'x
  double crp_optimum = 0.0;      // reduced convex optimum, original objective units
  double crp_optimum_shifted = 0.0;  // same, without the translation offset
  double max_violation = 0.0;
  Index n = 0;
  Index d = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  std::vector<AssumptionCheck> assumptions;
  std::optional<BallInfo> ball;  // in original coordinates
  std::optional<double> cond_U;
  std::optional<double> sigma_hi;
  std::optional<double> scaled_trace;
  std::optional<BoundReport> bounds;
  std::string bounds_note;
};

/// normalize -> [translate] -> [scale] -> project -> convexify -> solve ->
/// lift / unscale / untranslate. Throws AssumptionError when a requested
/// step needs an assumption that fails (A4' for translate, A3' for scale).
SolveReport cmd_solve(const InstanceData& instance, const SolveOptions& options);
Json to_json(const SolveReport& r);

// --------------------------------------------------------------- eighist

/// lambda_i = a + b i / n for i = 1..n.
Vector ramp_spectrum(Index n, double a, double b);

struct EighistResult {
  Vector q_eigenvalues;    // descending
  Vector pqp_eigenvalues;  // descending
  double q_negative_fraction = 0.0;
  double pqp_negative_fraction = 0.0;
  double pqp_mean = 0.0;
  double trace_over_d = 0.0;
};

/// Spectrum of Q = diag(spectrum) and of P Q P'. A Gaussian sketch is
/// rotation invariant, so a diagonal Q loses no generality.
EighistResult eighist(const Vector& spectrum, const ProjectionMatrix& P);
EighistResult cmd_eighist(Index n, Index d, double a, double b, std::uint64_t seed);
void write_eighist_csv(std::ostream& out, const EighistResult& r);

// -------------------------------------------------------------- gapsweep

struct GapSweepConfig {
  Index n = 60;
  Index m_prime = 200;
  std::vector<Index> ds{20, 30, 40, 50};
  std::vector<double> mus{-2, -1, 0, 1, 2, 3, 4, 5};
  int reps = 10;
  std::uint64_t seed = 0;
  DcaConfig dca;
  SolverSettings solver;
  int workers = 0;  // 0: default_worker_count()
};

/// "desk" (n=60, m'=200) or "paper" (n=200, m'=5000, d = 90..180).
GapSweepConfig gapsweep_preset(const std::string& name);

struct GapRow {
  Index d = 0;
  double mu = 0.0;
  int rep = 0;
  std::string status = "ok";
  double opt_p = 0.0;    // best found
  double opt_rp = 0.0;   // best found
  double opt_crp = 0.0;  // convex optimum
  double gap_rp_p() const { return opt_rp - opt_p; }
  double gap_crp_rp() const { return opt_crp - opt_rp; }
  double gap_crp_p() const { return opt_crp - opt_p; }
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
  int count = 0;
};
MeanStd mean_std(const std::vector<double>& v);

struct GapAggregate {
  Index d = 0;
  double mu = 0.0;
  MeanStd rp_p, crp_rp, crp_p;
};

struct GapSweepResult {
  std::vector<GapRow> rows;  // ordered by (mu, rep, d) as listed in the config
  std::vector<GapAggregate> aggregates;  // ordered by (d, mu)
  const GapAggregate& cell(Index d, double mu) const;
};

/// Instance per (mu, rep) from hash64(seed, mu, rep), shared by every d;
/// sketch per cell from hash64(seed, d, mu, rep).
GapSweepResult cmd_gapsweep(const GapSweepConfig& cfg);
void write_gapsweep_csv(std::ostream& out, const GapSweepResult& r);
Json to_json(const GapSweepResult& r);

// -------------------------------------------------------------- svmsweep

struct SvmSweepConfig {
  std::vector<Index> ds{50, 100, 150, 200};
  int reps = 10;
  std::uint64_t seed = 0;
  SolverSettings solver;
  int workers = 0;
};

struct SvmRow {
  Index d = 0;  // 0 on the baseline row
  int rep = 0;
  std::string status = "ok";
  double train_acc = 0.0;
  double test_acc = 0.0;
  double max_violation = 0.0;  // of 0 <= a <= C, y'a = 0
};

struct SvmAggregate {
  Index d = 0;
  MeanStd train, test;
};

struct SvmSweepResult {
  SvmRow baseline;  // convexified dual in the original variables
  std::vector<SvmRow> rows;
  std::vector<SvmAggregate> aggregates;
};

/// max(-a, a - C, |y'a|)
double svm_violation(const SvmInstance& inst, const Vector& alpha);
SvmRow svm_cell(const SvmInstance& inst, const ProjectionMatrix& P, const SolverSettings& solver);
SvmRow svm_baseline(const SvmInstance& inst, const SolverSettings& solver);

/// Sketch per (d, rep) from hash64(seed, d, rep).
SvmSweepResult cmd_svmsweep(const SvmInstance& inst, const SvmSweepConfig& cfg);
void write_svmsweep_csv(std::ostream& out, const SvmSweepResult& r);
Json to_json(const SvmSweepResult& r);

// ---------------------------------------------------------------- bounds

struct BoundsQuery {
  BoundParams params;
  std::optional<Index> d;
  bool scale = false;
  std::optional<double> target_trace;
};

/// Admissible-d report for an instance (rows are normalized first), plus
/// the concentration tail at `d` when given.
Json cmd_bounds(const QpProblem& p, const BoundsQuery& q);

// ------------------------------------------------------------------- gen

Json cmd_gen(const RandomQpConfig& cfg);

}  // namespace rpqp
