#pragma once

#include <optional>
#include <string>

#include "rpqp/spectral.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

/// Accuracy/probability parameters and absolute constants of the error
/// bounds. The constants are not known numerically; 1.0 is the default and
/// every report echoes what was used.
struct BoundParams {
  double eps = 1.0;   // constraint relaxation
  double eps1 = 1.0;  // quadratic form (eigen-directions)
  double eps2 = 1.0;  // kept for the general lemma; the theorems fix it to 1
  double eps3 = 1.0;  // concentration of PQP'
  double eps4 = 1.0;  // linear term
  double delta1 = 0.25;
  double delta2 = 0.25;
  double C0 = 1.0;
  double C1 = 1.0;
  double C_sub = 1.0;  // sub-Gaussian norm constant
  double D = 1.0;      // any D >= C_sub
  std::optional<double> R;  // bound on |x*| (or |y*|)

  /// eps's in (0, 1], deltas in (0, 1/2), positive constants, D >= C_sub.
  void validate() const;
};

/// Admissible projection dimensions: d >= lower_i, d >= lower_ii, d < upper_iii.
struct DConditions {
  double lower_i = 0.0;
  double lower_ii = 0.0;
  double upper_iii = 0.0;
  Index d_lower_i = 0;   // ceil(lower_i), at least 1
  Index d_lower_ii = 0;  // ceil(lower_ii), at least 1
  bool admissible = false;
  Index d_min = 0;  // admissible integers form [d_min, d_max] when admissible
  Index d_max = 0;
  /// Scaled conditions only: (ii) in the form without the effective-rank
  /// term, valid for the scaled matrix whatever its trace ratio. Stricter.
  std::optional<double> lower_ii_k_free;

  bool admits(Index d) const { return admissible && d >= d_min && d <= d_max; }
};

/// Conditions (i)-(iii) for an unscaled problem with tr Q > 0. Throws
/// AssumptionError("A3") when tr Q <= 0 (use the scaled variant).
DConditions d_conditions(const SpectralSummary& q, Index m, Index rank_Q, const BoundParams& params);

/// Conditions for the eigen-scaled problem. Stable and effective rank come
/// from the unscaled Q. (i) and (ii) coincide with the unscaled ones with
/// D = C_sub; (iii) becomes (2 C^3 r - cond^4 k) / (eps3 cond^2 sqrt(r)).
DConditions scaled_d_conditions(const SpectralSummary& q, double cond_U, Index m, Index rank_Q,
                                const BoundParams& params);

/// 2 9^d exp(-C1 min((trQ + e d |Q|_F)^2 / (4 D^6 |Q|_F^2), (trQ + e d |Q|_F) / (2 D^3 |Q|))),
/// carried in log space.
struct TailValue {
  double log_value = 0.0;
  double value() const;
};

TailValue lemma35_probability(const SpectralSummary& q, Index d, double eps3, double D, double C1 = 1.0);

/// (1 + eps y/r) opt - (3 eps1 + 2 eps3) y^2 |Q|_F - eps4 y |linear|.
/// With opt <= 0 this is a lower bound on the (translated) optimum.
double additive_bound(double opt_crp, double y_norm, double r, double linear_norm, double frob_Q,
                      const BoundParams& params);

/// Alignment of (y y', y) with (Q, 2Qx0 + c) in the trace inner product.
/// Throws DomainError when either vector is zero.
double alignment_cosine(const Vector& y, const Matrix& Q, const Vector& linear);

struct MultiplicativeFactor {
  double factor = 1.0;
  double cos_theta = 0.0;
  bool applicable = false;  // cos_theta > 0
};

/// (r / (r + eps |y|)) (1 + sqrt((3 eps1 + 2 eps3)^2 + eps4^2) / cos theta).
MultiplicativeFactor multiplicative_factor(const Vector& y_star, const Matrix& Q, const Vector& x0,
                                           const Vector& c, double r, const BoundParams& params);

/// (1 + eps cond y/r) opt - (3 eps1 + 2 eps3) cond^2 y^2 |Q|_F - eps4 cond y |linear|.
double scaled_bound(double opt_crp, double y_norm, double r, double cond_U, double frob_Q,
                    double linear_norm, const BoundParams& params);

/// Everything a solve reports about its guarantees, with the inputs echoed.
struct BoundReport {
  DConditions conditions;
  double additive_bound = 0.0;
  double additive_gap = 0.0;  // opt_crp - additive_bound
  std::optional<double> multiplicative_factor;
  std::optional<double> cos_theta;
  double probability_floor = 0.0;  // 1 - delta1 - delta2

  double stable_rank = 0.0;
  double effective_rank = 0.0;
  Index m = 0;
  Index rank_Q = 0;
  double r = 0.0;
  double frob_Q = 0.0;
  double linear_norm = 0.0;
  double y_norm = 0.0;
  std::string y_norm_source;  // "radius bound" or "incumbent-based, heuristic"
  std::optional<double> cond_U;
  double opt_crp = 0.0;
  BoundParams params;
};

struct BoundInputs {
  Index m = 0;
  Index rank_Q = 0;
  double r = 0.0;
  double y_norm = 0.0;
  std::string y_norm_source = "radius bound";
  double linear_norm = 0.0;
  double opt_crp = 0.0;
  std::optional<double> cond_U;  // set for scaled runs
};

/// Conditions plus the additive (or scaled) bound. The multiplicative
/// factor is left empty; callers holding y* fill it in for unscaled runs.
BoundReport bound_report(const SpectralSummary& q, const BoundInputs& in, const BoundParams& params);

}  // namespace rpqp
