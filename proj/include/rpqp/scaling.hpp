#pragma once

#include "rpqp/model.hpp"
#include "rpqp/spectral.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

/// Eigen-aligned change of variables y = U z with
/// U = V diag(sigma_hi (x l), sigma_lo (x n-l)) V', V the eigenvectors of Q
/// sorted by decreasing eigenvalue and l the count of eigenvalues >= 0.
struct ScalingSpec {
  double sigma_hi = 1.0;
  double sigma_lo = 1.0;
  Index split_index = 0;
  Matrix V;
  Vector pattern;  // diagonal of U in the eigenbasis
  Matrix U;
  double cond_U = 1.0;
  double target_trace = 0.0;  // achieved tr(U'QU)

  Index n() const { return U.rows(); }
  /// Operator norm of U.
  double norm() const { return std::max(sigma_hi, sigma_lo); }
};

/// 0.1 |Q|_F
double default_target_trace(const SpectralSummary& q);

/// sigma_lo = 1 and sigma_hi^2 = (target - sum of negative eigenvalues) /
/// (sum of nonnegative ones), or sigma_hi = 1 when the trace already reaches
/// the target. `q` must carry eigenvectors (from sym_eig). Throws
/// AssumptionError("A3'") when no eigenvalue is positive.
ScalingSpec choose_sigmas(const SpectralSummary& q, double target_trace);

/// Q' = U'QU, c' = U'c, A' = AU, E' = EU; right-hand sides unchanged.
/// `p_t` should be the translated problem whose Q produced `spec`.
QpProblem build_scaled_problem(const QpProblem& p_t, const ScalingSpec& spec);

/// y = U z
Vector unscale(const ScalingSpec& spec, const Vector& z);

/// z = U^{-1} y, through the reciprocal eigen-pattern.
Vector scale_inverse(const ScalingSpec& spec, const Vector& y);

/// Radius of the ball around the origin kept by the scaled polytope: r / |U|.
inline double scaled_radius(const ScalingSpec& spec, double r) { return r / spec.norm(); }

}  // namespace rpqp
