#include "rpqp/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "rpqp/errors.hpp"

namespace rpqp {

double default_target_trace(const SpectralSummary& q) { return 0.1 * q.frob_norm; }

ScalingSpec choose_sigmas(const SpectralSummary& q, double target_trace) {
  if (!(target_trace > 0.0)) throw DomainError("choose_sigmas: target trace must be positive");
  const Index n = q.eigenvalues.size();
  if (n == 0 || q.eigenvectors.rows() != n || q.eigenvectors.cols() != n)
    throw DomainError("choose_sigmas: spectrum must carry eigenvectors");

  double pos = 0.0, neg = 0.0;
  Index l = 0;
  for (Index i = 0; i < n; ++i) {
    const double lam = q.eigenvalues(i);
    if (lam >= 0.0) {
      pos += lam;
      ++l;
    } else {
      neg += lam;
    }
  }
  if (!(q.eigenvalues.maxCoeff() > 0.0))
    throw AssumptionError("A3'", "choose_sigmas: Q has no positive eigenvalue, no scaling makes tr Q' > 0");

  ScalingSpec s;
  s.sigma_lo = 1.0;
  const double ratio = (target_trace - neg) / pos;
  s.sigma_hi = ratio > 1.0 ? std::sqrt(ratio) : 1.0;
  s.split_index = l;
  s.V = q.eigenvectors;
  s.pattern.resize(n);
  // Eigenvalues are sorted in decreasing order, so the first l are >= 0.
  for (Index i = 0; i < n; ++i) s.pattern(i) = q.eigenvalues(i) >= 0.0 ? s.sigma_hi : s.sigma_lo;
  // Equal sigmas make U a multiple of the identity; keep it exact.
  s.U = s.sigma_hi == s.sigma_lo ? Matrix(s.sigma_hi * Matrix::Identity(n, n))
                                 : symmetrized(s.V * s.pattern.asDiagonal() * s.V.transpose());
  s.cond_U = s.sigma_hi / s.sigma_lo;
  s.target_trace = s.sigma_hi * s.sigma_hi * pos + s.sigma_lo * s.sigma_lo * neg;
  return s;
}

QpProblem build_scaled_problem(const QpProblem& p_t, const ScalingSpec& spec) {
  p_t.validate();
  if (spec.n() != p_t.n()) throw DimensionError("build_scaled_problem: U size != n");
  QpProblem out;
  out.Q = symmetrized(spec.U.transpose() * p_t.Q * spec.U);
  out.c = spec.U.transpose() * p_t.c;
  out.A = p_t.m() ? Matrix(p_t.A * spec.U) : Matrix(0, p_t.n());
  out.b = p_t.b;
  out.E = p_t.p() ? Matrix(p_t.E * spec.U) : Matrix(0, p_t.n());
  out.f = p_t.f;
  out.row_normalized = spec.cond_U == 1.0 && p_t.row_normalized;
  return out;
}

Vector unscale(const ScalingSpec& spec, const Vector& z) {
  if (z.size() != spec.n()) throw DimensionError("unscale: |z| != n");
  return spec.U * z;
}

Vector scale_inverse(const ScalingSpec& spec, const Vector& y) {
  if (y.size() != spec.n()) throw DimensionError("scale_inverse: |y| != n");
  return spec.V * (spec.pattern.cwiseInverse().asDiagonal() * (spec.V.transpose() * y));
}

}  // namespace rpqp
