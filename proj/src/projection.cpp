#include "rpqp/projection.hpp"

#include <cmath>
#include <string>

#include "rpqp/errors.hpp"
#include "rpqp/random.hpp"
#include "rpqp/spectral.hpp"

namespace rpqp {

ProjectionMatrix ProjectionMatrix::sample(Index n, Index d, std::uint64_t seed) {
  if (d < 1 || d > n) {
    throw DimensionError("projection: need 1 <= d <= n, got d=" + std::to_string(d) +
                         " n=" + std::to_string(n));
  }
  Rng rng(seed);
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  Matrix entries(d, n);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < n; ++j) entries(i, j) = rng.normal() / sqrt_d;
  return ProjectionMatrix(std::move(entries), seed);
}

ProjectionMatrix ProjectionMatrix::from_matrix(Matrix entries, std::uint64_t seed) {
  if (entries.rows() < 1 || entries.rows() > entries.cols()) {
    throw DimensionError("projection: need 1 <= rows <= cols");
  }
  return ProjectionMatrix(std::move(entries), seed);
}

Vector ProjectionMatrix::apply(const Vector& x) const {
  if (x.size() != original_dim()) throw DimensionError("projection: |x| != n");
  return entries_ * x;
}

Vector ProjectionMatrix::lift(const Vector& u) const {
  if (u.size() != reduced_dim()) throw DimensionError("projection: |u| != d");
  return entries_.transpose() * u;
}

double jl_norm_check(const ProjectionMatrix& P, std::span<const Vector> xs, double eps) {
  if (xs.empty()) return 1.0;
  std::size_t preserved = 0;
  for (const Vector& x : xs) {
    const double nx = x.squaredNorm();
    const double npx = P.apply(x).squaredNorm();
    if ((1.0 - eps) * nx <= npx && npx <= (1.0 + eps) * nx) ++preserved;
  }
  return static_cast<double>(preserved) / static_cast<double>(xs.size());
}

double quadratic_form_check(const ProjectionMatrix& P, const Matrix& Q,
                            std::span<const Vector> xs, double eps) {
  if (Q.rows() != P.original_dim() || Q.cols() != P.original_dim())
    throw DimensionError("quadratic_form_check: Q must be n x n");
  require_symmetric(Q, 1e-12, "quadratic_form_check");
  if (xs.empty()) return 1.0;
  const double frob = Q.norm();
  std::size_t preserved = 0;
  for (const Vector& x : xs) {
    const Vector w = P.lift(P.apply(x));  // P'P x
    const double lhs = std::abs(x.dot(Q * x) - w.dot(Q * w));
    if (lhs <= 3.0 * eps * x.squaredNorm() * frob) ++preserved;
  }
  return static_cast<double>(preserved) / static_cast<double>(xs.size());
}

double linear_constraint_drift(const ProjectionMatrix& P, const Matrix& A, const Vector& x) {
  if (A.cols() != P.original_dim()) throw DimensionError("linear_constraint_drift: A cols != n");
  const Vector w = P.lift(P.apply(x));
  return (A * w - A * x).cwiseAbs().maxCoeff();
}

}  // namespace rpqp
