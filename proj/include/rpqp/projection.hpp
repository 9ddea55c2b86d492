#pragma once

#include <cstdint>
#include <span>

#include "rpqp/types.hpp"

namespace rpqp {

/// Dense d x n Gaussian sketch with i.i.d. N(0, 1/d) entries.
///
/// Entries are generated row by row (row 0 left to right, then row 1, ...)
/// from `Rng(seed)`, so the same (n, d, seed) always yields the same matrix.
/// Immutable once built.
class ProjectionMatrix {
 public:
  static ProjectionMatrix sample(Index n, Index d, std::uint64_t seed);

  /// Wraps an explicit matrix (identity, orthogonal, ...). Used for
  /// exact change-of-variable checks and for user-supplied sketches.
  static ProjectionMatrix from_matrix(Matrix entries, std::uint64_t seed = 0);

  Index reduced_dim() const { return entries_.rows(); }
  Index original_dim() const { return entries_.cols(); }
  std::uint64_t seed() const { return seed_; }
  const Matrix& matrix() const { return entries_; }

  /// P x
  Vector apply(const Vector& x) const;
  /// P^T u
  Vector lift(const Vector& u) const;

 private:
  ProjectionMatrix(Matrix entries, std::uint64_t seed)
      : entries_(std::move(entries)), seed_(seed) {}

  Matrix entries_;
  std::uint64_t seed_ = 0;
};

inline ProjectionMatrix sample_projection(Index n, Index d, std::uint64_t seed) {
  return ProjectionMatrix::sample(n, d, seed);
}

/// Fraction of xs with (1-eps)|x|^2 <= |Px|^2 <= (1+eps)|x|^2.
double jl_norm_check(const ProjectionMatrix& P, std::span<const Vector> xs, double eps);

/// Fraction of xs with |x'Qx - x'P'PQP'Px| <= 3 eps |x|^2 |Q|_F.
double quadratic_form_check(const ProjectionMatrix& P, const Matrix& Q,
                            std::span<const Vector> xs, double eps);

/// max_i |A_i P'P x - A_i x|, the linear-constraint drift of one vector.
double linear_constraint_drift(const ProjectionMatrix& P, const Matrix& A, const Vector& x);

}  // namespace rpqp
