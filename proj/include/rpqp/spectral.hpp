#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rpqp/types.hpp"

namespace rpqp {

/// Eigendecomposition of a symmetric matrix plus the scalars the error
/// bounds are written in.
struct SpectralSummary {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // column j pairs with eigenvalues(j)
  double trace = 0.0;
  double op_norm = 0.0;
  double frob_norm = 0.0;
  double lambda_min = 0.0;
  double stable_rank = 0.0;     // |M|_F^2 / |M|^2, 0 for M = 0
  double effective_rank = 0.0;  // tr M / |M|, 0 for M = 0

  Matrix reconstruct() const;
  /// Number of eigenvalues with |lambda| > tol * max(1, op_norm).
  Index numerical_rank(double tol = 1e-10) const;
};

struct EigenSettings {
  int max_sweeps = 100;
  /// Stop once the off-diagonal Frobenius norm drops below rel_tol * |M|_F.
  double rel_tol = 1e-12;
};

/// Throws AsymmetryError if max|M - M'| > rel_tol * max(1, max|M|).
void require_symmetric(const Matrix& M, double rel_tol, const char* context);

/// Cyclic Jacobi eigendecomposition. Throws ConvergenceError after
/// `max_sweeps` sweeps without meeting the off-diagonal tolerance.
SpectralSummary sym_eig(const Matrix& M, const EigenSettings& settings = {});

/// Scalars only, from a known spectrum (no eigenvectors).
SpectralSummary summarize_spectrum(const Vector& eigenvalues);

/// Nearest PSD matrix in Frobenius norm: V diag(max(lambda, 0)) V'.
Matrix psd_projection(const Matrix& M);
Matrix psd_projection(const SpectralSummary& eig);

/// |min(0, lambda_min(M))|, which equals |M - F+(M)| in operator norm.
double negative_part_norm(const Matrix& M);

/// For each seed: |P Q P' - (tr Q / d) I_d| in operator norm with
/// P = sample_projection(n, d, seed).
std::vector<double> concentration_deviation(const Matrix& Q, Index d,
                                            std::span<const std::uint64_t> seeds);

/// (M + M') / 2
inline Matrix symmetrized(const Matrix& M) { return 0.5 * (M + M.transpose()); }

}  // namespace rpqp
