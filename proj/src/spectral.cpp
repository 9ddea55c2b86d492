#include "rpqp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Jacobi>

#include "rpqp/errors.hpp"
#include "rpqp/projection.hpp"

namespace rpqp {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += a(i, j) * a(i, j);
  return std::sqrt(sum);
}

void fill_scalars(SpectralSummary& s) {
  const Vector& lam = s.eigenvalues;
  s.trace = lam.sum();
  s.op_norm = lam.size() ? lam.cwiseAbs().maxCoeff() : 0.0;
  s.frob_norm = lam.norm();
  s.lambda_min = lam.size() ? lam.minCoeff() : 0.0;
  if (s.op_norm > 0.0) {
    s.stable_rank = (s.frob_norm * s.frob_norm) / (s.op_norm * s.op_norm);
    s.effective_rank = s.trace / s.op_norm;
  } else {
    s.stable_rank = 0.0;
    s.effective_rank = 0.0;
  }
}

}  // namespace

Matrix SpectralSummary::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

Index SpectralSummary::numerical_rank(double tol) const {
  const double cut = tol * std::max(1.0, op_norm);
  return static_cast<Index>((eigenvalues.array().abs() > cut).count());
}

void require_symmetric(const Matrix& M, double rel_tol, const char* context) {
  if (M.rows() != M.cols())
    throw DimensionError(std::string(context) + ": matrix is not square");
  if (M.size() == 0) return;
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if (!(asym <= rel_tol * scale))
    throw AsymmetryError(std::string(context) + ": matrix is not symmetric (max|M-M'| = " +
                         std::to_string(asym) + ")");
}

SpectralSummary sym_eig(const Matrix& M, const EigenSettings& settings) {
  require_symmetric(M, 1e-12, "sym_eig");
  const Index n = M.rows();
  if (n < 1) throw DimensionError("sym_eig: empty matrix");

  Matrix a = symmetrized(M);
  Matrix v = Matrix::Identity(n, n);
  const double target = settings.rel_tol * a.norm();

  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (sweep++ >= settings.max_sweeps)
      throw ConvergenceError("sym_eig: Jacobi did not converge in " +
                             std::to_string(settings.max_sweeps) + " sweeps");
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        v.applyOnTheRight(p, q, rot);
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) > a(j, j); });

  SpectralSummary s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    s.eigenvalues(k) = a(src, src);
    s.eigenvectors.col(k) = v.col(src);
  }
  fill_scalars(s);
  return s;
}

SpectralSummary summarize_spectrum(const Vector& eigenvalues) {
  SpectralSummary s;
  s.eigenvalues = eigenvalues;
  std::sort(s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size(),
            std::greater<>());
  fill_scalars(s);
  return s;
}

Matrix psd_projection(const SpectralSummary& eig) {
  const Vector clipped = eig.eigenvalues.cwiseMax(0.0);
  return symmetrized(eig.eigenvectors * clipped.asDiagonal() * eig.eigenvectors.transpose());
}

Matrix psd_projection(const Matrix& M) { return psd_projection(sym_eig(M)); }

double negative_part_norm(const Matrix& M) {
  return std::abs(std::min(0.0, sym_eig(M).lambda_min));
}

std::vector<double> concentration_deviation(const Matrix& Q, Index d,
                                            std::span<const std::uint64_t> seeds) {
  require_symmetric(Q, 1e-12, "concentration_deviation");
  const Index n = Q.rows();
  const double center = Q.trace() / static_cast<double>(d);
  std::vector<double> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    const ProjectionMatrix P = ProjectionMatrix::sample(n, d, seed);
    Matrix dev = symmetrized(P.matrix() * Q * P.matrix().transpose());
    dev.diagonal().array() -= center;
    out.push_back(sym_eig(dev).op_norm);
  }
  return out;
}

}  // namespace rpqp
