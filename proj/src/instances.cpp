#include "rpqp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rpqp/errors.hpp"
#include "rpqp/random.hpp"
#include "rpqp/spectral.hpp"

namespace rpqp {

RandomQpInstance gen_random_qp(const RandomQpConfig& cfg) {
  if (cfg.n < 2) throw DomainError("gen_random_qp: n must be >= 2");
  if (cfg.m_prime < 0) throw DomainError("gen_random_qp: m' must be >= 0");
  const Index n = cfg.n;
  Rng rng(cfg.seed);

  Vector diag(n);
  for (Index i = 0; i < n; ++i) diag(i) = rng.normal(cfg.mu, 1.0);
  diag /= diag.norm();

  RandomQpInstance inst;
  QpProblem& p = inst.problem;
  p.Q = diag.asDiagonal();
  p.c = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  p.A = Matrix::Zero(cfg.m_prime + 2 * n, n);
  p.b = Vector::Ones(cfg.m_prime + 2 * n);
  for (Index i = 0; i < cfg.m_prime; ++i) {
    Vector row(n);
    do {
      for (Index j = 0; j < n; ++j) row(j) = rng.normal();
    } while (row.norm() == 0.0);
    p.A.row(i) = row.normalized().transpose();
  }
  for (Index j = 0; j < n; ++j) {
    p.A(cfg.m_prime + 2 * j, j) = 1.0;
    p.A(cfg.m_prime + 2 * j + 1, j) = -1.0;
  }
  p.E = Matrix::Zero(0, n);
  p.f = Vector::Zero(0);
  p.row_normalized = true;

  // Origin ball: radius = smallest slack of a unit row at 0.
  inst.ball.center = Vector::Zero(n);
  inst.ball.radius = p.b.minCoeff();
  if (!ball_inside(p, inst.ball)) throw Error("gen_random_qp: origin ball certificate failed");
  return inst;
}

namespace {

Matrix sample_points(Rng& rng, Index count, Index dim, double separation, Vector& labels) {
  Matrix X(count, dim);
  labels.resize(count);
  for (Index i = 0; i < count; ++i) {
    labels(i) = (i % 2 == 0) ? 1.0 : -1.0;
    for (Index k = 0; k < dim; ++k) X(i, k) = rng.normal();
    X(i, 0) += 0.5 * separation * labels(i);
  }
  return X;
}

Matrix kernel(const Matrix& X, const Matrix& Z, double weight) {
  const double dim = static_cast<double>(X.cols());
  Matrix K(X.rows(), Z.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < Z.rows(); ++j) {
      const double sq = (X.row(i) - Z.row(j)).squaredNorm();
      const double ip = X.row(i).dot(Z.row(j)) / dim;
      K(i, j) = std::exp(-sq / (2.0 * dim)) - weight * ip * ip;
    }
  }
  return K;
}

}  // namespace

SvmInstance gen_synthetic_svm(const SvmConfig& cfg) {
  if (cfg.n < 2 || cfg.n % 2 != 0) throw DomainError("gen_synthetic_svm: n must be even and >= 2");
  if (cfg.n_test < 0 || cfg.n_test % 2 != 0) throw DomainError("gen_synthetic_svm: n_test must be even");
  if (cfg.dim < 1) throw DomainError("gen_synthetic_svm: dim must be >= 1");
  if (!(cfg.gamma >= 0.0) || !(cfg.poly_scale >= 0.0))
    throw DomainError("gen_synthetic_svm: gamma and poly_scale must be >= 0");
  if (!(cfg.C > 0.0)) throw DomainError("gen_synthetic_svm: C must be positive");
  Rng rng(cfg.seed);
  SvmInstance inst;
  inst.C = cfg.C;
  inst.features = sample_points(rng, cfg.n, cfg.dim, cfg.separation, inst.y);
  inst.test_features = sample_points(rng, cfg.n_test, cfg.dim, cfg.separation, inst.y_test);
  const double weight = cfg.gamma * cfg.poly_scale;
  inst.K = symmetrized(kernel(inst.features, inst.features, weight));
  inst.K_test = kernel(inst.test_features, inst.features, weight);
  return inst;
}

QpProblem svm_problem(const SvmInstance& inst) {
  const Index n = inst.n();
  if (inst.y.size() != n) throw DimensionError("svm_problem: |y| != n");
  require_symmetric(inst.K, 1e-12, "svm_problem");
  QpProblem p;
  p.Q = symmetrized(inst.y.asDiagonal() * inst.K * inst.y.asDiagonal());
  p.c = Vector::Constant(n, -2.0);
  p.A.resize(2 * n, n);
  p.A.topRows(n).setIdentity();
  p.A.bottomRows(n) = -Matrix::Identity(n, n);
  p.b.resize(2 * n);
  p.b.head(n).setConstant(inst.C);
  p.b.tail(n).setZero();
  p.E = inst.y.transpose();
  p.f = Vector::Zero(1);
  p.row_normalized = true;
  return p;
}

ProjectedProblem svm_crp_problem(const SvmInstance& inst, const ProjectionMatrix& P) {
  return build_crp(build_rp(svm_problem(inst), P));
}

QpProblem svm_convexified_problem(const SvmInstance& inst) {
  QpProblem p = svm_problem(inst);
  p.Q = symmetrized(psd_projection(p.Q));
  return p;
}

namespace {

Vector decision_values(const SvmInstance& inst, const Vector& alpha, const Matrix& kernel_rows) {
  return kernel_rows * alpha.cwiseProduct(inst.y);
}

}  // namespace

double svm_bias(const SvmInstance& inst, const Vector& alpha) {
  if (alpha.size() != inst.n()) throw DimensionError("svm_bias: |alpha| != n");
  const Vector gap = inst.y - decision_values(inst, alpha, inst.K);
  const double tau = 1e-6 * inst.C;
  double sum = 0.0;
  Index count = 0;
  for (Index i = 0; i < inst.n(); ++i) {
    if (alpha(i) > tau && alpha(i) < inst.C - tau) {
      sum += gap(i);
      ++count;
    }
  }
  if (count > 0) return sum / static_cast<double>(count);
  std::vector<double> all(gap.data(), gap.data() + gap.size());
  std::sort(all.begin(), all.end());
  const std::size_t k = all.size();
  return k % 2 ? all[k / 2] : 0.5 * (all[k / 2 - 1] + all[k / 2]);
}

SvmPrediction svm_predict(const SvmInstance& inst, const Vector& alpha, const Matrix& kernel_rows,
                          const Vector& labels) {
  if (kernel_rows.rows() == 0) throw DomainError("svm_predict: empty evaluation set");
  if (kernel_rows.cols() != inst.n() || labels.size() != kernel_rows.rows())
    throw DimensionError("svm_predict: kernel rows / labels do not match the training set");
  const double bias = svm_bias(inst, alpha);
  const Vector f = decision_values(inst, alpha, kernel_rows).array() + bias;
  SvmPrediction out;
  out.labels = f.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
  out.accuracy = static_cast<double>((out.labels.array() == labels.array()).count()) /
                 static_cast<double>(labels.size());
  return out;
}

}  // namespace rpqp
