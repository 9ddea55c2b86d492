#pragma once

#include <cstdint>

#include "rpqp/model.hpp"
#include "rpqp/pipeline.hpp"
#include "rpqp/projection.hpp"
#include "rpqp/types.hpp"

namespace rpqp {

/// Random non-convex QP: diagonal Q with N(mu, 1) entries scaled to unit
/// Frobenius norm, c = 1/sqrt(n), m' random unit rows with b = 1, and the
/// box -1 <= x <= 1 as 2n unit rows.
struct RandomQpConfig {
  Index n = 60;
  Index m_prime = 200;
  double mu = 0.0;
  std::uint64_t seed = 0;
};

struct RandomQpInstance {
  QpProblem problem;
  BallInfo ball;  // certified ball around the origin
};

RandomQpInstance gen_random_qp(const RandomQpConfig& cfg);

/// Kernel SVM data. K is the training kernel (n x n), K_test holds the
/// kernel values K(test_j, train_i) row by row.
struct SvmInstance {
  Matrix K;
  Vector y;
  Matrix K_test;
  Vector y_test;
  double C = 1.0;
  Matrix features;       // training points, one per row
  Matrix test_features;  // test points, one per row

  Index n() const { return K.rows(); }
};

struct SvmConfig {
  Index n = 200;       // training points (even)
  Index n_test = 200;  // test points (even)
  Index dim = 10;
  double separation = 4.0;
  double gamma = 1.0;  // weight of the subtracted polynomial kernel
  double poly_scale = 0.1;
  double C = 1.0;
  std::uint64_t seed = 0;
};

/// Two Gaussian clusters in R^dim whose means differ by `separation` along
/// the first axis; labels alternate +1, -1. Kernel
///   K(x, x') = exp(-|x - x'|^2 / (2 dim)) - gamma poly_scale (x'x' / dim)^2,
/// a difference of two PSD kernels, indefinite for large enough gamma.
SvmInstance gen_synthetic_svm(const SvmConfig& cfg);

/// min a'YKYa - 2 sum(a)  s.t.  0 <= a <= C,  y'a = 0.
/// Rows of A: a_i <= C for every i, then -a_i <= 0 for every i.
QpProblem svm_problem(const SvmInstance& inst);

/// Sketched and convexified SVM dual in u with a = P'u.
ProjectedProblem svm_crp_problem(const SvmInstance& inst, const ProjectionMatrix& P);

/// SVM dual with the Hessian replaced by F+(YKY), in the original variables.
QpProblem svm_convexified_problem(const SvmInstance& inst);

/// Bias from the margin condition: mean of y_i - sum_k a_k y_k K_ki over
/// tau < a_i < C - tau (tau = 1e-6 C); median over all i when that set is empty.
double svm_bias(const SvmInstance& inst, const Vector& alpha);

struct SvmPrediction {
  Vector labels;
  double accuracy = 0.0;
};

/// Predict sign(sum_i a_i y_i K(x_i, x) + bias) for each row of kernel_rows
/// (one row per point, one column per training point); ties go to +1.
SvmPrediction svm_predict(const SvmInstance& inst, const Vector& alpha, const Matrix& kernel_rows,
                          const Vector& labels);

inline SvmPrediction svm_train_predict(const SvmInstance& inst, const Vector& alpha) {
  return svm_predict(inst, alpha, inst.K, inst.y);
}
inline SvmPrediction svm_test_predict(const SvmInstance& inst, const Vector& alpha) {
  return svm_predict(inst, alpha, inst.K_test, inst.y_test);
}

}  // namespace rpqp
