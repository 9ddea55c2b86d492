#include "oracles/eigen_oracle.hpp"

#include <Eigen/Eigenvalues>

namespace rpqp::oracle {

Vector eigenvalues_ascending(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix psd_projection(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  const Vector clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

double operator_norm(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace rpqp::oracle
