#include "oracles/active_set_oracle.hpp"

#include <Eigen/QR>

namespace rpqp::oracle {

std::optional<ActiveSetSolution> solve_by_enumeration(const Matrix& H, const Vector& g,
                                                      const Matrix& A, const Vector& b,
                                                      double tol) {
  const Index k = H.rows();
  const Index m = A.rows();
  std::optional<ActiveSetSolution> best;
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    std::vector<Index> rows;
    for (Index i = 0; i < m; ++i)
      if (mask & (1UL << i)) rows.push_back(i);
    const Index na = static_cast<Index>(rows.size());
    if (na > k) continue;
    Matrix kkt = Matrix::Zero(k + na, k + na);
    Vector rhs(k + na);
    kkt.topLeftCorner(k, k) = 2.0 * H;
    rhs.head(k) = -g;
    for (Index r = 0; r < na; ++r) {
      kkt.block(0, k + r, k, 1) = A.row(rows[r]).transpose();
      kkt.block(k + r, 0, 1, k) = A.row(rows[r]);
      rhs(k + r) = b(rows[r]);
    }
    const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if ((kkt * sol - rhs).cwiseAbs().maxCoeff() > tol * (1.0 + rhs.cwiseAbs().maxCoeff())) continue;
    const Vector x = sol.head(k);
    if (m && (A * x - b).maxCoeff() > tol) continue;
    Vector lambda = Vector::Zero(m);
    bool dual_ok = true;
    for (Index r = 0; r < na; ++r) {
      if (sol(k + r) < -tol) dual_ok = false;
      lambda(rows[r]) = sol(k + r);
    }
    if (!dual_ok) continue;
    const double obj = x.dot(H * x) + g.dot(x);
    if (!best || obj < best->objective) best = ActiveSetSolution{x, lambda, obj};
  }
  return best;
}

}  // namespace rpqp::oracle
