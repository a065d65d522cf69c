#include "xxchain/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace xxchain {

namespace {

void require_small(const ComplexMatrix& m, const char* what) {
  require_square(m, what);
  if (m.rows() > kMaxDimension) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(m.rows()) + " exceeds 64");
  }
}

constexpr double kKernelResidual = 1e-10;
constexpr double kKernelSeparation = 1e-8;

}  // namespace

EigenDecomposition eig_general(const ComplexMatrix& m) {
  require_small(m, "eig_general");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_general: QR iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianEigenDecomposition eig_hermitian(const ComplexMatrix& m) {
  require_small(m, "eig_hermitian");
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: iteration did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexVector null_vector(const ComplexMatrix& m) {
  require_small(m, "null_vector");
  const double norm = inf_norm(m);
  if (m.rows() == 0) throw DegenerateKernelError("null_vector: empty matrix");
  if (norm == 0.0) {
    if (m.rows() == 1) return ComplexVector::Ones(1);
    throw DegenerateKernelError("null_vector: zero matrix has a multi-dimensional kernel");
  }

  const EigenDecomposition eig = eig_general(m);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(eig.values.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return std::abs(eig.values(a)) < std::abs(eig.values(b)); });

  if (order.size() > 1 && std::abs(eig.values(order[1])) <= kKernelSeparation * norm) {
    throw DegenerateKernelError("null_vector: kernel is more than one-dimensional (second eigenvalue modulus " +
                                std::to_string(std::abs(eig.values(order[1]))) + ")");
  }

  ComplexVector v = eig.vectors.col(order[0]);
  v.normalize();
  const double residual = max_abs(m * v);
  if (residual > kKernelResidual * norm) {
    throw DegenerateKernelError("null_vector: no kernel (smallest eigenvalue modulus " +
                                std::to_string(std::abs(eig.values(order[0]))) + ")");
  }
  return v;
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows) {
  if (rows <= 0 || v.size() % rows != 0) throw DimensionError("unvec: length is not a multiple of rows");
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, v.size() / rows);
}

}  // namespace xxchain
