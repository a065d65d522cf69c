// linalg.hpp: small dense complex linear algebra on top of Eigen.
//
// Everything here targets dimensions <= 64 (a three-spin Liouvillian). The
// templates accept any Eigen dense expression; results are plain dynamic
// matrices of the expression's scalar type.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "xxchain/errors.hpp"

namespace xxchain {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr Eigen::Index kMaxDimension = 64;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Maximum absolute row sum.
template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Largest entry magnitude.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DA::Scalar, typename DB::Scalar>::ReturnType;
  DenseMatrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = Scalar(a(i, j)) * b.template cast<Scalar>();
    }
  }
  return out;
}

// Reduced matrix on the subsystems listed in `keep` (ascending, 0-based).
// Subsystem 0 is the most significant tensor factor.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& rho,
                                                    std::span<const int> dims, std::span<const int> keep) {
  require_square(rho, "partial_trace");
  Eigen::Index total = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("partial_trace: subsystem dimension must be positive");
    total *= d;
  }
  if (total != rho.rows()) throw DimensionError("partial_trace: product of dims does not match matrix size");

  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  int previous = -1;
  for (int k : keep) {
    if (k < 0 || static_cast<std::size_t>(k) >= n || k <= previous) {
      throw DimensionError("partial_trace: keep indices must be ascending and within range");
    }
    kept[static_cast<std::size_t>(k)] = true;
    previous = k;
  }

  Eigen::Index reduced_dim = 1;
  for (std::size_t s = 0; s < n; ++s) {
    if (kept[s]) reduced_dim *= dims[s];
  }

  // Digits of a flat index, most significant subsystem first.
  auto digits = [&](Eigen::Index flat, std::vector<int>& out) {
    for (std::size_t s = n; s-- > 0;) {
      out[s] = static_cast<int>(flat % dims[s]);
      flat /= dims[s];
    }
  };

  DenseMatrix<typename Derived::Scalar> out = DenseMatrix<typename Derived::Scalar>::Zero(reduced_dim, reduced_dim);
  std::vector<int> row_digits(n), col_digits(n);
  for (Eigen::Index r = 0; r < total; ++r) {
    digits(r, row_digits);
    for (Eigen::Index c = 0; c < total; ++c) {
      digits(c, col_digits);
      bool diagonal_in_traced = true;
      Eigen::Index rr = 0, cc = 0;
      for (std::size_t s = 0; s < n; ++s) {
        if (kept[s]) {
          rr = rr * dims[s] + row_digits[s];
          cc = cc * dims[s] + col_digits[s];
        } else if (row_digits[s] != col_digits[s]) {
          diagonal_in_traced = false;
          break;
        }
      }
      if (diagonal_in_traced) out(rr, cc) += rho(r, c);
    }
  }
  return out;
}

// exp(m * t) by scaling and squaring with the degree-13 Pade approximant.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> expm(const Eigen::MatrixBase<Derived>& m, double t = 1.0) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseMatrix<Scalar>;
  require_square(m, "expm");
  const Eigen::Index n = m.rows();
  const Mat ident = Mat::Identity(n, n);
  if (t == 0.0) return ident;

  Mat a = m * Scalar(t);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1)) throw NumericalError("expm: non-finite input");

  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    a /= Scalar(std::ldexp(1.0, squarings));
  }

  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident;
  const Mat u = a * u_inner;
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Mat result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

struct EigenDecomposition {
  ComplexVector values;
  ComplexMatrix vectors;  // column k pairs with values(k)
};

struct HermitianEigenDecomposition {
  RealVector values;  // ascending
  ComplexMatrix vectors;
};

EigenDecomposition eig_general(const ComplexMatrix& m);
HermitianEigenDecomposition eig_hermitian(const ComplexMatrix& m);

// Unit-norm kernel vector. Throws DegenerateKernelError unless exactly one
// eigenvalue is numerically zero.
ComplexVector null_vector(const ComplexMatrix& m);

// Column-stacking vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows);

}  // namespace xxchain
