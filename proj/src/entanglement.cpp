#include "xxchain/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace xxchain {

namespace {

constexpr double kEigenvalueDust = 1e-12;
constexpr double kNegativeLimit = -1e-8;

Eigen::Matrix4cd spin_flip() {
  // sigma_y (x) sigma_y
  Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  return f;
}

}  // namespace

PairState reduce_to_end_pair(const DensityMatrix& rho, const SpinEigenSystem& sys) {
  const ComplexMatrix comp = to_basis(rho, Basis::Computational, sys).rho;
  if (comp.rows() == 4) return {comp};
  if (comp.rows() != 8) throw DimensionError("reduce_to_end_pair: expected a 2- or 3-spin state");
  constexpr int dims[] = {2, 2, 2};
  constexpr int keep[] = {0, 2};
  return {partial_trace(comp, dims, keep)};
}

PairState reduce_to_end_pair(const DensityMatrix& rho, const ChainSpec& spec) {
  if (rho.rho.rows() != spec.dimension()) throw DimensionError("reduce_to_end_pair: state does not match the chain");
  if (rho.basis == Basis::Computational) {
    return reduce_to_end_pair(rho, SpinEigenSystem{ComplexMatrix::Identity(spec.dimension(), spec.dimension()),
                                                   RealVector::Zero(spec.dimension())});
  }
  return reduce_to_end_pair(rho, eigen_system(spec));
}

double concurrence(const PairState& pair) {
  const Eigen::Matrix4cd flip = spin_flip();
  const Eigen::Matrix4cd tilde = flip * pair.rho.conjugate() * flip;
  const ComplexVector mu = eig_general(pair.rho * tilde).values;

  std::array<double, 4> roots{};
  for (int k = 0; k < 4; ++k) {
    const double re = mu(k).real();
    if (re < kNegativeLimit) {
      throw VerificationError("concurrence: spin-flipped product has eigenvalue " + std::to_string(re));
    }
    roots[static_cast<std::size_t>(k)] = std::abs(mu(k)) < kEigenvalueDust ? 0.0 : std::sqrt(std::max(re, 0.0));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

}  // namespace xxchain
