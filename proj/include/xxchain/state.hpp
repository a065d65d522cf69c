// state.hpp: density matrices tagged with their basis, named initial states and validity gates.

#pragma once

#include <string>
#include <vector>

#include "xxchain/linalg.hpp"
#include "xxchain/model.hpp"

namespace xxchain {

enum class Basis { Computational, Eigen };

struct DensityMatrix {
  ComplexMatrix rho;
  Basis basis = Basis::Computational;

  Eigen::Index dimension() const { return rho.rows(); }
};

struct StateTrajectory {
  std::vector<double> times;  // dimensionless kappa * t
  std::vector<DensityMatrix> states;
};

// Rotate between the computational basis and the eigenbasis of `sys`.
DensityMatrix to_basis(const DensityMatrix& state, Basis target, const SpinEigenSystem& sys);

DensityMatrix pure_state(const ComplexVector& amplitudes, Basis basis = Basis::Computational);

// (|100> + |010> + |001>) / sqrt3 for n=3; (|01> + |10>) / sqrt2 for n=2.
ComplexVector w_state(int spins);
// All spins in |1>.
ComplexVector all_up_state(int spins);

struct StateCheck {
  double trace_error = 0.0;         // |tr(rho) - 1|
  double hermiticity_defect = 0.0;  // max |rho - rho^dagger|
  double min_eigenvalue = 0.0;      // of the Hermitian part

  bool passes(double trace_tol = 1e-10, double hermiticity_tol = 1e-10, double positivity_tol = 1e-8) const {
    return trace_error <= trace_tol && hermiticity_defect <= hermiticity_tol && min_eigenvalue >= -positivity_tol;
  }
};

StateCheck check_state(const ComplexMatrix& rho);

// Throws VerificationError with `context` if the gates fail.
void require_valid_state(const ComplexMatrix& rho, const std::string& context);

}  // namespace xxchain
