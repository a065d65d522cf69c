#include "xxchain/state.hpp"

#include <cmath>
#include <sstream>

namespace xxchain {

DensityMatrix to_basis(const DensityMatrix& state, Basis target, const SpinEigenSystem& sys) {
  if (state.rho.rows() != sys.vectors.rows()) throw DimensionError("to_basis: state and eigen-system dimensions differ");
  if (state.basis == target) return state;
  if (target == Basis::Eigen) return {sys.to_eigenbasis(state.rho), Basis::Eigen};
  return {sys.to_computational(state.rho), Basis::Computational};
}

DensityMatrix pure_state(const ComplexVector& amplitudes, Basis basis) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ParameterError("pure_state: zero amplitude vector");
  const ComplexVector psi = amplitudes / norm;
  return {psi * psi.adjoint(), basis};
}

ComplexVector w_state(int spins) {
  const int dim = 1 << spins;
  ComplexVector psi = ComplexVector::Zero(dim);
  for (int s = 0; s < spins; ++s) psi(1 << s) = 1.0;
  return psi / std::sqrt(static_cast<double>(spins));
}

ComplexVector all_up_state(int spins) {
  const int dim = 1 << spins;
  ComplexVector psi = ComplexVector::Zero(dim);
  psi(dim - 1) = 1.0;
  return psi;
}

StateCheck check_state(const ComplexMatrix& rho) {
  require_square(rho, "check_state");
  StateCheck c;
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  c.hermiticity_defect = max_abs(rho - rho.adjoint());
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  c.min_eigenvalue = eig_hermitian(herm).values.minCoeff();
  return c;
}

void require_valid_state(const ComplexMatrix& rho, const std::string& context) {
  const StateCheck c = check_state(rho);
  if (!c.passes()) {
    std::ostringstream os;
    os << context << ": invalid state (trace error " << c.trace_error << ", hermiticity defect "
       << c.hermiticity_defect << ", min eigenvalue " << c.min_eigenvalue << ")";
    throw VerificationError(os.str());
  }
}

}  // namespace xxchain
