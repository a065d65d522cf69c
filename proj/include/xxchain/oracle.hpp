// oracle.hpp: brute-force Liouvillian route, independent of the closed-form solution.
//
// Works for n = 2 and n = 3 through the generic eigenoperator construction:
// numeric diagonalization of H_S, Bohr-frequency grouping, dense 4^n x 4^n
// superoperator. Vectorization stacks columns: vec(A X B) = (B^T (x) A) vec(X).

#pragma once

#include <span>
#include <vector>

#include "xxchain/model.hpp"
#include "xxchain/state.hpp"

namespace xxchain {

struct Liouvillian {
  ComplexMatrix matrix;       // d vec(rho)/dt = matrix * vec(rho), computational basis
  ComplexMatrix hamiltonian;  // computational basis

  Eigen::Index system_dimension() const { return hamiltonian.rows(); }
};

// L = -i (I (x) H - H^T (x) I) + sum_k rate_k (conj(V_k) (x) V_k - 1/2 I (x) V_k^dag V_k - 1/2 (V_k^dag V_k)^T (x) I).
// Jump operators must be given in the computational basis.
Liouvillian build_liouvillian(const ComplexMatrix& hamiltonian, const std::vector<DissipatorTerm>& terms);

// Full model from specs, built through generic_transition_operators on a numeric eigen-system.
Liouvillian build_liouvillian(const ChainSpec& spec, const BathSpec& baths);

// unvec(expm(L t) vec(rho0)); rho0 must be in the computational basis. Throws
// VerificationError if trace or Hermiticity drift beyond 1e-10.
DensityMatrix propagate_numeric(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t);

// Unit-trace kernel of L (computational basis). Throws DegenerateKernelError if the kernel
// is not one-dimensional.
DensityMatrix steady_state_numeric(const Liouvillian& liouvillian);

struct AdaptiveStats {
  int accepted_steps = 0;
  int rejected_steps = 0;
};

// Dormand-Prince 5(4) integration. The embedded error estimate of each step, divided by
// the step length, must stay below `rtol` (absolute floor rtol as well), which makes the
// global error shrink faster than the tolerance. Steps are clipped to land on every sample time. rtol must lie in
// [1e-12, 1e-6]; throws NumericalError on step-size underflow.
StateTrajectory rk_adaptive(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                            std::span<const double> sample_times, double rtol, AdaptiveStats* stats = nullptr);

}  // namespace xxchain
