// entanglement.hpp: end-pair reduction and Wootters concurrence.

#pragma once

#include "xxchain/model.hpp"
#include "xxchain/state.hpp"

namespace xxchain {

// Two-qubit state of spins 1 and n, computational basis |s1 sn>.
struct PairState {
  Eigen::Matrix4cd rho;
};

// Rotates eigenbasis states to the computational basis (with the chain's eigen-system)
// and traces out the interior spin. For n=2 the state is returned unchanged.
PairState reduce_to_end_pair(const DensityMatrix& rho, const ChainSpec& spec);
// Same, with a caller-supplied eigen-system for the rotation.
PairState reduce_to_end_pair(const DensityMatrix& rho, const SpinEigenSystem& sys);

// max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)) with mu the eigenvalues of
// rho (sy (x) sy) rho* (sy (x) sy), descending. Eigenvalues with magnitude below 1e-12
// are treated as zero; a real part below -1e-8 throws VerificationError.
double concurrence(const PairState& pair);

}  // namespace xxchain
