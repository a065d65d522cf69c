// model.hpp: the XX spin chain, its eigen-system, bath spectra and rate constants.
//
// Conventions: hbar = k_B = 1. Single-site basis |0>, |1> with sigma_z|0> = -|0>
// and sigma_+ = |1><0|. Multi-spin states are spin1 (x) spin2 (x) spin3, so the
// flat index of |s1 s2 s3> is 4*s1 + 2*s2 + s3.

#pragma once

#include <array>
#include <vector>

#include "xxchain/linalg.hpp"

namespace xxchain {

struct ChainSpec {
  int spins = 3;
  double epsilon = 1.5;  // spin energy level
  double kappa = 1.0;    // XX coupling

  int dimension() const { return 1 << spins; }
  bool operator==(const ChainSpec&) const = default;
};

// Coupling rates and inverse temperatures of the baths attached to the first and last spin.
struct BathSpec {
  double gamma_first = 0.02;
  double gamma_last = 0.02;
  double beta_first = 10.0;
  double beta_last = 10.0;

  bool operator==(const BathSpec&) const = default;
};

// Smallest Bohr frequency allowed, relative to epsilon.
inline constexpr double kMinFrequencyRatio = 1e-6;
// Absolute tolerance used to group Bohr gaps into transition channels.
inline constexpr double kBohrTolerance = 1e-9;
// Lindblad rates are twice the one-sided spectral function gamma * n(omega).
inline constexpr double kLindbladRateFactor = 2.0;

// Throws ParameterError unless n is 2 or 3, epsilon and kappa are positive and the
// lowest transition frequency (eps - sqrt2 kappa for n=3, eps - kappa for n=2) exceeds
// kMinFrequencyRatio * eps.
void validate(const ChainSpec& spec);
void validate(const BathSpec& baths);

// Frequencies of the transition channels in channel order. For n=3 this is
// {eps, eps - sqrt2 kappa, eps + sqrt2 kappa}; for n=2, {eps - kappa, eps + kappa}.
std::vector<double> transition_frequencies(const ChainSpec& spec);

ComplexMatrix sigma_plus();
ComplexMatrix sigma_minus();
ComplexMatrix sigma_z();
// `op` acting on spin `site` (0-based) of an n-spin chain.
ComplexMatrix site_operator(const ComplexMatrix& op, int site, int spins);

ComplexMatrix build_hamiltonian(const ChainSpec& spec);

struct SpinEigenSystem {
  ComplexMatrix vectors;  // columns |lambda_i> in the computational basis
  RealVector values;

  ComplexMatrix to_eigenbasis(const ComplexMatrix& op) const { return vectors.adjoint() * op * vectors; }
  ComplexMatrix to_computational(const ComplexMatrix& op) const { return vectors * op * vectors.adjoint(); }
};

// n=3: the closed-form eigenvectors in the fixed index order
// |000>, (|001>-|100>)/sqrt2, (|011>-|110>)/sqrt2, |111>, then the four
// sqrt2-weighted single/double-excitation states. n=2: numeric diagonalization,
// eigenvalues ascending.
SpinEigenSystem eigen_system(const ChainSpec& spec);

struct TransitionChannel {
  double omega = 0.0;
  ComplexMatrix op;  // in the eigenbasis of the SpinEigenSystem it was built against
};

struct TransitionSet {
  std::vector<TransitionChannel> first;  // bath on spin 1
  std::vector<TransitionChannel> last;   // bath on spin n
};

// n=3: the six closed-form operators V_{j,mu}, channels ordered (omega1, omega2, omega3).
// Other n: forwards to generic_transition_operators.
TransitionSet transition_operators(const ChainSpec& spec, const SpinEigenSystem& sys);

// V_{j,mu} = sum over (a,b) with lambda_b - lambda_a = omega_mu of <a|sigma_j^-|b> |a><b|,
// channels ordered by ascending omega. Throws NumericalError if two distinct Bohr gaps
// fall between tolerance and 1000 * tolerance of each other.
TransitionSet generic_transition_operators(const ChainSpec& spec, const SpinEigenSystem& sys,
                                           double tolerance = kBohrTolerance);

// 1 / (exp(beta omega) - 1). Throws ParameterError for beta <= 0 or omega <= omega_min.
double bose_occupation(double beta, double omega, double omega_min = 0.0);

// Emission (+) and absorption (-) sums over both baths at omega1..omega3, and the
// first-minus-last differences F, G, H.
struct RateSet {
  double a_plus = 0, a_minus = 0, b_plus = 0, b_minus = 0, c_plus = 0, c_minus = 0;
  double f_plus = 0, f_minus = 0, g_plus = 0, g_minus = 0, h_plus = 0, h_minus = 0;

  double a() const { return a_plus + a_minus; }
  double b() const { return b_plus + b_minus; }
  double c() const { return c_plus + c_minus; }
  // sqrt((B+ - B-)^2 + 4 G+ G-) and its C/H analogue.
  double b_g() const;
  double c_h() const;
};

// Requires n=3.
RateSet compute_rates(const ChainSpec& spec, const BathSpec& baths);

struct DissipatorTerm {
  ComplexMatrix jump;  // same basis as the TransitionSet
  double rate = 0.0;
};

// Emission (V, 2 gamma_j (n_j + 1)) and absorption (V^dagger, 2 gamma_j n_j) for every bath and channel.
std::vector<DissipatorTerm> build_dissipator_terms(const TransitionSet& ts, const BathSpec& baths);

}  // namespace xxchain
