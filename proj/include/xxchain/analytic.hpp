// analytic.hpp: closed-form solution of the three-spin master equation in the H_S eigenbasis.
//
// The 8 populations evolve as R J(t) R^-1. The 28 coherences split into four
// independently decaying scalars, six coupled pairs (closed-form 2x2
// exponentials) and three coupled quadruples (numeric 4x4 exponentials).
// Element indices below are 0-based; (i, j) names rho_ij in the eigenbasis.

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "xxchain/model.hpp"
#include "xxchain/state.hpp"

namespace xxchain {

using Element = std::pair<int, int>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;
using Vector8d = Eigen::Matrix<double, 8, 1>;

// d/dt rho_ij = rate * rho_ij.
struct ScalarMode {
  Element element;
  Complex rate;
};

// Generator delta + diag(-alpha, -beta) + sign * [[0, beta], [alpha, 0]].
struct PairBlock {
  std::array<Element, 2> elements;
  Complex delta;
  double alpha = 0.0;
  double beta = 0.0;
  int sign = 1;

  Eigen::Matrix2cd generator() const;
};

struct QuadBlock {
  std::array<Element, 4> elements;
  Eigen::Matrix4cd generator;
};

struct AnalyticPropagator {
  ChainSpec spec;
  RateSet rates;
  SpinEigenSystem eigen;
  Matrix8d r;
  Matrix8d r_inv;
  Vector8d decay_exponents;  // J(t) = diag(exp(-decay_exponents * t))
  std::array<ScalarMode, 4> group1;
  std::array<PairBlock, 6> group2;
  std::array<QuadBlock, 3> group3;

  // The population generator R diag(-exponents) R^-1.
  Matrix8d population_generator() const;
};

// Throws ParameterError unless every rate entering R is positive and finite
// (finite temperature on both baths at all three frequencies).
AnalyticPropagator build_propagator(const RateSet& rates, const ChainSpec& spec);

// exp(t * (delta + diag(-alpha, -beta) + sign * [[0, beta], [alpha, 0]])) in closed form.
Eigen::Matrix2cd expm2_closed(Complex delta, double alpha, double beta, int sign, double t);

// State at time t (physical units) from rho0 in either basis; the result is in the eigenbasis.
DensityMatrix propagate(const AnalyticPropagator& prop, const DensityMatrix& rho0, double t);

// Diagonal stationary state in the eigenbasis.
DensityMatrix steady_state(const RateSet& rates);

// Closed-form evolution of |W3><W3| (eigenbasis).
DensityMatrix w3_closed_form(const RateSet& rates, const ChainSpec& spec, double t);

// Real parts of the four eigenvalues of the first quadruple generator,
// -A/2 + (-B - C +/- |B_G +/- C_H|) / 4, ascending.
std::array<double, 4> first_quad_real_parts(const RateSet& rates);

struct BlockCertificate {
  std::string name;
  double max_real = 0.0;
  double closed_form = std::numeric_limits<double>::quiet_NaN();  // only for the first quadruple
};

// Max Re(lambda) of every coherence generator. Throws VerificationError if any is >= 0.
std::vector<BlockCertificate> spectral_certificate(const AnalyticPropagator& prop);

}  // namespace xxchain
