#include "xxchain/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace xxchain {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double lowest_frequency(const ChainSpec& spec) {
  return spec.spins == 3 ? spec.epsilon - kSqrt2 * spec.kappa : spec.epsilon - spec.kappa;
}

struct KetBra {
  int ket;
  int bra;
  double weight;
};

ComplexMatrix from_ket_bras(std::initializer_list<KetBra> terms, double scale) {
  ComplexMatrix m = ComplexMatrix::Zero(8, 8);
  for (const auto& t : terms) m(t.ket, t.bra) = scale * t.weight;
  return m;
}

}  // namespace

void validate(const ChainSpec& spec) {
  if (spec.spins != 2 && spec.spins != 3) {
    throw ParameterError("chain must have 2 or 3 spins, got " + std::to_string(spec.spins));
  }
  if (!(spec.epsilon > 0.0) || !std::isfinite(spec.epsilon)) throw ParameterError("epsilon must be positive");
  if (!(spec.kappa > 0.0) || !std::isfinite(spec.kappa)) throw ParameterError("kappa must be positive");
  const double omega_low = lowest_frequency(spec);
  if (!(omega_low > kMinFrequencyRatio * spec.epsilon)) {
    throw ParameterError("lowest transition frequency " + std::to_string(omega_low) +
                         " is not positive (need epsilon > " + (spec.spins == 3 ? "sqrt(2)*" : "") + "kappa)");
  }
}

void validate(const BathSpec& baths) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(baths.gamma_first) || !positive(baths.gamma_last)) {
    throw ParameterError("bath coupling rates must be positive");
  }
  if (!positive(baths.beta_first) || !positive(baths.beta_last)) {
    throw ParameterError("inverse temperatures must be positive");
  }
}

std::vector<double> transition_frequencies(const ChainSpec& spec) {
  if (spec.spins == 3) {
    return {spec.epsilon, spec.epsilon - kSqrt2 * spec.kappa, spec.epsilon + kSqrt2 * spec.kappa};
  }
  return {spec.epsilon - spec.kappa, spec.epsilon + spec.kappa};
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix sigma_minus() { return sigma_plus().transpose(); }

ComplexMatrix sigma_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

ComplexMatrix site_operator(const ComplexMatrix& op, int site, int spins) {
  if (site < 0 || site >= spins) throw DimensionError("site index out of range");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int s = 0; s < spins; ++s) {
    out = kron(out, s == site ? op : ComplexMatrix::Identity(2, 2));
  }
  return out;
}

ComplexMatrix build_hamiltonian(const ChainSpec& spec) {
  validate(spec);
  const int n = spec.spins;
  const int dim = spec.dimension();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (int s = 0; s < n; ++s) h += 0.5 * spec.epsilon * site_operator(sigma_z(), s, n);
  for (int s = 0; s + 1 < n; ++s) {
    h += spec.kappa * (site_operator(sigma_plus(), s, n) * site_operator(sigma_minus(), s + 1, n) +
                       site_operator(sigma_minus(), s, n) * site_operator(sigma_plus(), s + 1, n));
  }
  return h;
}

SpinEigenSystem eigen_system(const ChainSpec& spec) {
  validate(spec);
  if (spec.spins != 3) {
    const auto eig = eig_hermitian(build_hamiltonian(spec));
    return {eig.vectors, eig.values};
  }

  const double e = spec.epsilon;
  const double k = spec.kappa;
  const double h = 1.0 / kSqrt2;
  SpinEigenSystem sys;
  sys.vectors = ComplexMatrix::Zero(8, 8);
  auto& v = sys.vectors;
  // Computational index of |s1 s2 s3> is 4*s1 + 2*s2 + s3.
  v(0, 0) = 1.0;
  v(1, 1) = h;
  v(4, 1) = -h;
  v(3, 2) = h;
  v(6, 2) = -h;
  v(7, 3) = 1.0;
  v(4, 4) = 0.5;
  v(2, 4) = -h;
  v(1, 4) = 0.5;
  v(6, 5) = 0.5;
  v(5, 5) = -h;
  v(3, 5) = 0.5;
  v(4, 6) = 0.5;
  v(2, 6) = h;
  v(1, 6) = 0.5;
  v(6, 7) = 0.5;
  v(5, 7) = h;
  v(3, 7) = 0.5;

  sys.values.resize(8);
  sys.values << -1.5 * e, -0.5 * e, 0.5 * e, 1.5 * e, -0.5 * e - kSqrt2 * k, 0.5 * e - kSqrt2 * k,
      -0.5 * e + kSqrt2 * k, 0.5 * e + kSqrt2 * k;
  return sys;
}

TransitionSet transition_operators(const ChainSpec& spec, const SpinEigenSystem& sys) {
  validate(spec);
  if (spec.spins != 3) return generic_transition_operators(spec, sys);

  const auto omega = transition_frequencies(spec);
  const double r = 1.0 / kSqrt2;
  TransitionSet ts;
  ts.first = {
      {omega[0], from_ket_bras({{0, 1, -1}, {2, 3, 1}, {4, 5, -1}, {6, 7, 1}}, r)},
      {omega[1], from_ket_bras({{0, 4, 1}, {1, 5, -1}, {6, 2, -1}, {7, 3, 1}}, 0.5)},
      {omega[2], from_ket_bras({{0, 6, 1}, {1, 7, 1}, {4, 2, 1}, {5, 3, 1}}, 0.5)},
  };
  ts.last = {
      {omega[0], from_ket_bras({{0, 1, 1}, {2, 3, -1}, {4, 5, -1}, {6, 7, 1}}, r)},
      {omega[1], from_ket_bras({{0, 4, 1}, {1, 5, 1}, {6, 2, 1}, {7, 3, 1}}, 0.5)},
      {omega[2], from_ket_bras({{0, 6, 1}, {1, 7, -1}, {4, 2, -1}, {5, 3, 1}}, 0.5)},
  };
  return ts;
}

TransitionSet generic_transition_operators(const ChainSpec& spec, const SpinEigenSystem& sys, double tolerance) {
  validate(spec);
  const int dim = spec.dimension();
  if (sys.vectors.rows() != dim || sys.values.size() != dim) {
    throw DimensionError("eigen-system does not match the chain dimension");
  }

  constexpr double kElementFloor = 1e-12;
  const int sites[2] = {0, spec.spins - 1};
  ComplexMatrix lowering[2];
  std::vector<double> gaps;
  for (int j = 0; j < 2; ++j) {
    lowering[j] = sys.to_eigenbasis(site_operator(sigma_minus(), sites[j], spec.spins));
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (std::abs(lowering[j](a, b)) > kElementFloor) gaps.push_back(sys.values(b) - sys.values(a));
      }
    }
  }
  std::sort(gaps.begin(), gaps.end());

  // Cluster gaps; each cluster centre is a channel frequency.
  std::vector<double> channels;
  double cluster_start = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (i == 0 || gaps[i] - gaps[i - 1] > tolerance) {
      if (i > 0 && gaps[i] - gaps[i - 1] < 1000.0 * tolerance) {
        throw NumericalError("ambiguous Bohr-frequency clustering near omega = " + std::to_string(gaps[i]));
      }
      cluster_start = gaps[i];
      channels.push_back(gaps[i]);
    } else if (gaps[i] - cluster_start > tolerance) {
      throw NumericalError("Bohr-frequency cluster wider than tolerance near omega = " + std::to_string(gaps[i]));
    }
  }
  for (double w : channels) {
    if (!(w > 0.0)) throw NumericalError("sigma_minus couples to a non-positive Bohr gap");
  }

  TransitionSet ts;
  for (int j = 0; j < 2; ++j) {
    auto& out = j == 0 ? ts.first : ts.last;
    for (double w : channels) {
      ComplexMatrix op = ComplexMatrix::Zero(dim, dim);
      for (int a = 0; a < dim; ++a) {
        for (int b = 0; b < dim; ++b) {
          if (std::abs(sys.values(b) - sys.values(a) - w) <= tolerance && std::abs(lowering[j](a, b)) > kElementFloor) {
            op(a, b) = lowering[j](a, b);
          }
        }
      }
      out.push_back({w, op});
    }
  }
  return ts;
}

double bose_occupation(double beta, double omega, double omega_min) {
  if (!(beta > 0.0)) throw ParameterError("inverse temperature must be positive");
  if (!(omega > omega_min) || !(omega > 0.0)) {
    throw ParameterError("Bose occupation diverges: omega = " + std::to_string(omega) + " is not above " +
                         std::to_string(omega_min));
  }
  return 1.0 / std::expm1(beta * omega);
}

double RateSet::b_g() const {
  return std::sqrt((b_plus - b_minus) * (b_plus - b_minus) + 4.0 * g_plus * g_minus);
}

double RateSet::c_h() const {
  return std::sqrt((c_plus - c_minus) * (c_plus - c_minus) + 4.0 * h_plus * h_minus);
}

RateSet compute_rates(const ChainSpec& spec, const BathSpec& baths) {
  validate(spec);
  validate(baths);
  if (spec.spins != 3) throw ParameterError("compute_rates: the closed-form rate set exists for n=3 only");

  const auto omega = transition_frequencies(spec);
  const double omega_min = kMinFrequencyRatio * spec.epsilon;
  // (sum+, sum-, diff+, diff-) at one frequency.
  auto at = [&](double w) {
    const double n1 = bose_occupation(baths.beta_first, w, omega_min);
    const double n3 = bose_occupation(baths.beta_last, w, omega_min);
    const double e1 = baths.gamma_first * (n1 + 1.0), e3 = baths.gamma_last * (n3 + 1.0);
    const double a1 = baths.gamma_first * n1, a3 = baths.gamma_last * n3;
    return std::tuple{e1 + e3, a1 + a3, e1 - e3, a1 - a3};
  };

  RateSet r;
  std::tie(r.a_plus, r.a_minus, r.f_plus, r.f_minus) = at(omega[0]);
  std::tie(r.b_plus, r.b_minus, r.g_plus, r.g_minus) = at(omega[1]);
  std::tie(r.c_plus, r.c_minus, r.h_plus, r.h_minus) = at(omega[2]);
  return r;
}

std::vector<DissipatorTerm> build_dissipator_terms(const TransitionSet& ts, const BathSpec& baths) {
  validate(baths);
  std::vector<DissipatorTerm> terms;
  auto add_bath = [&](const std::vector<TransitionChannel>& channels, double gamma, double beta) {
    for (const auto& ch : channels) {
      const double n = bose_occupation(beta, ch.omega);
      terms.push_back({ch.op, kLindbladRateFactor * gamma * (n + 1.0)});
      terms.push_back({ch.op.adjoint(), kLindbladRateFactor * gamma * n});
    }
  };
  add_bath(ts.first, baths.gamma_first, baths.beta_first);
  add_bath(ts.last, baths.gamma_last, baths.beta_last);
  return terms;
}

}  // namespace xxchain
