#include "xxchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xxchain {

namespace {

constexpr double kDriftTolerance = 1e-10;

void require_computational(const DensityMatrix& rho, const Liouvillian& l) {
  if (rho.basis != Basis::Computational) throw ParameterError("oracle routines expect computational-basis states");
  if (rho.rho.rows() != l.system_dimension() || rho.rho.cols() != l.system_dimension()) {
    throw DimensionError("state dimension does not match the Liouvillian");
  }
}

void check_drift(const ComplexMatrix& rho, const char* what) {
  const double trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  const double herm = max_abs(rho - rho.adjoint());
  if (trace_error > kDriftTolerance || herm > kDriftTolerance) {
    std::ostringstream os;
    os << what << ": trace error " << trace_error << ", hermiticity defect " << herm;
    throw VerificationError(os.str());
  }
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Liouvillian build_liouvillian(const ComplexMatrix& hamiltonian, const std::vector<DissipatorTerm>& terms) {
  require_square(hamiltonian, "build_liouvillian");
  const Eigen::Index d = hamiltonian.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix l = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& term : terms) {
    if (term.jump.rows() != d || term.jump.cols() != d) throw DimensionError("jump operator dimension mismatch");
    if (term.rate == 0.0) continue;
    const ComplexMatrix vdv = term.jump.adjoint() * term.jump;
    l += term.rate * (kron(term.jump.conjugate(), term.jump) - 0.5 * kron(id, vdv) - 0.5 * kron(vdv.transpose(), id));
  }
  return {l, hamiltonian};
}

Liouvillian build_liouvillian(const ChainSpec& spec, const BathSpec& baths) {
  validate(spec);
  validate(baths);
  const ComplexMatrix h = build_hamiltonian(spec);
  const auto eig = eig_hermitian(h);
  const SpinEigenSystem sys{eig.vectors, eig.values};
  auto terms = build_dissipator_terms(generic_transition_operators(spec, sys), baths);
  for (auto& term : terms) term.jump = sys.to_computational(term.jump);
  return build_liouvillian(h, terms);
}

DensityMatrix propagate_numeric(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t) {
  require_computational(rho0, liouvillian);
  if (!(t >= 0.0)) throw ParameterError("propagate_numeric: time must be non-negative");
  if (t == 0.0) return rho0;
  const ComplexVector v = expm(liouvillian.matrix, t) * vec(rho0.rho);
  DensityMatrix out{unvec(v, liouvillian.system_dimension()), Basis::Computational};
  check_drift(out.rho, "propagate_numeric");
  return out;
}

DensityMatrix steady_state_numeric(const Liouvillian& liouvillian) {
  const ComplexVector kernel = null_vector(liouvillian.matrix);
  ComplexMatrix rho = unvec(kernel, liouvillian.system_dimension());
  const Complex trace = rho.trace();
  if (std::abs(trace) < 1e-12) throw NumericalError("steady_state_numeric: kernel vector has zero trace");
  rho /= trace;
  check_drift(rho, "steady_state_numeric");
  return {rho, Basis::Computational};
}

StateTrajectory rk_adaptive(const Liouvillian& liouvillian, const DensityMatrix& rho0,
                            std::span<const double> sample_times, double rtol, AdaptiveStats* stats) {
  require_computational(rho0, liouvillian);
  if (!(rtol >= 1e-12 && rtol <= 1e-6)) throw ParameterError("rk_adaptive: rtol must lie in [1e-12, 1e-6]");
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    if (sample_times[k] < 0.0 || (k > 0 && sample_times[k] <= sample_times[k - 1])) {
      throw ParameterError("rk_adaptive: sample times must be non-negative and strictly increasing");
    }
  }

  const ComplexMatrix& l = liouvillian.matrix;
  const Eigen::Index d = liouvillian.system_dimension();
  const double atol = rtol;
  constexpr int kMaxSteps = 10'000'000;

  StateTrajectory traj;
  ComplexVector y = vec(rho0.rho);
  double t = 0.0;
  double h = 0.01 / std::max(1.0, inf_norm(l));
  AdaptiveStats local;

  ComplexVector k1 = l * y, k2, k3, k4, k5, k6, k7, y_new, err;
  for (double target : sample_times) {
    while (t < target) {
      if (local.accepted_steps + local.rejected_steps > kMaxSteps) throw NumericalError("rk_adaptive: step budget exhausted");
      const bool clipped = t + h >= target;
      const double step = clipped ? target - t : h;
      k2 = l * (y + step * (a21 * k1));
      k3 = l * (y + step * (a31 * k1 + a32 * k2));
      k4 = l * (y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = l * (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = l * (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = l * y_new;
      err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double ratio = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
        ratio = std::max(ratio, std::abs(err(i)) / scale);
      }
      ratio /= step;

      if (ratio <= 1.0) {
        t = clipped ? target : t + step;
        y = y_new;
        k1 = k7;
        ++local.accepted_steps;
      } else {
        ++local.rejected_steps;
      }
      const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      // A clipped accepted step says nothing about the free step size.
      if (!(clipped && ratio <= 1.0)) h = step * factor;
      if (h < 1e-14 * std::max(1.0, target)) throw NumericalError("rk_adaptive: step size underflow");
    }
    traj.times.push_back(target);
    traj.states.push_back({unvec(y, d), Basis::Computational});
  }
  if (stats) *stats = local;
  return traj;
}

}  // namespace xxchain
