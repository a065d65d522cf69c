#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/generators.hpp"
#include "xxchain/analytic.hpp"
#include "xxchain/oracle.hpp"

using namespace xxchain;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

const ChainSpec kReference{3, 1.5, 1.0};
const BathSpec kReferenceBaths{1.0 / 50, 1.0 / 50, 10.0, 10.0};
const ChainSpec kStrong{3, 3.0, 2.0};
const BathSpec kStrongBaths{1.0 / 20, 1.0 / 20, 10.0, 15.0};

AnalyticPropagator reference_propagator() { return build_propagator(compute_rates(kReference, kReferenceBaths), kReference); }

// Population block of the Liouvillian in the eigenbasis: column i is the
// diagonal of L(|i><i|).
Matrix8d liouvillian_population_block(const ChainSpec& spec, const BathSpec& baths) {
  const Liouvillian l = build_liouvillian(spec, baths);
  const SpinEigenSystem sys = eigen_system(spec);
  Matrix8d b;
  for (int i = 0; i < 8; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(8, 8);
    e(i, i) = 1.0;
    const ComplexMatrix out = sys.to_eigenbasis(unvec(l.matrix * vec(sys.to_computational(e)), 8));
    b.col(i) = out.diagonal().real();
  }
  return b;
}

}  // namespace

TEST_CASE("propagator structure") {
  const AnalyticPropagator p = reference_propagator();
  const RateSet& q = p.rates;
  for (int m = 0; m < 8; ++m) CHECK(p.r(7, m) == 1.0);
  CHECK(p.decay_exponents(0) == 0.0);
  CHECK(p.decay_exponents(3) == doctest::Approx(q.a() + q.b() / 2));
  for (int k = 1; k < 8; ++k) CHECK(p.decay_exponents(k) > 0.0);

  const Element e14 = p.group1[0].element;
  CHECK(e14 == Element{0, 3});
  CHECK(p.group1[0].rate.real() == doctest::Approx(-(q.a() / 2 + (q.b() + q.c()) / 4)));
  CHECK(p.group1[0].rate.imag() == doctest::Approx(3 * kReference.epsilon));

  CHECK(p.group2[0].delta.real() == doctest::Approx(-q.a() / 2 - q.b() / 4));
  CHECK(p.group2[0].delta.imag() == doctest::Approx(-kSqrt2 * kReference.kappa));
  CHECK(p.group2[5].delta.real() == doctest::Approx(-(q.b() + q.c()) / 4));
  CHECK(p.group2[5].delta.imag() == doctest::Approx(2 * kSqrt2 * kReference.kappa));
}

TEST_CASE("R inverse and the population generator") {
  testing::Generator gen;
  for (int trial = 0; trial < 200; ++trial) {
    const ChainSpec spec = trial == 0 ? kReference : gen.chain();
    const BathSpec baths = trial == 0 ? kReferenceBaths : gen.baths();
    const AnalyticPropagator p = build_propagator(compute_rates(spec, baths), spec);
    // Entrywise residual relative to the magnitudes being summed.
    const Matrix8d scale = p.r.cwiseAbs() * p.r_inv.cwiseAbs();
    const Matrix8d residual = (p.r * p.r_inv - Matrix8d::Identity()).cwiseAbs();
    CHECK((residual.array() <= 1e-14 * scale.array()).all());

    const Matrix8d g = p.population_generator();
    CHECK(g.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    // Columns of R are eigenvectors of the population generator.
    for (int m = 0; m < 8; ++m) {
      const Vector8d col = p.r.col(m);
      CHECK((g * col + p.decay_exponents(m) * col).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, col.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("population generator equals the Liouvillian population block") {
  testing::Generator gen;
  for (int trial = 0; trial < 50; ++trial) {
    const ChainSpec spec = trial == 0 ? kReference : gen.chain();
    const BathSpec baths = trial == 0 ? kReferenceBaths : gen.baths();
    const AnalyticPropagator p = build_propagator(compute_rates(spec, baths), spec);
    CHECK((p.population_generator() - liouvillian_population_block(spec, baths)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("build_propagator rejects invalid rates") {
  CHECK_THROWS_AS(build_propagator(compute_rates(kReference, {0.02, 0.02, 1e4, 1e4}), kReference), ParameterError);
  CHECK_THROWS_AS(build_propagator(RateSet{}, kReference), ParameterError);
}

TEST_CASE("closed 2x2 exponential") {
  CHECK(max_abs(ComplexMatrix(expm2_closed({-0.3, 1.0}, 0.5, 0.7, 1, 0.0)) - ComplexMatrix::Identity(2, 2)) <= 1e-16);
  const Eigen::Matrix2cd limit = expm2_closed(0.0, 1.0, 1.0, 1, 60.0);
  CHECK(max_abs(ComplexMatrix(limit) - ComplexMatrix::Constant(2, 2, 0.5)) <= 1e-15);
  CHECK(max_abs(ComplexMatrix(expm2_closed({-0.1, 2.0}, 1.0, 1.0, 1, 500.0))) <= 1e-20);
  CHECK_THROWS_AS(expm2_closed(0.0, 0.0, 1.0, 1, 1.0), ParameterError);
  CHECK_THROWS_AS(expm2_closed(0.0, 1.0, -1.0, 1, 1.0), ParameterError);

  testing::Generator gen;
  for (int trial = 0; trial < 1000; ++trial) {
    const Complex delta(gen.uniform(-1, 0), gen.uniform(-5, 5));
    const double alpha = gen.uniform(1e-3, 1), beta = gen.uniform(1e-3, 1);
    const int sign = gen.integer(0, 1) ? 1 : -1;
    const double t = gen.uniform(0, 10);
    const PairBlock block{{}, delta, alpha, beta, sign};
    CHECK(max_abs(ComplexMatrix(expm2_closed(delta, alpha, beta, sign, t)) - expm(ComplexMatrix(block.generator()), t)) <=
          1e-12);
  }
}

TEST_CASE("propagate at t = 0 returns the initial state") {
  const AnalyticPropagator p = reference_propagator();
  testing::Generator gen;
  const DensityMatrix rho0 = to_basis({gen.density(8), Basis::Computational}, Basis::Eigen, p.eigen);
  const DensityMatrix out = propagate(p, rho0, 0.0);
  CHECK(out.basis == Basis::Eigen);
  CHECK(max_abs(out.rho - rho0.rho) == 0.0);
  CHECK_THROWS_AS(propagate(p, rho0, -1.0), ParameterError);
}

TEST_CASE("propagate matches the Liouvillian exponential at reference parameters") {
  const AnalyticPropagator p = reference_propagator();
  const Liouvillian l = build_liouvillian(kReference, kReferenceBaths);
  const DensityMatrix w3 = pure_state(w_state(3));
  for (double kt : {0.5, 3.0, 17.0, 60.0, 200.0}) {
    const ComplexMatrix analytic = p.eigen.to_computational(propagate(p, w3, kt).rho);
    CHECK(max_abs(analytic - propagate_numeric(l, w3, kt).rho) <= 1e-8);
  }
}

TEST_CASE("long-time limit is the steady state") {
  for (const auto& [spec, baths] : {std::pair{kReference, kReferenceBaths}, std::pair{kStrong, kStrongBaths}}) {
    const AnalyticPropagator p = build_propagator(compute_rates(spec, baths), spec);
    const double min_rate = std::min({p.rates.a(), p.rates.b() / 2, p.rates.c() / 2});
    const DensityMatrix ss = steady_state(p.rates);
    const DensityMatrix from_w3 = propagate(p, pure_state(w_state(3)), 1e5 / min_rate);
    const DensityMatrix from_up = propagate(p, pure_state(all_up_state(3)), 1e5 / min_rate);
    CHECK(max_abs(from_w3.rho - ss.rho) <= 1e-8);
    CHECK(max_abs(from_w3.rho - from_up.rho) <= 1e-8);
  }
}

TEST_CASE("steady-state closed form") {
  testing::Generator gen;
  for (int trial = 0; trial < 100; ++trial) {
    const RateSet q = compute_rates(gen.chain(), gen.baths());
    const DensityMatrix ss = steady_state(q);
    CHECK(ss.basis == Basis::Eigen);
    CHECK(std::abs(ss.rho.trace() - 1.0) <= 1e-14);
    CHECK(max_abs(ComplexMatrix(ss.rho - ComplexMatrix(ss.rho.diagonal().asDiagonal()))) == 0.0);
  }
  const DensityMatrix cold = steady_state(compute_rates(kReference, {0.02, 0.02, 1e4, 1e4}));
  ComplexMatrix ground = ComplexMatrix::Zero(8, 8);
  ground(0, 0) = 1.0;
  CHECK(max_abs(cold.rho - ground) == 0.0);
}

TEST_CASE("steady state at equal temperatures is the Gibbs state") {
  testing::Generator gen;
  for (int trial = 0; trial < 100; ++trial) {
    const ChainSpec spec = gen.chain();
    const double beta = gen.uniform(0.2, 10.0);
    const BathSpec baths{gen.uniform(0.01, 0.1), gen.uniform(0.01, 0.1), beta, beta};
    const SpinEigenSystem sys = eigen_system(spec);
    Vector8d weights = (-beta * sys.values).array().exp();
    weights /= weights.sum();
    const DensityMatrix ss = steady_state(compute_rates(spec, baths));
    CHECK((ss.rho.diagonal().real() - weights).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("W3 closed form") {
  testing::Generator gen;
  for (int trial = 0; trial < 20; ++trial) {
    const ChainSpec spec = trial == 0 ? kReference : gen.chain();
    const BathSpec baths = trial == 0 ? kReferenceBaths : gen.baths();
    const RateSet q = compute_rates(spec, baths);
    const AnalyticPropagator p = build_propagator(q, spec);
    const DensityMatrix at0 = w3_closed_form(q, spec, 0.0);
    CHECK(at0.rho(4, 6) == Complex(1.0 / 6.0));
    CHECK(at0.rho(5, 7) == Complex(0.0));
    CHECK(max_abs(at0.rho - to_basis(pure_state(w_state(3)), Basis::Eigen, p.eigen).rho) <= 1e-15);
    for (int k = 0; k < 50; ++k) {
      const double t = gen.uniform(0.0, 5.0 / std::min(q.a(), q.b()));
      const ComplexMatrix reference = propagate(p, pure_state(w_state(3)), t).rho;
      CHECK(max_abs(w3_closed_form(q, spec, t).rho - reference) <= 1e-10);
    }
  }
}

TEST_CASE("semigroup property of propagate") {
  testing::Generator gen;
  for (int trial = 0; trial < 100; ++trial) {
    const ChainSpec spec = gen.chain();
    const AnalyticPropagator p = build_propagator(compute_rates(spec, gen.baths()), spec);
    const DensityMatrix rho = pure_state(gen.pure(8));
    const double s = gen.uniform(0, 50), t = gen.uniform(0, 50);
    const ComplexMatrix two_step = propagate(p, propagate(p, rho, s), t).rho;
    CHECK(max_abs(two_step - propagate(p, rho, s + t).rho) <= 1e-9);
  }
}

TEST_CASE("positivity along trajectories from random pure states") {
  testing::Generator gen;
  for (const auto& [spec, baths] : {std::pair{kReference, kReferenceBaths}, std::pair{kStrong, kStrongBaths}}) {
    const AnalyticPropagator p = build_propagator(compute_rates(spec, baths), spec);
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix rho0 = pure_state(gen.pure(8));
      for (double kt : {0.1, 1.0, 5.0, 20.0, 80.0, 300.0}) {
        const StateCheck check = check_state(propagate(p, rho0, kt / spec.kappa).rho);
        CHECK(check.passes());
      }
    }
  }
}

TEST_CASE("off-diagonal blocks decay at their spectral rate") {
  // For the 2x2 blocks the vector 1-norm is a Lyapunov norm, so the bound holds
  // with constant 1; for the 4x4 blocks it holds up to the eigenvector condition number.
  testing::Generator gen;
  for (int trial = 0; trial < 100; ++trial) {
    const ChainSpec spec = gen.chain();
    const AnalyticPropagator p = build_propagator(compute_rates(spec, gen.baths()), spec);
    const ComplexMatrix rho0 = pure_state(gen.pure(8), Basis::Eigen).rho;
    const double t = gen.uniform(0.1, 100.0);
    const ComplexMatrix rho_t = propagate(p, {rho0, Basis::Eigen}, t).rho;
    auto gather = [](const ComplexMatrix& m, const auto& elements) {
      ComplexVector v(static_cast<Eigen::Index>(elements.size()));
      for (std::size_t k = 0; k < elements.size(); ++k) v(static_cast<Eigen::Index>(k)) = m(elements[k].first, elements[k].second);
      return v;
    };
    for (const auto& block : p.group2) {
      const double g = -eig_general(block.generator()).values.real().maxCoeff();
      CHECK(g > 0.0);
      CHECK(gather(rho_t, block.elements).lpNorm<1>() <= gather(rho0, block.elements).lpNorm<1>() * std::exp(-g * t) + 1e-15);
    }
    for (const auto& block : p.group3) {
      const auto eig = eig_general(block.generator);
      const double g = -eig.values.real().maxCoeff();
      Eigen::JacobiSVD<ComplexMatrix> svd(eig.vectors);
      const double cond = svd.singularValues()(0) / svd.singularValues()(3);
      CHECK(g > 0.0);
      CHECK(gather(rho_t, block.elements).norm() <= cond * gather(rho0, block.elements).norm() * std::exp(-g * t) + 1e-15);
    }
  }
}

TEST_CASE("spectral certificate") {
  const AnalyticPropagator p = reference_propagator();
  const auto cert = spectral_certificate(p);
  CHECK(cert.size() == 13);
  for (const auto& c : cert) CHECK(c.max_real < 0.0);

  const auto quad1 = eig_general(p.group3[0].generator).values;
  std::vector<double> numeric;
  for (int k = 0; k < 4; ++k) numeric.push_back(quad1(k).real());
  std::sort(numeric.begin(), numeric.end());
  const auto closed = first_quad_real_parts(p.rates);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(numeric[static_cast<std::size_t>(k)] - closed[static_cast<std::size_t>(k)]) <= 1e-10);
  CHECK(cert[10].name == "quad1");
  CHECK(std::abs(cert[10].closed_form - cert[10].max_real) <= 1e-10);
}

TEST_CASE("first quadruple at equal baths decouples") {
  testing::Generator gen;
  for (int trial = 0; trial < 50; ++trial) {
    const ChainSpec spec = gen.chain();
    const double beta = gen.uniform(0.5, 5.0), gamma = gen.uniform(0.01, 0.1);
    const RateSet q = compute_rates(spec, {gamma, gamma, beta, beta});
    const AnalyticPropagator p = build_propagator(q, spec);
    const Eigen::Matrix4cd& m = p.group3[0].generator;
    CHECK(max_abs(ComplexMatrix(m - Eigen::Matrix4cd(m.diagonal().asDiagonal()))) == 0.0);
    const auto parts = first_quad_real_parts(q);
    std::vector<double> expected = {-q.a() / 2 - (q.b_minus + q.c_minus) / 2, -q.a() / 2 - (q.b_plus + q.c_plus) / 2,
                                    -q.a() / 2 - (q.b_plus + q.c_minus) / 2, -q.a() / 2 - (q.b_minus + q.c_plus) / 2};
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 4; ++k) CHECK(parts[static_cast<std::size_t>(k)] == doctest::Approx(expected[static_cast<std::size_t>(k)]).epsilon(1e-12));
  }
}

TEST_CASE("spectral certificate on random parameters") {
  testing::Generator gen;
  for (int trial = 0; trial < 1000; ++trial) {
    const ChainSpec spec = gen.chain();
    const AnalyticPropagator p = build_propagator(compute_rates(spec, gen.baths()), spec);
    CHECK_NOTHROW(spectral_certificate(p));
  }
}
