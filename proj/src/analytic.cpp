#include "xxchain/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace xxchain {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Populations factor into three independent two-level modes (A, B, C).
// Mode occupations (0 = '+', 1 = '-') of the eight eigenstates:
// 1:+++ 2:-++ 3:+-- 4:--- 5:+-+ 6:--+ 7:++- 8:-+-
constexpr std::array<std::array<int, 3>, 8> kModeLabels = {{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 1}, {1, 1, 1}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1},
}};

void require_positive_rates(const RateSet& r) {
  const double all[] = {r.a_plus, r.a_minus, r.b_plus, r.b_minus, r.c_plus, r.c_minus};
  for (double x : all) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ParameterError("analytic propagator needs strictly positive, finite emission and absorption rates");
    }
  }
}

Matrix8d printed_r(const RateSet& r) {
  const double a = r.a_plus / r.a_minus;
  const double b = r.b_minus / r.b_plus;
  const double c = r.c_plus / r.c_minus;
  Matrix8d m;
  // clang-format off
  m << a * c,     -c,     a * c,  -c,  -a,     1,  -a,  1,
       c,          c,     c,       c,  -1,    -1,  -1, -1,
       a * b,     -b,    -a,       1,   a * b, -b,  -a,  1,
       b,          b,    -1,      -1,   b,      b,  -1, -1,
       a * b * c, -b * c, -a * c,  c,  -a * b,  b,   a, -1,
       b * c,      b * c, -c,     -c,  -b,     -b,   1,  1,
       a,         -1,     a,      -1,   a,     -1,   a, -1,
       1,          1,     1,       1,   1,      1,   1,  1;
  // clang-format on
  return m;
}

// Inverse of the printed R from its mode-product structure
// R[i, m] = UA[a_i, a_m] * UB[b_i, b_m] * UC[c_i, c_m].
Matrix8d product_inverse(const RateSet& r) {
  const double ia = 1.0 / r.a(), ib = 1.0 / r.b(), ic = 1.0 / r.c();
  const Eigen::Matrix2d ua_inv{{r.a_minus * ia, r.a_minus * ia}, {-r.a_minus * ia, r.a_plus * ia}};
  const Eigen::Matrix2d ub_inv{{r.b_plus * ib, r.b_plus * ib}, {r.b_minus * ib, -r.b_plus * ib}};
  const Eigen::Matrix2d uc_inv{{r.c_minus * ic, r.c_minus * ic}, {-r.c_minus * ic, r.c_plus * ic}};
  Matrix8d inv;
  for (int m = 0; m < 8; ++m) {
    const int am = m & 1, bm = (m >> 1) & 1, cm = (m >> 2) & 1;
    for (int i = 0; i < 8; ++i) {
      const auto& l = kModeLabels[static_cast<std::size_t>(i)];
      inv(m, i) = ua_inv(am, l[0]) * ub_inv(bm, l[1]) * uc_inv(cm, l[2]);
    }
  }
  return inv;
}

Complex oscillation(const SpinEigenSystem& sys, Element e) {
  return -kI * (sys.values(e.first) - sys.values(e.second));
}

Eigen::Matrix4cd quad(std::initializer_list<double> entries) {
  Eigen::Matrix4d m;
  auto it = entries.begin();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = *it++;
  return 0.5 * m.cast<Complex>();
}

double max_real(const ComplexVector& values) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) m = std::max(m, v.real());
  return m;
}

}  // namespace

Eigen::Matrix2cd PairBlock::generator() const {
  Eigen::Matrix2cd g;
  g << delta - alpha, sign * beta, sign * alpha, delta - beta;
  return g;
}

Matrix8d AnalyticPropagator::population_generator() const {
  return r * (-decay_exponents).asDiagonal() * r_inv;
}

AnalyticPropagator build_propagator(const RateSet& rates, const ChainSpec& spec) {
  validate(spec);
  if (spec.spins != 3) throw ParameterError("analytic propagator exists for n=3 only");
  require_positive_rates(rates);

  const RateSet& q = rates;
  const double A = q.a(), B = q.b(), C = q.c();

  AnalyticPropagator p;
  p.spec = spec;
  p.rates = rates;
  p.eigen = eigen_system(spec);
  p.r = printed_r(rates);
  p.r_inv = product_inverse(rates);
  p.decay_exponents << 0.0, A, B / 2, A + B / 2, C / 2, A + C / 2, (B + C) / 2, A + B / 2 + C / 2;

  const auto& sys = p.eigen;
  const double g1_real = -(A / 2 + (B + C) / 4);
  const Element g1[] = {{0, 3}, {1, 2}, {4, 7}, {5, 6}};
  for (std::size_t k = 0; k < 4; ++k) p.group1[k] = {g1[k], g1_real + oscillation(sys, g1[k])};

  auto pair = [&](Element e0, Element e1, double real_shift, double alpha, double beta, int sign) {
    return PairBlock{{e0, e1}, real_shift + oscillation(sys, e0), alpha, beta, sign};
  };
  p.group2 = {
      pair({1, 4}, {7, 2}, -A / 2 - B / 4, q.c_minus / 2, q.c_plus / 2, +1),
      pair({0, 2}, {1, 3}, -(B + C) / 4, q.a_minus, q.a_plus, -1),
      pair({0, 5}, {6, 3}, -A / 2 - B / 4, q.c_minus / 2, q.c_plus / 2, +1),
      pair({0, 7}, {4, 3}, -A / 2 - C / 4, q.b_minus / 2, q.b_plus / 2, +1),
      pair({1, 6}, {5, 2}, -A / 2 - C / 4, q.b_minus / 2, q.b_plus / 2, +1),
      pair({4, 6}, {5, 7}, -(B + C) / 4, q.a_minus, q.a_plus, -1),
  };

  const double Ap = q.a_plus, Am = q.a_minus, Bp = q.b_plus, Bm = q.b_minus, Cp = q.c_plus, Cm = q.c_minus;
  const double Fp = q.f_plus, Fm = q.f_minus, Gp = q.g_plus, Gm = q.g_minus, Hp = q.h_plus, Hm = q.h_minus;
  // clang-format off
  const Eigen::Matrix4cd t1 = quad({-Bm - Cm, 0,        -Gp,      Hp,
                                    0,        -Bp - Cp, Hm,       -Gm,
                                    -Gm,      Hp,       -Bp - Cm, 0,
                                    Hm,       -Gp,      0,        -Bm - Cp});
  const Eigen::Matrix4cd t2 = quad({-2 * Am - Cm, 2 * Fp,       Hp,           0,
                                    2 * Fm,       -2 * Ap - Cm, 0,            Hp,
                                    Hm,           0,            -2 * Am - Cp, 2 * Fp,
                                    0,            Hm,           2 * Fm,       -2 * Ap - Cp});
  const Eigen::Matrix4cd t3 = quad({-2 * Am - Bm, -2 * Fp,      -Gp,          0,
                                    -2 * Fm,      -2 * Ap - Bm, 0,            -Gp,
                                    -Gm,          0,            -2 * Am - Bp, -2 * Fp,
                                    0,            -Gm,          -2 * Fm,      -2 * Ap - Bp});
  // clang-format on
  auto quad_block = [&](std::array<Element, 4> els, double real_shift, const Eigen::Matrix4cd& t) {
    const Complex shift = real_shift + oscillation(sys, els[0]);
    return QuadBlock{els, shift * Eigen::Matrix4cd::Identity() + t};
  };
  p.group3 = {
      quad_block({Element{0, 1}, {2, 3}, {4, 5}, {6, 7}}, -A / 2, t1),
      quad_block({Element{0, 4}, {1, 5}, {6, 2}, {7, 3}}, -B / 4, t2),
      quad_block({Element{0, 6}, {1, 7}, {4, 2}, {5, 3}}, -C / 4, t3),
  };
  return p;
}

Eigen::Matrix2cd expm2_closed(Complex delta, double alpha, double beta, int sign, double t) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ParameterError("expm2_closed: alpha and beta must be positive");
  if (sign != 1 && sign != -1) throw ParameterError("expm2_closed: sign must be +1 or -1");
  const double s = alpha + beta;
  const double decay = std::exp(-s * t);
  const double rise = -std::expm1(-s * t);
  const Complex front = std::exp(delta * t) / s;
  Eigen::Matrix2cd m;
  m << front * (beta + alpha * decay), front * (sign * beta * rise), front * (sign * alpha * rise),
      front * (alpha + beta * decay);
  return m;
}

DensityMatrix propagate(const AnalyticPropagator& prop, const DensityMatrix& rho0, double t) {
  if (rho0.rho.rows() != 8 || rho0.rho.cols() != 8) throw DimensionError("propagate: expected an 8x8 state");
  if (!(t >= 0.0)) throw ParameterError("propagate: time must be non-negative");
  const ComplexMatrix in = to_basis(rho0, Basis::Eigen, prop.eigen).rho;
  if (t == 0.0) return {in, Basis::Eigen};

  ComplexMatrix out = ComplexMatrix::Zero(8, 8);
  auto put = [&](Element e, Complex v) {
    out(e.first, e.second) = v;
    out(e.second, e.first) = std::conj(v);
  };

  const Vector8d p0 = in.diagonal().real();
  const Vector8d decay = (-prop.decay_exponents * t).array().exp();
  const Vector8d pt = prop.r * (decay.asDiagonal() * (prop.r_inv * p0));
  for (int i = 0; i < 8; ++i) out(i, i) = pt(i);

  for (const auto& mode : prop.group1) put(mode.element, in(mode.element.first, mode.element.second) * std::exp(mode.rate * t));

  for (const auto& block : prop.group2) {
    const Eigen::Matrix2cd u = expm2_closed(block.delta, block.alpha, block.beta, block.sign, t);
    Eigen::Vector2cd v(in(block.elements[0].first, block.elements[0].second),
                       in(block.elements[1].first, block.elements[1].second));
    const Eigen::Vector2cd w = u * v;
    put(block.elements[0], w(0));
    put(block.elements[1], w(1));
  }

  for (const auto& block : prop.group3) {
    const Eigen::Matrix4cd u = expm(block.generator, t);
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v(k) = in(block.elements[static_cast<std::size_t>(k)].first, block.elements[static_cast<std::size_t>(k)].second);
    const Eigen::Vector4cd w = u * v;
    for (int k = 0; k < 4; ++k) put(block.elements[static_cast<std::size_t>(k)], w(k));
  }
  return {out, Basis::Eigen};
}

DensityMatrix steady_state(const RateSet& q) {
  const double z = q.a() * q.b() * q.c();
  if (!(z > 0.0) || !std::isfinite(z)) throw ParameterError("steady_state: rates must be positive and finite");
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  const double pop[] = {
      q.a_plus * q.b_plus * q.c_plus,   q.a_minus * q.b_plus * q.c_plus,  q.a_plus * q.b_minus * q.c_minus,
      q.a_minus * q.b_minus * q.c_minus, q.a_plus * q.b_minus * q.c_plus, q.a_minus * q.b_minus * q.c_plus,
      q.a_plus * q.b_plus * q.c_minus,  q.a_minus * q.b_plus * q.c_minus,
  };
  for (int i = 0; i < 8; ++i) rho(i, i) = pop[i] / z;
  return {rho, Basis::Eigen};
}

DensityMatrix w3_closed_form(const RateSet& q, const ChainSpec& spec, double t) {
  validate(spec);
  if (spec.spins != 3) throw ParameterError("w3_closed_form: n=3 only");
  const double A = q.a(), B = q.b(), C = q.c();
  if (!(A > 0.0 && B > 0.0 && C > 0.0)) throw ParameterError("w3_closed_form: rates must be positive");

  // Mode relaxation factors exp(-At), exp(-Bt/2), exp(-Ct/2).
  const double ea = std::exp(-A * t), eb = std::exp(-B * t / 2), ec = std::exp(-C * t / 2);
  struct Mode {
    double f_plus, f_minus, g_plus, g_minus;
  };
  auto mode = [](double plus, double minus, double e) {
    return Mode{plus * (1 - e), minus * (1 - e), plus + minus * e, minus + plus * e};
  };
  const Mode ma = mode(q.a_plus, q.a_minus, ea);
  const Mode mb = mode(q.b_plus, q.b_minus, eb);
  const Mode mc = mode(q.c_plus, q.c_minus, ec);

  // (r_i5, r_i7) for i = 1..8.
  const std::array<std::pair<double, double>, 8> r = {{
      {ma.g_plus * mb.f_plus * mc.g_plus, ma.g_plus * mb.g_plus * mc.f_plus},
      {ma.f_minus * mb.f_plus * mc.g_plus, ma.f_minus * mb.g_plus * mc.f_plus},
      {ma.g_plus * mb.g_minus * mc.f_minus, ma.g_plus * mb.f_minus * mc.g_minus},
      {ma.f_minus * mb.g_minus * mc.f_minus, ma.f_minus * mb.f_minus * mc.g_minus},
      {ma.g_plus * mb.g_minus * mc.g_plus, ma.g_plus * mb.f_minus * mc.f_plus},
      {ma.f_minus * mb.g_minus * mc.g_plus, ma.f_minus * mb.f_minus * mc.f_plus},
      {ma.g_plus * mb.f_plus * mc.f_minus, ma.g_plus * mb.g_plus * mc.g_minus},
      {ma.f_minus * mb.f_plus * mc.f_minus, ma.f_minus * mb.g_plus * mc.g_minus},
  }};

  // |<lambda5|W3>|^2 = (1/2 - sqrt2/3), |<lambda7|W3>|^2 = (1/2 + sqrt2/3).
  constexpr double kWeightSplit = kSqrt2 / 3.0;
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  const double z = A * B * C;
  for (int i = 0; i < 8; ++i) {
    const auto [r5, r7] = r[static_cast<std::size_t>(i)];
    rho(i, i) = ((r5 + r7) / 2 + kWeightSplit * (r7 - r5)) / z;
  }

  const Complex phase = std::exp(Complex(-(B + C) * t / 4, 2 * kSqrt2 * spec.kappa * t));
  const Complex rho57 = phase * (((q.a_plus + q.a_minus * ea) / A) / 6.0);
  const Complex rho68 = -phase * ((q.a_minus * -std::expm1(-A * t) / A) / 6.0);
  rho(4, 6) = rho57;
  rho(6, 4) = std::conj(rho57);
  rho(5, 7) = rho68;
  rho(7, 5) = std::conj(rho68);
  return {rho, Basis::Eigen};
}

std::array<double, 4> first_quad_real_parts(const RateSet& q) {
  const double bg = q.b_g(), ch = q.c_h();
  const double base = -q.a() / 2 - (q.b() + q.c()) / 4;
  std::array<double, 4> v = {base + std::abs(bg + ch) / 4, base - std::abs(bg + ch) / 4,
                             base + std::abs(bg - ch) / 4, base - std::abs(bg - ch) / 4};
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<BlockCertificate> spectral_certificate(const AnalyticPropagator& prop) {
  std::vector<BlockCertificate> out;
  for (std::size_t k = 0; k < prop.group1.size(); ++k) {
    out.push_back({"scalar" + std::to_string(k + 1), prop.group1[k].rate.real()});
  }
  for (std::size_t k = 0; k < prop.group2.size(); ++k) {
    out.push_back({"pair" + std::to_string(k + 1), max_real(eig_general(prop.group2[k].generator()).values)});
  }
  for (std::size_t k = 0; k < prop.group3.size(); ++k) {
    out.push_back({"quad" + std::to_string(k + 1), max_real(eig_general(prop.group3[k].generator).values)});
  }
  out[prop.group1.size() + prop.group2.size()].closed_form = first_quad_real_parts(prop.rates)[3];

  for (const auto& c : out) {
    if (!(c.max_real < 0.0)) {
      throw VerificationError("spectral certificate violated: block " + c.name + " has max Re(lambda) = " +
                              std::to_string(c.max_real));
    }
  }
  return out;
}

}  // namespace xxchain
