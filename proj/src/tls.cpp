#include "ergo/tls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ergo::tls {

namespace {

constexpr double pi = std::numbers::pi;

// sign with sign(0) = +1, matching the eps_f -> 0+ limit used throughout
double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

struct Split {
  double a;  // (r0 - p) / (r0 - r1)
  double b;  // (p - r1) / (r0 - r1)
};

Split split(const TlsState& s, const EigsR& e) {
  const double gap = e.r0 - e.r1;
  if (gap <= 0.0) return {1.0, 0.0};  // maximally mixed: any basis diagonalises
  const double a = std::clamp((e.r0 - s.p) / gap, 0.0, 1.0);
  return {a, 1.0 - a};
}

}  // namespace

void TlsState::validate() const {
  if (!std::isfinite(p) || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw Error(ErrorKind::ParamOutOfRange, "two-level state has non-finite entries");
  }
  if (p < 0.0 || p > 1.0) {
    throw Error(ErrorKind::ParamOutOfRange, "population " + std::to_string(p) + " outside [0, 1]");
  }
  if (std::norm(c) > p * (1.0 - p) + 1e-14) {
    throw Error(ErrorKind::ParamOutOfRange, "|c|^2 exceeds p(1 - p)");
  }
}

CMatrix TlsState::matrix() const {
  CMatrix m(2, 2);
  m << p, c, std::conj(c), 1.0 - p;
  return m;
}

EigsR eigs_r(const TlsState& s) {
  s.validate();
  const double rad = std::sqrt((s.p - 0.5) * (s.p - 0.5) + std::norm(s.c));
  EigsR out{0.5 - rad, 0.5 + rad, CVector(2), CVector(2)};
  const auto [a, b] = split(s, out);
  const cplx ph = std::polar(1.0, s.psi());
  out.v1 << std::sqrt(a), -std::conj(ph) * std::sqrt(b);
  out.v0 << ph * std::sqrt(b), std::sqrt(a);
  return out;
}

double example1_wmin(const TlsState& s, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "tau must be positive");
  const EigsR e = eigs_r(s);
  // atan2 keeps p = r0 (full inversion) finite: arctan(inf) = pi/2
  const double num = std::max(0.0, s.p - e.r1);
  const double den = std::max(0.0, e.r0 - s.p);
  return std::sqrt(2.0) / tau * std::atan2(std::sqrt(num), std::sqrt(den));
}

double example1_delta(const TlsState& s, double lam_f_omega) {
  s.validate();
  return lam_f_omega * (std::sqrt((0.5 - s.p) * (0.5 - s.p) + std::norm(s.c)) - 0.5 + s.p);
}

double MuDynParams::nu_c() const { return std::cos(omega_bar * std::sqrt(1.0 + mu * mu)); }
double MuDynParams::nu_s() const { return std::sin(omega_bar * std::sqrt(1.0 + mu * mu)); }

void MuDynParams::validate() const {
  for (double v : {mu, omega_bar, omega_f, eps_f, Omega_f, tau, tau_star}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::ParamOutOfRange, "non-finite parameter");
  }
  if (omega_bar < 0.0) throw Error(ErrorKind::ParamOutOfRange, "omega_bar must be >= 0");
  if (!(tau > 0.0)) throw Error(ErrorKind::ParamOutOfRange, "tau must be positive");
  const double norm = std::hypot(omega_f, eps_f);
  if (std::abs(norm - Omega_f) > 1e-12 * std::max(1.0, std::abs(Omega_f))) {
    throw Error(ErrorKind::ParamInconsistent, "Omega_f != sqrt(omega_f^2 + eps_f^2)");
  }
  if (tau_star > 0.0) {
    const double expect = -pi / (2.0 * Omega_f * tau_star);
    if (std::abs(mu - expect) > 1e-12 * std::max(1.0, std::abs(expect))) {
      throw Error(ErrorKind::ParamInconsistent, "mu != -pi / (2 omega_0 tau*)");
    }
  }
}

MuDynParams MuDynParams::constant_omega(double mu, double omega_bar, double tau) {
  MuDynParams p;
  p.mu = mu;
  p.omega_bar = omega_bar;
  p.tau = tau;
  p.Omega_f = omega_bar / tau;
  const double ph = -mu * omega_bar;
  p.omega_f = p.Omega_f * std::cos(ph);
  p.eps_f = p.Omega_f * std::sin(ph);
  p.Omega_f = std::hypot(p.omega_f, p.eps_f);
  return p;
}

MuDynParams MuDynParams::cos_sin(double omega0, double tau, double tau_star) {
  if (!(omega0 > 0.0) || !(tau > 0.0) || !(tau_star > 0.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "omega0, tau and tau* must be positive");
  }
  MuDynParams p;
  p.mu = -pi / (2.0 * omega0 * tau_star);
  p.omega_bar = omega0 * tau;
  p.tau = tau;
  p.tau_star = tau_star;
  p.omega_f = omega0 * std::cos(pi * tau / (2.0 * tau_star));
  p.eps_f = omega0 * std::sin(pi * tau / (2.0 * tau_star));
  p.Omega_f = std::hypot(p.omega_f, p.eps_f);
  return p;
}

CMatrix constmu_propagator(double mu, double omega_bar_t) {
  // exp(-i a sy / 2) = [[cos, -sin], [sin, cos]](a / 2)
  const double a = -mu * omega_bar_t;
  CMatrix w(2, 2);
  w << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  const double k = std::sqrt(1.0 + mu * mu);
  const double half = 0.5 * omega_bar_t * k;
  const cplx mi(0.0, -1.0);
  // n = (sz + mu sy) / k
  CMatrix n(2, 2);
  n << 1.0, cplx(0.0, -mu), cplx(0.0, mu), -1.0;
  n /= k;
  const CMatrix inner = std::cos(half) * CMatrix::Identity(2, 2) + mi * std::sin(half) * n;
  return w * inner;
}

FinalBasis final_basis(const MuDynParams& params) {
  double om = params.omega_f;
  double ep = params.eps_f;
  double big = params.Omega_f;
  if (big == 0.0) {
    om = 1.0;
    ep = 0.0;
    big = 1.0;
  }
  // omega_f -+ Omega_f rationalised where it cancels; at eps_f = 0 the vector
  // is divided by eps_f first, which is the eps_f -> 0+ limit.
  auto build = [&](double lead_sign) {
    const double raw = om + lead_sign * big;
    const bool cancels = (lead_sign > 0.0) ? (om < 0.0) : (om > 0.0);
    CVector v(2);
    if (!cancels) {
      v << raw, ep;
    } else {
      // raw = -eps^2 / (om - lead_sign big); divide through by |eps|
      const double denom = om - lead_sign * big;
      v << -std::abs(ep) / denom, sgn(ep);
    }
    v.normalize();
    return v;
  };
  return {build(+1.0), build(-1.0)};
}

FinalState constmu_final_state(double p_i, const MuDynParams& params) {
  params.validate();
  if (!(p_i >= 0.0 && p_i <= 1.0)) throw Error(ErrorKind::ParamOutOfRange, "p_i outside [0, 1]");
  const double mu2 = params.mu * params.mu;
  const double nc = params.nu_c();
  const double ns = params.nu_s();
  FinalState out;
  out.p_f = (2.0 * p_i + mu2 - mu2 * nc * (1.0 - 2.0 * p_i)) / (2.0 * (1.0 + mu2));
  out.c_f = -params.mu * (1.0 - 2.0 * p_i) / (2.0 * (1.0 + mu2)) * sgn(params.eps_f) *
            cplx(ns * std::sqrt(1.0 + mu2), -(1.0 - nc));
  return out;
}

double delta_e_sta(double p_i, const MuDynParams& params) {
  const double mu2 = params.mu * params.mu;
  return params.Omega_f * (0.5 - p_i) * mu2 * (1.0 - params.nu_c()) / (1.0 + mu2);
}

double w_sta_closed(const MuDynParams& params) {
  return std::abs(params.mu) * params.omega_bar / params.tau;
}

PrimedBasis primed_basis(const MuDynParams& params) {
  const double mu2 = params.mu * params.mu;
  const double nc = params.nu_c();
  const double norm = std::sqrt(2.0 * (1.0 + mu2));
  // The sign multiplying the real part is fixed numerically: these vectors are
  // the final-basis coordinates of U0|1>, U0|0> exactly when it is -sign(nu_s).
  const double s = params.nu_s() > 0.0 ? -1.0 : 1.0;
  const cplx ae = cplx(s * std::sqrt((1.0 + mu2) * std::max(0.0, 1.0 + nc)),
                       -std::sqrt(std::max(0.0, 1.0 - nc))) / norm;
  PrimedBasis out;
  out.alpha = std::abs(ae);
  out.phi_alpha = std::arg(ae);
  out.beta = sgn(params.eps_f) * params.mu * std::sqrt(std::max(0.0, 1.0 - nc)) / norm;
  out.e1p = CVector(2);
  out.e0p = CVector(2);
  out.e1p << std::conj(ae), -out.beta;
  // unit vector orthogonal to e1p
  out.e0p << out.beta, ae;
  return out;
}

ThetaSplit example2_theta_split(const TlsState& s, const MuDynParams& params) {
  const EigsR e = eigs_r(s);
  const double mu2 = params.mu * params.mu;
  const double nc = params.nu_c();
  ThetaSplit out;
  out.theta1 = std::atan2(std::sqrt(std::max(0.0, s.p - e.r1)), std::sqrt(std::max(0.0, e.r0 - s.p)));
  out.theta2 = std::atan2(std::abs(params.mu) * std::sqrt(std::max(0.0, 1.0 - nc)),
                          std::sqrt(std::max(0.0, 2.0 + mu2 * (1.0 + nc))));
  const double r2 = std::sqrt(2.0);
  out.lower = r2 * std::abs(out.theta1 - out.theta2) / params.tau;
  out.upper = r2 * pi / params.tau;
  out.band_upper = r2 * (out.theta1 + out.theta2) / params.tau;
  return out;
}

double example2_wmin_full(const TlsState& s, const MuDynParams& params) {
  const EigsR e = eigs_r(s);
  const auto [a, b] = split(s, e);
  const PrimedBasis pb = primed_basis(params);
  const double x = pb.alpha * pb.alpha * a + pb.beta * pb.beta * b +
                   2.0 * pb.alpha * pb.beta * std::sqrt(a * b) * std::cos(s.psi() + pb.phi_alpha);
  // arctan sqrt(1/x - 1) = arccos sqrt(x)
  return std::sqrt(2.0) / params.tau * std::acos(std::sqrt(std::clamp(x, 0.0, 1.0)));
}

}  // namespace ergo::tls
