#include "ergo/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ergo {

namespace {

constexpr double pi = std::numbers::pi;

CMatrix rotating_matrix(double omega, double eps) {
  return 0.5 * (omega * pauli_z() + eps * pauli_x());
}

double max_entry(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// ---------------------------------------------------------------- Ramp

double Ramp::value(double s) const {
  const double base = s * s * (3.0 - 2.0 * s);
  switch (kind) {
    case RampKind::smoothstep:
      return base;
    case RampKind::sine:
      return 0.5 * (1.0 - std::cos(pi * s));
    case RampKind::overshoot: {
      const double sp = std::sin(pi * s);
      return base + amplitude * sp * sp * std::sin(2.0 * pi * s);
    }
  }
  return base;
}

double Ramp::slope(double s) const {
  const double base = 6.0 * s * (1.0 - s);
  switch (kind) {
    case RampKind::smoothstep:
      return base;
    case RampKind::sine:
      return 0.5 * pi * std::sin(pi * s);
    case RampKind::overshoot: {
      const double sp = std::sin(pi * s);
      const double s2 = std::sin(2.0 * pi * s);
      return base + amplitude * pi * (s2 * s2 + 2.0 * sp * sp * std::cos(2.0 * pi * s));
    }
  }
  return base;
}

double Ramp::curvature(double s) const {
  const double base = 6.0 - 12.0 * s;
  switch (kind) {
    case RampKind::smoothstep:
      return base;
    case RampKind::sine:
      return 0.5 * pi * pi * std::cos(pi * s);
    case RampKind::overshoot: {
      const double sp = std::sin(pi * s);
      return base + amplitude * pi * pi *
                        (3.0 * std::sin(4.0 * pi * s) - 4.0 * sp * sp * std::sin(2.0 * pi * s));
    }
  }
  return base;
}

// ---------------------------------------------------------------- Schedule

Schedule Schedule::interp(double t_i, double t_f, int n_steps, InterpProfile profile, Ramp ramp) {
  Schedule s;
  s.t_i_ = t_i;
  s.t_f_ = t_f;
  s.n_steps_ = n_steps;
  s.ramp_ = ramp;
  s.profile_ = std::move(profile);
  s.validate();
  return s;
}

Schedule Schedule::rotating(double t_i, double t_f, int n_steps, RotatingProfile profile,
                            Ramp ramp) {
  Schedule s;
  s.t_i_ = t_i;
  s.t_f_ = t_f;
  s.n_steps_ = n_steps;
  s.ramp_ = ramp;
  s.profile_ = profile;
  s.validate();
  return s;
}

Schedule Schedule::cos_sin(double omega0, double tau, double tau_star, int n_steps, Ramp ramp) {
  if (!(omega0 > 0.0) || !(tau_star > 0.0)) {
    throw Error(ErrorKind::InvalidSchedule, "cos/sin schedule needs omega0 > 0 and tau* > 0");
  }
  const double mu = -pi / (2.0 * omega0 * tau_star);
  return rotating(0.0, tau, n_steps, RotatingProfile{mu, omega0, omega0}, ramp);
}

void Schedule::validate() const {
  if (!std::isfinite(t_i_) || !std::isfinite(t_f_) || !(t_f_ > t_i_)) {
    throw Error(ErrorKind::InvalidSchedule, "need finite times with t_f > t_i");
  }
  if (n_steps_ < 1) throw Error(ErrorKind::InvalidSchedule, "n_steps must be positive");
  if (ramp_.kind == RampKind::overshoot && !std::isfinite(ramp_.amplitude)) {
    throw Error(ErrorKind::InvalidSchedule, "ramp amplitude must be finite");
  }
  if (const auto* rot = std::get_if<RotatingProfile>(&profile_)) {
    if (!std::isfinite(rot->mu) || !(rot->omega_start >= 0.0) || !(rot->omega_end >= 0.0) ||
        !std::isfinite(rot->omega_start) || !std::isfinite(rot->omega_end)) {
      throw Error(ErrorKind::InvalidSchedule, "rotating profile needs finite mu and Omega >= 0");
    }
    return;
  }
  const auto& p = std::get<InterpProfile>(profile_);
  if (p.kind != LambdaKind::sampled) return;
  if (p.lambda_i.size() < 2 || p.lambda_i.size() != p.lambda_f.size()) {
    throw Error(ErrorKind::InvalidSchedule,
                "sampled lambda profiles need two equal-length arrays of at least 2 points");
  }
  for (std::size_t k = 0; k < p.lambda_i.size(); ++k) {
    if (!std::isfinite(p.lambda_i[k]) || !std::isfinite(p.lambda_f[k]) || p.lambda_i[k] < 0.0 ||
        p.lambda_f[k] < 0.0) {
      throw Error(ErrorKind::InvalidSchedule, "lambda samples must be finite and non-negative");
    }
  }
  const double tol = 1e-12;
  if (std::abs(p.lambda_i.front() - 1.0) > tol || std::abs(p.lambda_i.back()) > tol ||
      std::abs(p.lambda_f.front()) > tol || std::abs(p.lambda_f.back() - 1.0) > tol) {
    throw Error(ErrorKind::InvalidSchedule,
                "lambda_i must go from 1 to 0 and lambda_f from 0 to 1");
  }
}

const RotatingProfile& Schedule::rotating_profile() const {
  if (!is_rotating()) throw Error(ErrorKind::InvalidSchedule, "schedule is not rotating");
  return std::get<RotatingProfile>(profile_);
}

const InterpProfile& Schedule::interp_profile() const {
  if (is_rotating()) throw Error(ErrorKind::InvalidSchedule, "schedule is rotating");
  return std::get<InterpProfile>(profile_);
}

Schedule Schedule::with_steps(int n_steps) const {
  Schedule s = *this;
  s.n_steps_ = n_steps;
  s.validate();
  return s;
}

double Schedule::f(double t) const { return ramp_.value(s(t)); }
double Schedule::f_rate(double t) const { return ramp_.slope(s(t)) / tau(); }
double Schedule::f_accel(double t) const { return ramp_.curvature(s(t)) / (tau() * tau()); }

namespace {

// Linear interpolation on a uniform grid over s in [0, 1].
struct Sampled {
  const std::vector<double>& v;
  std::size_t segment(double s) const {
    const double x = std::clamp(s, 0.0, 1.0) * static_cast<double>(v.size() - 1);
    return std::min(static_cast<std::size_t>(x), v.size() - 2);
  }
  double value(double s) const {
    const std::size_t j = segment(s);
    const double x = std::clamp(s, 0.0, 1.0) * static_cast<double>(v.size() - 1);
    const double w = x - static_cast<double>(j);
    return (1.0 - w) * v[j] + w * v[j + 1];
  }
  double slope(double s) const {
    const std::size_t j = segment(s);
    return (v[j + 1] - v[j]) * static_cast<double>(v.size() - 1);
  }
};

}  // namespace

double Schedule::lambda_i(double t) const {
  const auto& p = interp_profile();
  const double x = s(t);
  switch (p.kind) {
    case LambdaKind::linear:
      return 1.0 - x;
    case LambdaKind::sine: {
      const double c = std::cos(0.5 * pi * x);
      return c * c;
    }
    case LambdaKind::sampled:
      return Sampled{p.lambda_i}.value(x);
  }
  return 1.0 - x;
}

double Schedule::lambda_f(double t) const {
  const auto& p = interp_profile();
  const double x = s(t);
  switch (p.kind) {
    case LambdaKind::linear:
      return x;
    case LambdaKind::sine: {
      const double sn = std::sin(0.5 * pi * x);
      return sn * sn;
    }
    case LambdaKind::sampled:
      return Sampled{p.lambda_f}.value(x);
  }
  return x;
}

double Schedule::lambda_i_rate(double t) const {
  const auto& p = interp_profile();
  const double x = s(t);
  switch (p.kind) {
    case LambdaKind::linear:
      return -1.0 / tau();
    case LambdaKind::sine:
      return -0.5 * pi * std::sin(pi * x) / tau();
    case LambdaKind::sampled:
      return Sampled{p.lambda_i}.slope(x) / tau();
  }
  return -1.0 / tau();
}

double Schedule::lambda_f_rate(double t) const {
  const auto& p = interp_profile();
  const double x = s(t);
  switch (p.kind) {
    case LambdaKind::linear:
      return 1.0 / tau();
    case LambdaKind::sine:
      return 0.5 * pi * std::sin(pi * x) / tau();
    case LambdaKind::sampled:
      return Sampled{p.lambda_f}.slope(x) / tau();
  }
  return 1.0 / tau();
}

double Schedule::big_omega(double t) const {
  const auto& r = rotating_profile();
  return r.omega_start + (r.omega_end - r.omega_start) * s(t);
}

double Schedule::omega_bar(double t) const {
  const auto& r = rotating_profile();
  const double x = s(t);
  return tau() * (r.omega_start * x + 0.5 * (r.omega_end - r.omega_start) * x * x);
}

double Schedule::angle(double t) const { return -rotating_profile().mu * omega_bar(t); }

CMatrix Schedule::rotating_h(double t) const {
  const double om = big_omega(t);
  const double ph = angle(t);
  return rotating_matrix(om * std::cos(ph), om * std::sin(ph));
}

CMatrix Schedule::h0(double t, const HamiltonianOp& h_i, const HamiltonianOp& h_f) const {
  if (is_rotating()) return rotating_h(t);
  return lambda_i(t) * h_i.matrix() + lambda_f(t) * h_f.matrix();
}

CMatrix Schedule::h0_rate(double t, const HamiltonianOp& h_i, const HamiltonianOp& h_f) const {
  if (!is_rotating()) {
    return lambda_i_rate(t) * h_i.matrix() + lambda_f_rate(t) * h_f.matrix();
  }
  const auto& r = rotating_profile();
  const double om = big_omega(t);
  const double om_rate = (r.omega_end - r.omega_start) / tau();
  const double ph = angle(t);
  const double ph_rate = -r.mu * om;
  const double c = std::cos(ph);
  const double sn = std::sin(ph);
  return rotating_matrix(om_rate * c - om * ph_rate * sn, om_rate * sn + om * ph_rate * c);
}

void Schedule::check_endpoints(const HamiltonianOp& h_i, const HamiltonianOp& h_f) const {
  if (h_i.dim() != h_f.dim()) {
    throw Error(ErrorKind::DimMismatch, "initial and final Hamiltonians differ in dimension");
  }
  if (is_rotating() && h_i.dim() != 2) {
    throw Error(ErrorKind::DimMismatch, "rotating schedules act on two-level systems");
  }
  const auto check = [&](double t, const HamiltonianOp& h, const char* which) {
    const double err = max_entry(h0(t, h_i, h_f) - h.matrix());
    if (err > 1e-12 * std::max(1.0, max_entry(h.matrix()))) {
      throw Error(ErrorKind::InvalidSchedule, std::string("H_0 misses ") + which + " by " +
                                                  std::to_string(err));
    }
  };
  check(t_i_, h_i, "H_i at t_i");
  check(t_f_, h_f, "H_f at t_f");
}

}  // namespace ergo
