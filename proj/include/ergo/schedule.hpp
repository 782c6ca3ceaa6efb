#pragma once

// Time profiles of the bare drive H_0(t) and of the ramp f(t) on [t_i, t_f].

#include <variant>
#include <vector>

#include "ergo/states.hpp"

namespace ergo {

enum class RampKind {
  smoothstep,  // 3s^2 - 2s^3
  sine,        // (1 - cos(pi s)) / 2
  overshoot,   // smoothstep + A sin^2(pi s) sin(2 pi s), not monotone for A > 3/(4 pi)
};

/// f(s) with f(0) = 0, f(1) = 1 and vanishing slope at both ends. Derivatives
/// are taken with respect to s = (t - t_i) / tau.
struct Ramp {
  RampKind kind = RampKind::smoothstep;
  double amplitude = 0.0;  // overshoot only

  double value(double s) const;
  double slope(double s) const;
  double curvature(double s) const;
};

enum class LambdaKind { linear, sine, sampled };

/// H_0 = lambda_i H_i + lambda_f H_f. Sampled profiles are linearly
/// interpolated on a uniform s-grid.
struct InterpProfile {
  LambdaKind kind = LambdaKind::linear;
  std::vector<double> lambda_i;
  std::vector<double> lambda_f;
};

/// H_0 = (omega sz + eps sx)/2 with omega = Omega cos(phi), eps = Omega sin(phi),
/// phi = -mu * int Omega and Omega linear from omega_start to omega_end, so
/// that (omega' eps - eps' omega)/Omega^3 = mu at all times.
struct RotatingProfile {
  double mu = 0.0;
  double omega_start = 1.0;
  double omega_end = 1.0;
};

class Schedule {
 public:
  static Schedule interp(double t_i, double t_f, int n_steps, InterpProfile profile = {},
                         Ramp ramp = {});
  static Schedule rotating(double t_i, double t_f, int n_steps, RotatingProfile profile,
                           Ramp ramp = {});
  /// omega = omega0 cos(pi t / 2 tau*), eps = omega0 sin(pi t / 2 tau*) on [0, tau].
  static Schedule cos_sin(double omega0, double tau, double tau_star, int n_steps, Ramp ramp = {});

  double t_i() const { return t_i_; }
  double t_f() const { return t_f_; }
  double tau() const { return t_f_ - t_i_; }
  int n_steps() const { return n_steps_; }
  const Ramp& ramp() const { return ramp_; }
  bool is_rotating() const { return std::holds_alternative<RotatingProfile>(profile_); }
  const RotatingProfile& rotating_profile() const;
  const InterpProfile& interp_profile() const;

  Schedule with_steps(int n_steps) const;

  double s(double t) const { return (t - t_i_) / tau(); }
  double f(double t) const;
  double f_rate(double t) const;
  double f_accel(double t) const;

  double lambda_i(double t) const;
  double lambda_f(double t) const;
  double lambda_i_rate(double t) const;
  double lambda_f_rate(double t) const;

  // Rotating profile only.
  double big_omega(double t) const;
  double omega_bar(double t) const;  // int_{t_i}^t Omega
  double angle(double t) const;      // phi(t)

  /// H_0(t). Rotating schedules ignore h_i/h_f beyond the endpoint check.
  CMatrix h0(double t, const HamiltonianOp& h_i, const HamiltonianOp& h_f) const;
  CMatrix h0_rate(double t, const HamiltonianOp& h_i, const HamiltonianOp& h_f) const;

  /// InvalidSchedule unless H_0(t_i) = h_i and H_0(t_f) = h_f to 1e-12.
  void check_endpoints(const HamiltonianOp& h_i, const HamiltonianOp& h_f) const;

  /// Endpoint Hamiltonians of a rotating schedule.
  CMatrix rotating_h(double t) const;

 private:
  Schedule() = default;
  void validate() const;

  double t_i_ = 0.0;
  double t_f_ = 1.0;
  int n_steps_ = 4096;
  Ramp ramp_;
  std::variant<InterpProfile, RotatingProfile> profile_;
};

}  // namespace ergo
