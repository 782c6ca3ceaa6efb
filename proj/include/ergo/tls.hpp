#pragma once

// Closed-form two-level results. Basis order is {|1>, |0>}: index 0 is the
// excited level, sz = diag(1, -1), rho = [[p, c], [c*, 1 - p]].

#include "ergo/matcore.hpp"

namespace ergo::tls {

struct TlsState {
  double p = 0.0;  // excited population
  cplx c{};        // coherence <1|rho|0>

  /// ParamOutOfRange unless 0 <= p <= 1 and |c|^2 <= p(1-p) + 1e-14.
  void validate() const;
  double psi() const { return std::arg(c); }
  CMatrix matrix() const;
};

struct EigsR {
  double r1;  // smaller eigenvalue
  double r0;  // larger eigenvalue
  CVector v1;
  CVector v0;
};

EigsR eigs_r(const TlsState& s);

/// sqrt(2)/tau * arctan sqrt((p - r1)/(r0 - p)): cost of the optimal drive
/// when H_0 commutes with itself at all times.
double example1_wmin(const TlsState& s, double tau);

/// lam_f_omega * (sqrt((1/2 - p)^2 + |c|^2) - 1/2 + p).
double example1_delta(const TlsState& s, double lam_f_omega);

/// Constant-mu rotating drive. Omega_bar = int Omega over [t_i, t_f].
struct MuDynParams {
  double mu = 0.0;
  double omega_bar = 0.0;
  double omega_f = 1.0;
  double eps_f = 0.0;
  double Omega_f = 1.0;
  double tau = 1.0;
  double tau_star = 0.0;  // > 0 only for the cos/sin schedule

  double nu_c() const;
  double nu_s() const;
  /// ParamInconsistent if Omega_f != sqrt(omega_f^2 + eps_f^2) or, for the
  /// cos/sin schedule, mu != -pi / (2 Omega_f tau*).
  void validate() const;

  /// Constant Omega = omega_bar / tau, final angle -mu * omega_bar.
  static MuDynParams constant_omega(double mu, double omega_bar, double tau);
  static MuDynParams cos_sin(double omega0, double tau, double tau_star);
};

/// U_0(t) for the constant-mu drive after accumulating omega_bar_t = int Omega:
/// W(-mu omega_bar_t) exp(-i omega_bar_t (sz + mu sy) / 2), W(a) = exp(-i a sy / 2).
CMatrix constmu_propagator(double mu, double omega_bar_t);

/// Final eigenvectors of H_f from the unnormalised forms
/// ((omega_f +- Omega_f), eps_f), normalised. At eps_f = 0 the limit eps_f -> 0+
/// is used.
struct FinalBasis {
  CVector e1;
  CVector e0;
};
FinalBasis final_basis(const MuDynParams& params);

struct FinalState {
  double p_f;
  cplx c_f;  // <e1^f|rho_f|e0^f>
};

/// Closed-form final state in the final eigenbasis for a diagonal initial state
/// with excited population p_i.
FinalState constmu_final_state(double p_i, const MuDynParams& params);

/// Tr(rho_f H_f) - Tr[pas(rho_th)_f H_f] for a thermal input with population p_i.
double delta_e_sta(double p_i, const MuDynParams& params);

/// |mu| Omega_bar / tau.
double w_sta_closed(const MuDynParams& params);

/// Images of |1>, |0> under the bare drive, up to phases:
/// |e1'> = alpha e^{-i phi_a} |1> - beta |0>, |e0'> = beta |1> + alpha e^{i phi_a} |0>.
struct PrimedBasis {
  double alpha;
  double phi_alpha;
  double beta;
  CVector e1p;
  CVector e0p;
};
PrimedBasis primed_basis(const MuDynParams& params);

struct ThetaSplit {
  double theta1;      // initial-state contribution
  double theta2;      // bare-dynamics contribution
  double lower;       // sqrt(2)|theta1 - theta2| / tau
  double upper;       // sqrt(2) pi / tau
  double band_upper;  // sqrt(2)(theta1 + theta2) / tau
};
ThetaSplit example2_theta_split(const TlsState& s, const MuDynParams& params);

/// Cost after optimising the two free phases, for the given coherence phase.
double example2_wmin_full(const TlsState& s, const MuDynParams& params);

}  // namespace ergo::tls
