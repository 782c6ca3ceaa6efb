#pragma once

// Bare-drive propagation, chi-based optimal drives and their costs,
// counterdiabatic comparison and end-to-end verification.

#include <cstdint>
#include <memory>
#include <vector>

#include "ergo/schedule.hpp"

namespace ergo {

struct PropagatorTrace {
  std::vector<double> times;
  std::vector<CMatrix> u_samples;  // U_0(t_k), u_samples[0] = I
  double unitarity_drift = 0.0;    // max ||U^dag U - I||_F over the samples
  double doubling_change = 0.0;    // ||U_n(t_f) - U_2n(t_f)||_F of the last refinement
};

/// Time-ordered propagator of H_0(t) by midpoint exponentials, re-unitarised
/// every 64 steps. Starts at sched.n_steps() (>= 100) and doubles the grid
/// until two successive end points agree to 1e-8; the finer trace is returned.
/// NoConvergence once the grid would exceed 1e5 steps.
PropagatorTrace propagate_u0(const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                             const Schedule& sched);

/// One pass on a fixed grid, no refinement.
PropagatorTrace propagate_u0_fixed(const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                                   const Schedule& sched, int n_steps);

/// R = sum_n e^{i phi_n} |e_n^f><r_n|, r_n non-increasing, e_n^f ascending.
CMatrix target_unitary(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                       const RVector& phases_phi);

/// Phases in which the drive phases are quoted by default. With them every
/// overlap <r_n|U0^dag(t_f) R|r_n> is real and non-negative, i.e. the
/// dynamical phases of the bare drive are absorbed. Zero overlaps get phase 0,
/// except the first, which fixes det(U0^dag R) = 1.
RVector reference_phases(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                         const CMatrix& u0_final);

enum class PhaseFrame {
  aligned,  // phases_phi are offsets from reference_phases
  raw,      // phases_phi enter R directly
};

struct DriveSynthesis {
  CMatrix chi;
  RVector thetas;
  RVector phases_phi;    // as supplied, in `frame`
  RVector phases_total;  // phases actually entering R
  PhaseFrame frame = PhaseFrame::aligned;
  std::vector<CMatrix> v_samples;
  double w = 0.0;
  double w_min = 0.0;
  DensityMatrix final_state;
  DensityMatrix target_passive;
  bool branch_warning = false;
  std::shared_ptr<const PropagatorTrace> trace;
};

/// V(t) = -f'(t) U_0(t) chi U_0(t)^dag with exp(i chi) = U_0(t_f)^dag R.
DriveSynthesis synthesize_drive(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                                const HamiltonianOp& h_f, const Schedule& sched,
                                const RVector& phases_phi, PhaseFrame frame = PhaseFrame::aligned);

/// Same, reusing an existing trace of the bare drive.
DriveSynthesis synthesize_drive(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                                const HamiltonianOp& h_f, const Schedule& sched,
                                std::shared_ptr<const PropagatorTrace> trace,
                                const RVector& phases_phi, PhaseFrame frame = PhaseFrame::aligned);

enum class PhaseMode { analytic2, grid, monte_carlo };

struct PhaseSearch {
  PhaseMode mode = PhaseMode::analytic2;
  int grid_resolution = 64;
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};

struct PhaseOptimum {
  RVector phases;       // aligned frame; empty for Monte Carlo
  double w = 0.0;       // minimum, or mean for Monte Carlo
  double stderr_ = 0.0; // Monte Carlo standard error of the mean
};

/// Minimises (or averages, for Monte Carlo) (sum theta^2)^{1/2} / tau over the
/// free phases of R.
PhaseOptimum optimize_phases(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                             const HamiltonianOp& h_f, const Schedule& sched,
                             const PhaseSearch& search);

/// Variant for a known U_0(t_f).
PhaseOptimum optimize_phases_given_u0(const DensityMatrix& rho_i, const HamiltonianOp& h_f,
                                      const CMatrix& u0_final, double tau,
                                      const PhaseSearch& search);

/// (sum theta_n^2)^{1/2} for the unitary U_0^dag R at the given aligned phases.
double theta_norm(const DensityMatrix& rho_i, const HamiltonianOp& h_f, const CMatrix& u0_final,
                  const RVector& aligned_phases);

struct VerificationResult {
  double state_distance;         // trace distance to the passive target
  double final_energy_residual;  // |Tr(rho_f H_f) - sum r_n e_n^f|
  double work_residual;          // |int Tr(rho dH/dt) - (E_f - E_i)|
  double endpoint_residual;      // max entry of H(t_i) - H_i and H(t_f) - H_f
  bool passed;
};

/// Propagates H_0 + V on the synthesis grid. Throws VerificationFailed when
/// strict and a contract is missed (state 1e-6, energy 1e-8 * width, work 1e-6
/// * width, endpoints 1e-12).
VerificationResult verify_drive(const DriveSynthesis& synth, const DensityMatrix& rho_i,
                                const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                                const Schedule& sched, bool strict = true);

struct CounterdiabaticCost {
  double w_sta;                          // (1/tau) int (sum_n ||d pi_n/dt||_F^2)^{1/2}
  std::vector<double> norm_trace;
  double w_sta_frobenius;                // (1/tau) int ||H_CD||_F
  std::vector<double> frobenius_trace;
  std::vector<double> times;
  double closed_form;                    // |mu| Omega_bar / tau, NaN for interp schedules
  double residual;                       // |w_sta - closed_form|
};

CounterdiabaticCost counterdiabatic_cost(const Schedule& sched);
CounterdiabaticCost counterdiabatic_cost(const HamiltonianOp& h_i, const HamiltonianOp& h_f,
                                         const Schedule& sched);

/// Composite Simpson on a uniform grid (3/8 rule on the last panel when the
/// interval count is odd).
double simpson(const std::vector<double>& y, double h);

}  // namespace ergo
