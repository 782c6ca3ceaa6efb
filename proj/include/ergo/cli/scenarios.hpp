#pragma once

// Scenario runners. Each figure sweep returns plain rows computed by library
// calls only, so any row can be recomputed outside the CLI.

#include <iosfwd>
#include <optional>

#include "ergo/cli/config.hpp"
#include "ergo/tls.hpp"

namespace ergo::cli {

// ---------------------------------------------------------------- fig1

/// Commuting drive H_i, H_f proportional to sz, energies in units of lam_f omega.
struct Fig1Config {
  int p_points = 200;
  int c_points = 200;     // |c| = k/(c_points-1) * sqrt(p(1-p))
  double lam_f_omega = 1.0;
  double tau = 10.0;      // 1/tau = lam_f omega / 10
  std::int64_t mc_samples = 0;  // 0 disables the phase-averaged columns

  static Fig1Config from_json(const json& doc);
};

struct Fig1Row {
  double p_i, c_abs, delta_enc, g, w_min, w_mc_mean, w_mc_stderr;
};

struct Fig1Result {
  std::vector<Fig1Row> rows;  // p-major
  /// Smallest grid p > 0 at maximal coherence with delta_enc >= w_min (at p = 0
  /// both vanish).
  std::optional<double> crossover_p;
  double swap_cost = 0.0;  // w_min at p = 1, c = 0
};

/// Per-point computation shared by the sweep and the tests.
Fig1Row fig1_point(double p, double c_abs, const Fig1Config& cfg, std::uint64_t mc_seed);
Fig1Result run_fig1(const Fig1Config& cfg, std::uint64_t seed, int threads);

// ---------------------------------------------------------------- fig2

/// cos/sin schedule, energies in units of omega0 = 1.
struct Fig2Config {
  double p_i = 0.4;
  cplx c_i{0.4898979485566356, 0.0};  // sqrt(0.4 * 0.6)
  Axis omega0_tau{0.1, 10.0, 50};
  Axis omega0_taustar{0.1, 10.0, 50};
  bool numeric = false;  // add propagated w_sta / w_min columns
  int steps = 4096;

  static Fig2Config from_json(const json& doc);
};

struct Fig2Row {
  double omega0_tau, omega0_taustar, w_sta, w_min_lower, delta_enc, g, delta_e_sta;
  double w_sta_numeric = 0.0;  // only with numeric = true
  double w_min_numeric = 0.0;
};

Fig2Row fig2_point(double omega0_tau, double omega0_taustar, const Fig2Config& cfg);
std::vector<Fig2Row> run_fig2(const Fig2Config& cfg, int threads);

// ---------------------------------------------------------------- fig3

/// Constant-mu drive over (mu, Omega_bar) with Omega_f = omega_f_tau / tau.
struct Fig3Config {
  double p_i = 0.4;
  cplx c_i{0.4898979485566356, 0.0};
  Axis mu{0.0, 4.0, 41};
  Axis omega_bar{0.0, 4.0, 41};
  double tau = 1.0;
  double omega_f_tau = 20.0;

  static Fig3Config from_json(const json& doc);
};

struct Fig3Row {
  double mu, omega_bar, w_sta, w_min_lower, w_min_upper, delta_enc, delta_e_sta, w_min_full;
};

Fig3Row fig3_point(double mu, double omega_bar, const Fig3Config& cfg);
std::vector<Fig3Row> run_fig3(const Fig3Config& cfg, int threads);

/// Final Hamiltonian of the rotating drive with the given final amplitude and angle.
HamiltonianOp rotating_hamiltonian(double big_omega, double angle);

// ---------------------------------------------------------------- single runs

json run_ergotropy(const RunConfig& cfg);
json run_counterexample(const RunConfig& cfg);
/// Synthesis, optional verification and counterdiabatic comparison. Writes the
/// V(t) samples to doc["v_csv"] when given.
json run_drive_synth(const RunConfig& cfg);

// ---------------------------------------------------------------- output

void write_csv(std::ostream& os, const Fig1Result& r);
void write_csv(std::ostream& os, const std::vector<Fig2Row>& rows, bool numeric);
void write_csv(std::ostream& os, const std::vector<Fig3Row>& rows);

}  // namespace ergo::cli
