#pragma once

// Energetic figures of merit for a non-cyclic process H_i -> H_f.

#include <optional>
#include <string>

#include "ergo/states.hpp"

namespace ergo {

/// Tolerance scale for energies: spectral width of h_f, or 1 for a flat spectrum.
double energy_scale(const HamiltonianOp& h_f);

/// Tr(rho h_i) minus the passive energy of rho on h_f. Positive values are
/// extractable work, negative ones the minimal energy that must be injected.
double noncyclic_ergotropy(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                           const HamiltonianOp& h_f);

struct Decomposition {
  double e_inc;
  double e_pas;
  double e_coh;
};

/// Incoherent, passive and coherent contributions, in that order.
Decomposition decompose(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                        const HamiltonianOp& h_f);

/// |e_coh - (C(rho) + S[pas(rho_D)_f | th_f] - S[pas(rho)_f | th_f]) / beta|
/// with th_f the Gibbs state of h_f at the given beta > 0.
double coherent_entropy_identity_check(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                                       const HamiltonianOp& h_f, double beta);

struct DeltaResult {
  double delta;
  bool negative_temperature;
  double beta_same_energy;
};

/// E_nc(rho_i) - E_nc(rho_th) with rho_th the Gibbs state of h_i at the same
/// energy. Inverted populations (beta < 0) are computed and flagged.
DeltaResult delta_noncyclic(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                            const HamiltonianOp& h_f);

/// Cyclic ergotropy of the adiabatically transported state with respect to h_f.
double gain_g(const DensityMatrix& rho_i, const HamiltonianOp& h_i, const HamiltonianOp& h_f);

struct UpperBound {
  double bound;                  // Tr[pas(rho_th)_f H_f] - Tr[th_f(beta_i) H_f]
  double entropy_gap;            // S(rho_th) - S(rho_i)
  double relative_entropy_term;  // S[pas(rho_th)_f | th_f(beta_i)]
  double beta_i;                 // same-entropy inverse temperature on h_f
  double crosscheck_residual;    // |bound - (gap + rel) / beta_i|
};

UpperBound upper_bound_delta(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                             const HamiltonianOp& h_f);

struct CounterexampleB {
  ProbVector q;
  ProbVector p_th;
  double alpha;
  double delta;
  double energy_residual;
};

/// Three-level diagonal state with the energy of a thermal state but a smaller
/// non-cyclic ergotropy. Levels (0, e2i, 1) initially and (0, e2f, 1) finally.
CounterexampleB counterexample_appendix_b(double beta, double e2i, double e2f);

struct ErgotropyReport {
  double e_nc = 0.0;
  double e_inc = 0.0;
  double e_pas = 0.0;
  double e_coh = 0.0;
  std::optional<double> delta_e_nc;
  double gain_g = 0.0;
  std::optional<double> upper_bound;
  bool majorization_holds = false;
  std::optional<double> beta_same_energy;
  bool negative_temperature_flag = false;

  // Quantity a caller should quote as "the gain": delta_e_nc normally, G when
  // the same-energy reference has negative temperature or does not exist.
  std::string reported_gain_kind;
  double reported_gain = 0.0;
};

ErgotropyReport make_report(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                            const HamiltonianOp& h_f);

}  // namespace ergo
