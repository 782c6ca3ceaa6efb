#include "ergo/ergotropy.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ergo {

namespace {

void require_dims(const DensityMatrix& rho, const HamiltonianOp& h_i, const HamiltonianOp& h_f) {
  require_same_dim(rho, h_i);
  require_same_dim(rho, h_f);
}

// Descending-sorted vector paired with ascending energies.
double passive_on(const RVector& p, const HamiltonianOp& h) {
  return passive_energy(p, h.energies());
}

}  // namespace

double energy_scale(const HamiltonianOp& h_f) {
  const double w = h_f.width();
  return w > 0.0 ? w : 1.0;
}

double noncyclic_ergotropy(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                           const HamiltonianOp& h_f) {
  require_dims(rho_i, h_i, h_f);
  return energy(rho_i, h_i) - passive_on(rho_i.spectrum().values, h_f);
}

Decomposition decompose(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                        const HamiltonianOp& h_f) {
  require_dims(rho_i, h_i, h_f);
  const RVector pops = populations(rho_i, h_i);
  const double e_i = energy(rho_i, h_i);
  const double e_dpas_i = passive_on(pops, h_i);    // passive dephased state on H_i
  const double e_dpas_f = passive_on(pops, h_f);    // ... moved adiabatically to H_f
  const double e_pas_f = passive_on(rho_i.spectrum().values, h_f);
  return Decomposition{e_i - e_dpas_i, e_dpas_i - e_dpas_f, e_dpas_f - e_pas_f};
}

double coherent_entropy_identity_check(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                                       const HamiltonianOp& h_f, double beta) {
  require_dims(rho_i, h_i, h_f);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::ParamOutOfRange, "beta must be positive and finite");
  }
  const Decomposition dec = decompose(rho_i, h_i, h_f);
  const DensityMatrix th = thermal_state(h_f, beta);
  const DensityMatrix dpas_f = passive_state(dephase(rho_i, h_i), h_f);
  const DensityMatrix pas_f = passive_state(rho_i, h_f);
  const double rhs = (coherence_rel_entropy(rho_i, h_i) + relative_entropy(dpas_f, th) -
                      relative_entropy(pas_f, th)) /
                     beta;
  return std::abs(dec.e_coh - rhs);
}

DeltaResult delta_noncyclic(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                            const HamiltonianOp& h_f) {
  require_dims(rho_i, h_i, h_f);
  const ThermalSolveResult th = solve_beta_for_energy(h_i, energy(rho_i, h_i));
  const RVector p_th = thermal_populations(h_i, th.beta);
  const double delta = passive_on(p_th, h_f) - passive_on(rho_i.spectrum().values, h_f);
  return DeltaResult{delta, th.negative_temperature(), th.beta};
}

double gain_g(const DensityMatrix& rho_i, const HamiltonianOp& h_i, const HamiltonianOp& h_f) {
  require_dims(rho_i, h_i, h_f);
  // Adiabatic transport keeps the population of the n-th level of H_i on the
  // n-th level of H_f.
  const double transported = populations(rho_i, h_i).dot(h_f.energies());
  return transported - passive_on(rho_i.spectrum().values, h_f);
}

UpperBound upper_bound_delta(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                             const HamiltonianOp& h_f) {
  require_dims(rho_i, h_i, h_f);
  const ThermalSolveResult same_energy = solve_beta_for_energy(h_i, energy(rho_i, h_i));
  const double s_i = von_neumann_entropy(rho_i);
  const ThermalSolveResult same_entropy = solve_beta_for_entropy(h_f, s_i);
  if (!(same_entropy.beta > 0.0)) {
    throw Error(ErrorKind::NegativeBeta,
                "same-entropy thermal state of H_f has beta = " +
                    std::to_string(same_entropy.beta) + "; the bound needs beta_i > 0");
  }
  const DensityMatrix pas_th_f = passive_state(same_energy.state, h_f);
  const double gap = von_neumann_entropy(same_energy.state) - s_i;
  const double slack = 1e-10;
  if (gap < -slack) {
    throw Error(ErrorKind::VerificationFailed,
                "entropy gap " + std::to_string(gap) + " is negative");
  }
  const double bound = energy(pas_th_f, h_f) - energy(same_entropy.state, h_f);
  const double rel = relative_entropy(pas_th_f, same_entropy.state);
  const double via_entropy = (gap + rel) / same_entropy.beta;
  return UpperBound{bound, gap, rel, same_entropy.beta, std::abs(bound - via_entropy)};
}

CounterexampleB counterexample_appendix_b(double beta, double e2i, double e2f) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::ParamOutOfRange, "beta must be positive and finite");
  }
  if (!(e2i > 0.0 && e2i < 1.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "e2i must lie in (0, 1)");
  }
  if (!(e2f >= 0.0 && e2f <= 1.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "e2f must lie in [0, 1]");
  }
  const RVector e_i = (RVector(3) << 0.0, e2i, 1.0).finished();
  const RVector e_f = (RVector(3) << 0.0, e2f, 1.0).finished();
  const HamiltonianOp h_i = HamiltonianOp::diagonal(e_i);
  const HamiltonianOp h_f = HamiltonianOp::diagonal(e_f);

  const RVector p = thermal_populations(h_i, beta);
  const double alpha = std::exp(-beta) * beta * (e2i - e2i * e2i) / 3.0;
  RVector q(3);
  q(2) = p(2) + alpha;
  q(1) = p(1) - alpha / e2i;
  q(0) = 1.0 - q(1) - q(2);
  if ((q.array() < 0.0).any()) {
    throw Error(ErrorKind::ParamOutOfRange, "construction yields a negative population");
  }
  const double residual = std::abs(q.dot(e_i) - p.dot(e_i));
  if (residual > 1e-12) {
    throw Error(ErrorKind::VerificationFailed,
                "constructed state energy differs from thermal by " + std::to_string(residual));
  }
  const DeltaResult d = delta_noncyclic(DensityMatrix::diagonal(q), h_i, h_f);
  return CounterexampleB{ProbVector(q), ProbVector(p), alpha, d.delta, residual};
}

ErgotropyReport make_report(const DensityMatrix& rho_i, const HamiltonianOp& h_i,
                            const HamiltonianOp& h_f) {
  require_dims(rho_i, h_i, h_f);
  ErgotropyReport r;
  r.e_nc = noncyclic_ergotropy(rho_i, h_i, h_f);
  const Decomposition dec = decompose(rho_i, h_i, h_f);
  r.e_inc = dec.e_inc;
  r.e_pas = dec.e_pas;
  r.e_coh = dec.e_coh;
  r.gain_g = gain_g(rho_i, h_i, h_f);

  try {
    const DeltaResult d = delta_noncyclic(rho_i, h_i, h_f);
    r.delta_e_nc = d.delta;
    r.beta_same_energy = d.beta_same_energy;
    r.negative_temperature_flag = d.negative_temperature;
    const RVector p_th = thermal_populations(h_i, d.beta_same_energy);
    r.majorization_holds = majorizes(ProbVector(rho_i.spectrum().values), ProbVector(p_th));
  } catch (const Error& e) {
    // Energy on the edge of the spectrum: no finite-temperature reference.
    if (e.kind() != ErrorKind::EnergyOutOfRange) throw;
  }
  if (r.delta_e_nc && !r.negative_temperature_flag) {
    try {
      r.upper_bound = upper_bound_delta(rho_i, h_i, h_f).bound;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NegativeBeta) throw;
    }
  }
  if (r.delta_e_nc && !r.negative_temperature_flag) {
    r.reported_gain_kind = "delta_e_nc";
    r.reported_gain = *r.delta_e_nc;
  } else {
    r.reported_gain_kind = "gain_g";
    r.reported_gain = r.gain_g;
  }
  return r;
}

}  // namespace ergo
