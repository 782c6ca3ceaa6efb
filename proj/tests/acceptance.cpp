// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "ergo/cli/scenarios.hpp"
#include "ergo/drives.hpp"
#include "ergo/ergotropy.hpp"
#include "ergo/tls.hpp"
#include "oracles.hpp"

using namespace ergo;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// State with prescribed populations on a diagonal Hamiltonian and random coherences.
CMatrix with_coherences(const RVector& pops, oracle::Rng& rng, double strength) {
  const int d = static_cast<int>(pops.size());
  const CMatrix g = oracle::ginibre(d, rng);
  const CMatrix m = g * g.adjoint();
  CMatrix c(d, d);
  for (int r = 0; r < d; ++r)
    for (int k = 0; k < d; ++k) c(r, k) = m(r, k) / std::sqrt(m(r, r).real() * m(k, k).real());
  c = strength * c + (1.0 - strength) * CMatrix::Identity(d, d);
  const CMatrix s = pops.cwiseSqrt().cast<cplx>().asDiagonal();
  const CMatrix rho = s * c * s;
  return 0.5 * (rho + rho.adjoint());
}

// ---------------------------------------------------------------- 1

Outcome counterexample() {
  const CounterexampleB c = counterexample_appendix_b(1.0, 0.9, 0.5);
  const double pth[] = {0.564, 0.229, 0.207};
  const double q[] = {0.565, 0.217, 0.218};
  double dev = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    dev = std::max({dev, std::abs(c.p_th[k] - pth[k]), std::abs(c.q[k] - q[k])});
  }
  bool signs = true;
  for (double e2f : {0.1, 0.3, 0.5, 0.7, 0.85}) signs &= counterexample_appendix_b(1.0, 0.9, e2f).delta < 0.0;
  const double at95 = counterexample_appendix_b(1.0, 0.9, 0.95).delta;
  signs &= at95 > 0.0;
  return {dev <= 0.001 && signs,
          fmt("max |p_th, q - quoted| = %.2e (tol 1e-3), delta<0 on {0.1..0.85}: %s, delta(0.95) = %+.5f",
              dev, signs ? "yes" : "no", at95)};
}

// ---------------------------------------------------------------- 2

Outcome crossover() {
  cli::Fig1Config cfg;  // 200 x 200, tau = 10 / (lam_f omega)
  const cli::Fig1Result r = cli::run_fig1(cfg, 0, 1);
  const double expect_swap = pi / (std::sqrt(2.0) * cfg.tau);
  const double swap_err = std::abs(r.swap_cost - expect_swap);
  const bool cross_ok = r.crossover_p && std::abs(*r.crossover_p - 0.025) <= 0.005;
  return {cross_ok && swap_err <= 1e-10,
          fmt("crossover p = %.5f (want 0.025 +- 0.005), swap cost error %.1e (tol 1e-10), %zu points",
              r.crossover_p ? *r.crossover_p : -1.0, swap_err, r.rows.size())};
}

// ---------------------------------------------------------------- 3

Outcome phase_average() {
  cli::Fig1Config cfg;
  cfg.p_points = 10;
  cfg.c_points = 10;
  cfg.mc_samples = 100000;
  const cli::Fig1Result r = cli::run_fig1(cfg, 0, 1);
  const double lo = 0.77 * pi / cfg.tau;
  const double hi = 0.89 * pi / cfg.tau;
  double mn = INFINITY, mx = 0.0, worst_se = 0.0;
  int outside = 0;
  const cli::Fig1Row* worst = nullptr;
  for (const auto& row : r.rows) {
    if (row.w_mc_mean < mn) worst = &row;
    mn = std::min(mn, row.w_mc_mean);
    mx = std::max(mx, row.w_mc_mean);
    worst_se = std::max(worst_se, row.w_mc_stderr);
    if (row.w_mc_mean < lo || row.w_mc_mean > hi) ++outside;
  }
  const double unit = pi / cfg.tau;
  return {outside == 0 && worst_se < 0.005 * unit,
          fmt("mean in [%.4f, %.4f] pi/tau (want [0.77, 0.89]), %d/%zu points outside, lowest at "
              "p = %.3f |c| = %.3f, max stderr %.1e pi/tau (tol 5e-3)",
              mn / unit, mx / unit, outside, r.rows.size(), worst ? worst->p_i : 0.0,
              worst ? worst->c_abs : 0.0, worst_se / unit)};
}

// ---------------------------------------------------------------- 4

Outcome drive_correctness() {
  oracle::Rng rng(1004);
  double worst_dist = 0.0, worst_energy = 0.0, worst_endpoint = 0.0;
  int failures = 0;
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 3;
    const DensityMatrix rho(oracle::random_density(d, rng));
    const HamiltonianOp hi(oracle::random_hermitian(d, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    RVector phi(d);
    for (int n = 0; n < d; ++n) phi(n) = oracle::uniform(rng, -pi, pi);
    const Schedule sched = Schedule::interp(0.0, oracle::uniform(rng, 0.5, 2.0), 256);
    const DriveSynthesis syn = synthesize_drive(rho, hi, hf, sched, phi);
    const VerificationResult v = verify_drive(syn, rho, hi, hf, sched, false);
    const double scale = energy_scale(hf);
    worst_dist = std::max(worst_dist, v.state_distance);
    worst_energy = std::max(worst_energy, v.final_energy_residual / scale);
    worst_endpoint = std::max(worst_endpoint, v.endpoint_residual);
    if (v.state_distance > 1e-6 || v.final_energy_residual > 1e-8 * scale || v.endpoint_residual > 1e-12) {
      ++failures;
    }
  }
  return {failures == 0,
          fmt("50 instances, worst trace distance %.1e (tol 1e-6), energy %.1e x width (tol 1e-8), "
              "endpoints %.1e (tol 1e-12)",
              worst_dist, worst_energy, worst_endpoint)};
}

// ---------------------------------------------------------------- 5

Outcome closed_vs_numeric() {
  oracle::Rng rng(1005);
  double worst_td = 0.0, worst_sta = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double mu = oracle::uniform(rng, 0.0, 4.0);
    const double ob = oracle::uniform(rng, 0.0, 4.0);
    const double tau = 1.0;
    const Schedule sched = Schedule::rotating(0.0, tau, 200, {mu, ob / tau, ob / tau});
    const HamiltonianOp hi(sched.rotating_h(0.0));
    const HamiltonianOp hf(sched.rotating_h(tau));
    const CMatrix u_num = propagate_u0(hi, hf, sched).u_samples.back();
    const CMatrix u_cf = tls::constmu_propagator(mu, ob);
    const CMatrix rho = oracle::random_density(2, rng);
    worst_td = std::max(worst_td, trace_distance(CMatrix(u_num * rho * u_num.adjoint()),
                                                 CMatrix(u_cf * rho * u_cf.adjoint())));
    // Omega_bar = 0 leaves a degenerate spectrum and nothing to track
    if (ob > 0.0) {
      const double w = counterdiabatic_cost(sched.with_steps(2000)).w_sta;
      worst_sta = std::max(worst_sta, std::abs(w - std::abs(mu) * ob / tau));
    }
  }
  double worst_cs = 0.0;
  for (double ts : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    const Schedule cs = Schedule::cos_sin(1.0, 1.0, ts, 4000);
    worst_cs = std::max(worst_cs, std::abs(counterdiabatic_cost(cs).w_sta - pi / (2.0 * ts)));
  }
  return {worst_td <= 1e-8 && worst_sta <= 1e-6 && worst_cs <= 1e-8,
          fmt("propagator trace distance %.1e (tol 1e-8), w_sta error %.1e (tol 1e-6), "
              "cos/sin w_sta error %.1e (tol 1e-8)",
              worst_td, worst_sta, worst_cs)};
}

// ---------------------------------------------------------------- 6

Outcome property_suites() {
  constexpr int n = 10000;
  oracle::Rng rng(1006);
  std::string fails;

  // passive-state global minimality
  double min_gap = INFINITY, brute_err = 0.0;
  for (int k = 0; k < n; ++k) {
    const int d = 1 + k % 5;
    const DensityMatrix rho(oracle::random_density(d, rng));
    const HamiltonianOp h(oracle::random_hermitian(d, rng));
    const double pas = energy(passive_state(rho, h), h);
    brute_err = std::max(brute_err, std::abs(pas - oracle::passive_energy_bruteforce(
                                                       oracle::herm_values(rho.matrix()),
                                                       oracle::herm_values(h.matrix()))));
    const CMatrix u = oracle::haar_unitary(d, rng);
    min_gap = std::min(min_gap, (u * rho.matrix() * u.adjoint() * h.matrix()).trace().real() - pas);
  }
  if (brute_err > 1e-12 || min_gap < -1e-12) fails += " minimality";

  // majorization implies a non-negative advantage
  int majorizing = 0;
  double min_delta = INFINITY;
  for (int k = 0; k < n; ++k) {
    const int d = 2 + k % 4;
    const HamiltonianOp hi = HamiltonianOp::diagonal(oracle::random_levels(d, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    // coherent thermal states always majorize; generic ones only sometimes
    const RVector pth = thermal_populations(hi, oracle::uniform(rng, 0.1, 3.0));
    const DensityMatrix rho(k % 3 == 0 ? oracle::random_density(d, rng)
                                       : with_coherences(pth, rng, oracle::uniform(rng, 0.0, 1.0)));
    DeltaResult dr{};
    try {
      dr = delta_noncyclic(rho, hi, hf);
    } catch (const Error&) {
      continue;
    }
    if (dr.beta_same_energy <= 0.0) continue;
    if (!majorizes(ProbVector(rho.spectrum().values), ProbVector(thermal_populations(hi, dr.beta_same_energy)))) {
      continue;
    }
    ++majorizing;
    min_delta = std::min(min_delta, dr.delta);
  }
  if (min_delta < -1e-12) fails += " majorization";

  // decomposition, coherent identity, theta norm, G
  double dec_err = 0.0, ident = 0.0, theta_excess = -INFINITY, min_g = INFINITY, coh_err = 0.0;
  for (int k = 0; k < n; ++k) {
    const int d = 2 + k % 4;
    const DensityMatrix rho(oracle::random_density(d, rng));
    const HamiltonianOp hi(oracle::random_hermitian(d, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    const Decomposition dec = decompose(rho, hi, hf);
    dec_err = std::max(dec_err, std::abs(dec.e_inc + dec.e_pas + dec.e_coh - noncyclic_ergotropy(rho, hi, hf)));
    ident = std::max({ident, coherent_entropy_identity_check(rho, hi, hf, 1.0),
                      coherent_entropy_identity_check(rho, hi, hf, 2.0)});
    RVector phi(d);
    for (int m = 0; m < d; ++m) phi(m) = oracle::uniform(rng, -pi, pi);
    const double tn = theta_norm(rho, hf, oracle::haar_unitary(d, rng), phi);
    theta_excess = std::max(theta_excess, tn - pi * std::sqrt(static_cast<double>(d)));
    min_g = std::min(min_g, gain_g(rho, hi, hf));

    const HamiltonianOp hd = HamiltonianOp::diagonal(oracle::random_levels(d, rng));
    const DensityMatrix coh(with_coherences(thermal_populations(hd, oracle::uniform(rng, 0.2, 3.0)), rng,
                                            oracle::uniform(rng, 0.1, 1.0)));
    coh_err = std::max(coh_err, std::abs(gain_g(coh, hd, hf) - delta_noncyclic(coh, hd, hf).delta));
  }
  if (dec_err > 1e-10) fails += " decomposition";
  if (ident > 1e-9) fails += " coherent-identity";
  if (theta_excess > 0.0) fails += " theta-norm";
  if (min_g < -1e-12 || coh_err > 1e-10) fails += " gain";

  return {fails.empty() && majorizing > 0,
          fmt("brute %.1e, min unitary gap %.1e; %d majorizing, min delta %.1e; decomposition %.1e; "
              "identity %.1e; theta norm - pi sqrt(d) <= %.2f; min G %.1e, G - delta %.1e%s%s",
              brute_err, min_gap, majorizing, min_delta, dec_err, ident, theta_excess, min_g, coh_err,
              fails.empty() ? "" : "; failing:", fails.c_str())};
}

// ---------------------------------------------------------------- 7

Outcome bound_checks() {
  oracle::Rng rng(1007);
  double worst_violation = -INFINITY, min_gap_s = INFINITY, worst_sat = 0.0;
  int done = 0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 2 + k % 2;
    const HamiltonianOp hi = HamiltonianOp::diagonal(oracle::random_levels(d, rng));
    const HamiltonianOp hf(oracle::random_hermitian(d, rng));
    const DensityMatrix rho(with_coherences(thermal_populations(hi, oracle::uniform(rng, 0.3, 3.0)), rng,
                                            oracle::uniform(rng, 0.0, 0.9)));
    const UpperBound ub = upper_bound_delta(rho, hi, hf);
    const double delta = delta_noncyclic(rho, hi, hf).delta;
    worst_violation = std::max(worst_violation, delta - ub.bound);
    min_gap_s = std::min(min_gap_s, ub.entropy_gap);
    if (d == 2) worst_sat = std::max(worst_sat, std::abs(ub.bound - delta));
    ++done;
  }
  return {worst_violation <= 1e-10 && min_gap_s >= -1e-12 && worst_sat <= 1e-10,
          fmt("%d instances, max(delta - bound) %.1e, min entropy gap %.1e, qubit saturation gap %.1e "
              "(tol 1e-10)",
              done, worst_violation, min_gap_s, worst_sat)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;  // 0: no runtime requirement
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"three-level counterexample", 1.0, counterexample},
      {"commuting-drive crossover", 10.0, crossover},
      {"phase-averaged cost", 60.0, phase_average},
      {"drive correctness", 0.0, drive_correctness},
      {"closed-form vs numeric dynamics", 0.0, closed_vs_numeric},
      {"property suites", 0.0, property_suites},
      {"bound checks", 0.0, bound_checks},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) {
      timing += fmt(" (budget %.0f s)", c.budget_s);
      if (secs >= c.budget_s) {
        o.pass = false;
        o.detail += "; over runtime budget";
      }
    }
    if (!o.pass) ++failed;
    std::printf("%s AC%d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
