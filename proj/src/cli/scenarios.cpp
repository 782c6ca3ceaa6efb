#include "ergo/cli/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "ergo/cli/pool.hpp"
#include "ergo/rng.hpp"

namespace ergo::cli {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

DensityMatrix tls_density(const tls::TlsState& s) {
  s.validate();
  return DensityMatrix(s.matrix());
}

// A state whose energy sits on the edge of the spectrum is an eigenstate and is
// its own (zero or infinite temperature) reference, so the difference is zero.
double delta_or_edge(const DensityMatrix& rho, const HamiltonianOp& h_i, const HamiltonianOp& h_f) {
  try {
    return delta_noncyclic(rho, h_i, h_f).delta;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EnergyOutOfRange) throw;
    return 0.0;
  }
}

void put_row(std::ostream& os, std::initializer_list<double> xs) {
  bool first = true;
  for (double x : xs) {
    if (!first) os << ',';
    os << format_real(x);
    first = false;
  }
  os << '\n';
}

}  // namespace

HamiltonianOp rotating_hamiltonian(double big_omega, double angle) {
  return HamiltonianOp(0.5 * big_omega * (std::cos(angle) * pauli_z() + std::sin(angle) * pauli_x()));
}

// ---------------------------------------------------------------- fig1

Fig1Config Fig1Config::from_json(const json& doc) {
  Fig1Config c;
  c.p_points = get_int(doc, "p_points", c.p_points);
  c.c_points = get_int(doc, "c_points", c.c_points);
  c.lam_f_omega = get_real(doc, "lam_f_omega", c.lam_f_omega);
  c.tau = get_real(doc, "tau", 10.0 / c.lam_f_omega);
  c.mc_samples = get_int64(doc, "mc_samples", c.mc_samples);
  if (c.p_points < 2 || c.c_points < 1) {
    throw Error(ErrorKind::InvalidInput, "fig1 needs p_points >= 2 and c_points >= 1");
  }
  if (!(c.lam_f_omega > 0.0) || !(c.tau > 0.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "lam_f_omega and tau must be positive");
  }
  if (c.mc_samples == 1 || c.mc_samples < 0) {
    throw Error(ErrorKind::ParamOutOfRange, "mc_samples must be 0 or at least 2");
  }
  return c;
}

Fig1Row fig1_point(double p, double c_abs, const Fig1Config& cfg, std::uint64_t mc_seed) {
  const tls::TlsState s{p, std::min(c_abs, std::sqrt(std::max(0.0, p * (1.0 - p))))};
  const DensityMatrix rho = tls_density(s);
  RVector e(2);
  e << 0.5 * cfg.lam_f_omega, -0.5 * cfg.lam_f_omega;
  const HamiltonianOp h = HamiltonianOp::diagonal(e);

  Fig1Row row{p, std::abs(s.c), delta_or_edge(rho, h, h), gain_g(rho, h, h),
              tls::example1_wmin(s, cfg.tau), nan, nan};
  if (cfg.mc_samples > 0) {
    // commuting drive: U0 only shifts the phases, which are averaged anyway
    PhaseSearch search{PhaseMode::monte_carlo, 64, cfg.mc_samples, mc_seed};
    const PhaseOptimum mc =
        optimize_phases_given_u0(rho, h, CMatrix::Identity(2, 2), cfg.tau, search);
    row.w_mc_mean = mc.w;
    row.w_mc_stderr = mc.stderr_;
  }
  return row;
}

Fig1Result run_fig1(const Fig1Config& cfg, std::uint64_t seed, int threads) {
  const std::vector<double> ps = Axis{0.0, 1.0, cfg.p_points}.values();
  const auto nc = static_cast<std::size_t>(cfg.c_points);
  Fig1Result out;
  out.rows.resize(ps.size() * nc);
  parallel_for(out.rows.size(), threads, [&](std::size_t k) {
    const double p = ps[k / nc];
    const double frac = nc == 1 ? 0.0 : static_cast<double>(k % nc) / static_cast<double>(nc - 1);
    out.rows[k] = fig1_point(p, frac * std::sqrt(p * (1.0 - p)), cfg, derive_seed(seed, k));
  });
  for (std::size_t i = 1; i < ps.size(); ++i) {
    const Fig1Row& r = out.rows[i * nc + nc - 1];
    if (r.delta_enc >= r.w_min) {
      out.crossover_p = r.p_i;
      break;
    }
  }
  out.swap_cost = tls::example1_wmin(tls::TlsState{1.0, 0.0}, cfg.tau);
  return out;
}

// ---------------------------------------------------------------- fig2

Fig2Config Fig2Config::from_json(const json& doc) {
  Fig2Config c;
  c.p_i = get_real(doc, "p_i", c.p_i);
  c.c_i = get_complex(doc, "c_i", c.c_i);
  c.omega0_tau = get_axis(doc, "omega0_tau", c.omega0_tau);
  c.omega0_taustar = get_axis(doc, "omega0_taustar", c.omega0_taustar);
  c.numeric = get_bool(doc, "numeric", c.numeric);
  c.steps = get_int(doc, "steps", c.steps);
  if (!(c.omega0_tau.lo > 0.0) || !(c.omega0_taustar.lo > 0.0)) {
    throw Error(ErrorKind::ParamOutOfRange, "omega0 tau and omega0 tau* must be positive");
  }
  tls::TlsState{c.p_i, c.c_i}.validate();
  return c;
}

Fig2Row fig2_point(double omega0_tau, double omega0_taustar, const Fig2Config& cfg) {
  const tls::TlsState s{cfg.p_i, cfg.c_i};
  const DensityMatrix rho = tls_density(s);
  const tls::MuDynParams par = tls::MuDynParams::cos_sin(1.0, omega0_tau, omega0_taustar);
  const HamiltonianOp h_i = rotating_hamiltonian(1.0, 0.0);
  const HamiltonianOp h_f = rotating_hamiltonian(1.0, pi * omega0_tau / (2.0 * omega0_taustar));

  Fig2Row row{omega0_tau,
              omega0_taustar,
              tls::w_sta_closed(par),
              tls::example2_theta_split(s, par).lower,
              delta_noncyclic(rho, h_i, h_f).delta,
              gain_g(rho, h_i, h_f),
              tls::delta_e_sta(cfg.p_i, par)};
  if (cfg.numeric) {
    const Schedule sched = Schedule::cos_sin(1.0, omega0_tau, omega0_taustar, cfg.steps);
    const HamiltonianOp si(sched.rotating_h(sched.t_i()));
    const HamiltonianOp sf(sched.rotating_h(sched.t_f()));
    row.w_sta_numeric = counterdiabatic_cost(sched).w_sta;
    row.w_min_numeric = optimize_phases(rho, si, sf, sched, PhaseSearch{}).w;
  }
  return row;
}

std::vector<Fig2Row> run_fig2(const Fig2Config& cfg, int threads) {
  const auto taus = cfg.omega0_tau.values();
  const auto stars = cfg.omega0_taustar.values();
  std::vector<Fig2Row> rows(taus.size() * stars.size());
  parallel_for(rows.size(), threads, [&](std::size_t k) {
    rows[k] = fig2_point(taus[k / stars.size()], stars[k % stars.size()], cfg);
  });
  return rows;
}

// ---------------------------------------------------------------- fig3

Fig3Config Fig3Config::from_json(const json& doc) {
  Fig3Config c;
  c.p_i = get_real(doc, "p_i", c.p_i);
  c.c_i = get_complex(doc, "c_i", c.c_i);
  c.mu = get_axis(doc, "mu", c.mu);
  c.omega_bar = get_axis(doc, "omega_bar", c.omega_bar);
  c.tau = get_real(doc, "tau", c.tau);
  c.omega_f_tau = get_real(doc, "omega_f_tau", c.omega_f_tau);
  if (!(c.tau > 0.0) || !(c.omega_f_tau > 0.0) || c.omega_bar.lo < 0.0) {
    throw Error(ErrorKind::ParamOutOfRange, "tau, omega_f_tau must be positive and omega_bar >= 0");
  }
  tls::TlsState{c.p_i, c.c_i}.validate();
  return c;
}

Fig3Row fig3_point(double mu, double omega_bar, const Fig3Config& cfg) {
  const tls::TlsState s{cfg.p_i, cfg.c_i};
  const DensityMatrix rho = tls_density(s);
  const double big = cfg.omega_f_tau / cfg.tau;
  const double angle = -mu * omega_bar;
  tls::MuDynParams par;
  par.mu = mu;
  par.omega_bar = omega_bar;
  par.tau = cfg.tau;
  par.omega_f = big * std::cos(angle);
  par.eps_f = big * std::sin(angle);
  par.Omega_f = std::hypot(par.omega_f, par.eps_f);

  const HamiltonianOp h_i = rotating_hamiltonian(big, 0.0);
  const HamiltonianOp h_f = rotating_hamiltonian(big, angle);
  const tls::ThetaSplit split = tls::example2_theta_split(s, par);
  return Fig3Row{mu,
                 omega_bar,
                 tls::w_sta_closed(par),
                 split.lower,
                 split.upper,
                 delta_noncyclic(rho, h_i, h_f).delta,
                 tls::delta_e_sta(cfg.p_i, par),
                 tls::example2_wmin_full(s, par)};
}

std::vector<Fig3Row> run_fig3(const Fig3Config& cfg, int threads) {
  const auto mus = cfg.mu.values();
  const auto obs = cfg.omega_bar.values();
  std::vector<Fig3Row> rows(mus.size() * obs.size());
  parallel_for(rows.size(), threads, [&](std::size_t k) {
    rows[k] = fig3_point(mus[k / obs.size()], obs[k % obs.size()], cfg);
  });
  return rows;
}

// ---------------------------------------------------------------- single runs

json run_ergotropy(const RunConfig& cfg) {
  const DensityMatrix rho(get_matrix(cfg.doc, "rho_i"));
  const HamiltonianOp h_i(get_matrix(cfg.doc, "h_i"));
  const HamiltonianOp h_f(get_matrix(cfg.doc, "h_f"));
  return to_json(make_report(rho, h_i, h_f));
}

json run_counterexample(const RunConfig& cfg) {
  const double beta = get_real(cfg.doc, "beta", 1.0);
  const double e2i = get_real(cfg.doc, "e2i", 0.9);
  std::vector<double> e2fs{0.1, 0.3, 0.5, 0.7, 0.85, 0.95};
  if (cfg.doc.contains("e2f")) {
    const json& j = cfg.doc.at("e2f");
    if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "config key 'e2f': must be an array");
    e2fs.clear();
    for (const auto& x : j) {
      if (!x.is_number()) throw Error(ErrorKind::InvalidInput, "config key 'e2f': non-number");
      e2fs.push_back(x.get<double>());
    }
  }
  json results = json::array();
  for (double e2f : e2fs) {
    json r = to_json(counterexample_appendix_b(beta, e2i, e2f));
    r["e2f"] = e2f;
    results.push_back(r);
  }
  // sign change of delta in e2f, by bisection
  json threshold = nullptr;
  double lo = 0.0;
  double hi = 1.0;
  const auto delta_at = [&](double x) { return counterexample_appendix_b(beta, e2i, x).delta; };
  if (delta_at(lo) < 0.0 && delta_at(hi) > 0.0) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (delta_at(mid) < 0.0 ? lo : hi) = mid;
    }
    threshold = 0.5 * (lo + hi);
  }
  return {{"beta", beta}, {"e2i", e2i}, {"results", results}, {"threshold_e2f", threshold}};
}

namespace {

Schedule drive_schedule(const json& doc, int steps) {
  const json sdoc = doc.contains("schedule") ? doc.at("schedule") : json::object();
  const std::string kind = get_string(sdoc, "kind", "interp");
  const Ramp ramp = get_ramp(doc);
  const double t_i = get_real(sdoc, "t_i", 0.0);
  const double tau = get_real(sdoc, "tau", get_real(doc, "tau", 1.0));
  if (kind == "interp") {
    InterpProfile prof;
    const std::string lam = get_string(sdoc, "lambda", "linear");
    if (lam == "linear") {
      prof.kind = LambdaKind::linear;
    } else if (lam == "sine") {
      prof.kind = LambdaKind::sine;
    } else {
      throw Error(ErrorKind::InvalidInput, "unknown lambda profile '" + lam + "'");
    }
    return Schedule::interp(t_i, t_i + tau, steps, prof, ramp);
  }
  if (kind == "rotating") {
    RotatingProfile prof;
    prof.mu = get_real(sdoc, "mu", 0.0);
    prof.omega_start = get_real(sdoc, "omega_start", 1.0);
    prof.omega_end = get_real(sdoc, "omega_end", prof.omega_start);
    return Schedule::rotating(t_i, t_i + tau, steps, prof, ramp);
  }
  if (kind == "cos_sin") {
    return Schedule::cos_sin(get_real(sdoc, "omega0", 1.0), tau, get_real(sdoc, "tau_star", 1.0),
                             steps, ramp);
  }
  throw Error(ErrorKind::InvalidInput, "unknown schedule kind '" + kind + "'");
}

}  // namespace

json run_drive_synth(const RunConfig& cfg) {
  const json& doc = cfg.doc;
  const Schedule sched = drive_schedule(doc, cfg.steps.value_or(4096));
  const DensityMatrix rho(get_matrix(doc, "rho_i"));
  const bool rotating = sched.is_rotating();
  const HamiltonianOp h_i(rotating && !doc.contains("h_i") ? sched.rotating_h(sched.t_i())
                                                            : get_matrix(doc, "h_i"));
  const HamiltonianOp h_f(rotating && !doc.contains("h_f") ? sched.rotating_h(sched.t_f())
                                                            : get_matrix(doc, "h_f"));
  const Eigen::Index d = rho.dim();

  auto trace = std::make_shared<const PropagatorTrace>(propagate_u0(h_i, h_f, sched));

  const json pdoc = doc.contains("phases") ? doc.at("phases") : json::object();
  const std::string mode = get_string(pdoc, "mode", d == 2 ? "analytic2" : "fixed");
  const std::string frame_name = get_string(pdoc, "frame", "aligned");
  PhaseFrame frame = PhaseFrame::aligned;
  if (frame_name == "raw") {
    frame = PhaseFrame::raw;
  } else if (frame_name != "aligned") {
    throw Error(ErrorKind::InvalidInput, "unknown phase frame '" + frame_name + "'");
  }

  RVector phases = RVector::Zero(d);
  json search_json = {{"mode", mode}};
  if (mode == "fixed") {
    if (pdoc.contains("values")) {
      const json& v = pdoc.at("values");
      if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != d) {
        throw Error(ErrorKind::DimMismatch, "phases.values must hold one phase per level");
      }
      for (Eigen::Index n = 0; n < d; ++n) {
        const json& x = v[static_cast<std::size_t>(n)];
        if (!x.is_number()) throw Error(ErrorKind::InvalidInput, "phases.values holds a non-number");
        phases(n) = x.get<double>();
      }
    }
  } else if (mode == "analytic2" || mode == "grid") {
    if (frame != PhaseFrame::aligned) {
      throw Error(ErrorKind::InvalidInput, "optimised phases are quoted in the aligned frame");
    }
    PhaseSearch search;
    search.mode = mode == "grid" ? PhaseMode::grid : PhaseMode::analytic2;
    search.grid_resolution = get_int(pdoc, "grid_resolution", search.grid_resolution);
    const PhaseOptimum opt =
        optimize_phases_given_u0(rho, h_f, trace->u_samples.back(), sched.tau(), search);
    phases = opt.phases;
    search_json["w"] = opt.w;
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown phase mode '" + mode + "'");
  }

  const DriveSynthesis synth = synthesize_drive(rho, h_i, h_f, sched, trace, phases, frame);
  json out = {{"synthesis", to_json(synth)}, {"phase_search", search_json}};

  if (get_bool(doc, "verify", true)) {
    out["verification"] = to_json(verify_drive(synth, rho, h_i, h_f, sched, get_bool(doc, "strict", true)));
  }
  if (get_bool(doc, "counterdiabatic", false)) {
    const CounterdiabaticCost cd = counterdiabatic_cost(h_i, h_f, sched);
    out["counterdiabatic"] = {
        {"w_sta", cd.w_sta},
        {"w_sta_frobenius", cd.w_sta_frobenius},
        {"closed_form", std::isnan(cd.closed_form) ? json(nullptr) : json(cd.closed_form)},
        {"residual", std::isnan(cd.residual) ? json(nullptr) : json(cd.residual)},
    };
  }
  const std::string csv = get_string(doc, "v_csv", "");
  if (!csv.empty()) {
    std::ofstream f(csv, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + csv + "'");
    write_v_csv(f, synth);
  }
  return out;
}

// ---------------------------------------------------------------- output

void write_csv(std::ostream& os, const Fig1Result& r) {
  os << "p_i,c_abs,delta_enc,g,w_min,w_mc_mean,w_mc_stderr\n";
  for (const auto& x : r.rows) {
    put_row(os, {x.p_i, x.c_abs, x.delta_enc, x.g, x.w_min, x.w_mc_mean, x.w_mc_stderr});
  }
}

void write_csv(std::ostream& os, const std::vector<Fig2Row>& rows, bool numeric) {
  os << "omega0_tau,omega0_taustar,w_sta,w_min_lower,delta_enc,g,delta_e_sta";
  os << (numeric ? ",w_sta_numeric,w_min_numeric\n" : "\n");
  for (const auto& x : rows) {
    if (numeric) {
      put_row(os, {x.omega0_tau, x.omega0_taustar, x.w_sta, x.w_min_lower, x.delta_enc, x.g,
                   x.delta_e_sta, x.w_sta_numeric, x.w_min_numeric});
    } else {
      put_row(os, {x.omega0_tau, x.omega0_taustar, x.w_sta, x.w_min_lower, x.delta_enc, x.g,
                   x.delta_e_sta});
    }
  }
}

void write_csv(std::ostream& os, const std::vector<Fig3Row>& rows) {
  os << "mu,omega_bar,w_sta,w_min_lower,w_min_upper,delta_enc,delta_e_sta,w_min_full\n";
  for (const auto& x : rows) {
    put_row(os, {x.mu, x.omega_bar, x.w_sta, x.w_min_lower, x.w_min_upper, x.delta_enc,
                 x.delta_e_sta, x.w_min_full});
  }
}

}  // namespace ergo::cli
