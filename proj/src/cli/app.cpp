#include "ergo/cli/app.hpp"

#include <fstream>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "ergo/cli/scenarios.hpp"

namespace ergo::cli {

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<int> threads;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--out", f.out, "output file (default: stdout)");
  sub->add_option("--seed", f.seed, "64-bit seed for Monte Carlo phase averaging");
  sub->add_option("--steps", f.steps, "initial time-grid size")->check(CLI::Range(100, 100000));
  sub->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
}

void emit(const RunConfig& cfg, std::ostream& out, const auto& write) {
  if (cfg.out.empty()) {
    write(out);
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + cfg.out + "'");
  write(f);
}

void dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.scenario) {
    case Scenario::ergotropy: {
      const json j = run_ergotropy(cfg);
      emit(cfg, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      return;
    }
    case Scenario::counterexample: {
      const json j = run_counterexample(cfg);
      emit(cfg, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      return;
    }
    case Scenario::drive_synth: {
      const json j = run_drive_synth(cfg);
      emit(cfg, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      return;
    }
    case Scenario::fig1: {
      const Fig1Config f = Fig1Config::from_json(cfg.doc);
      const Fig1Result r = run_fig1(f, cfg.seed, cfg.threads);
      emit(cfg, out, [&](std::ostream& os) { write_csv(os, r); });
      if (!cfg.out.empty()) {
        const json summary = {
            {"crossover_p", r.crossover_p ? json(*r.crossover_p) : json(nullptr)},
            {"swap_cost", r.swap_cost},
            {"rows", r.rows.size()},
        };
        out << summary.dump(2) << '\n';
      }
      return;
    }
    case Scenario::fig2: {
      Fig2Config f = Fig2Config::from_json(cfg.doc);
      if (cfg.steps) f.steps = *cfg.steps;
      const auto rows = run_fig2(f, cfg.threads);
      emit(cfg, out, [&](std::ostream& os) { write_csv(os, rows, f.numeric); });
      return;
    }
    case Scenario::fig3: {
      const auto rows = run_fig3(Fig3Config::from_json(cfg.doc), cfg.threads);
      emit(cfg, out, [&](std::ostream& os) { write_csv(os, rows); });
      return;
    }
  }
}

int fail(std::ostream& err, const Error& e) {
  err << error_json(e).dump() << '\n';
  return is_convergence_failure(e.kind()) ? 3 : 2;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal drives and non-cyclic ergotropy of finite quantum systems", "ergodrive"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<CLI::App*, Scenario>> subs;
  const std::pair<const char*, const char*> names[] = {
      {"ergotropy", "ergotropy report for rho_i, H_i, H_f"},
      {"drive-synth", "synthesise and verify an optimal drive"},
      {"fig1", "gain and cost sweep for the commuting two-level drive"},
      {"fig2", "cos/sin drive sweep over omega0 tau and omega0 tau*"},
      {"fig3", "constant-mu drive sweep over (mu, Omega_bar)"},
      {"counterexample", "three-level state with negative advantage"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (std::string_view(name) == "fig3") sub->alias("appendix-fig");
    add_flags(sub, flags);
    subs.emplace_back(sub, parse_scenario(name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << json{{"error", "InvalidInput"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    Scenario scenario = Scenario::ergotropy;
    for (const auto& [sub, sc] : subs) {
      if (sub->parsed()) scenario = sc;
    }
    json doc = json::object();
    if (!flags.config.empty()) {
      doc = read_json_file(flags.config);
    } else if (scenario == Scenario::ergotropy || scenario == Scenario::drive_synth) {
      throw Error(ErrorKind::InvalidInput, "--config is required for this scenario");
    }
    RunConfig cfg = make_config(scenario, doc);
    if (!doc.contains("threads")) {
      cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.steps) cfg.steps = *flags.steps;
    if (flags.threads) cfg.threads = *flags.threads;
    cfg.out = flags.out;
    set_tolerances(cfg.tolerances);
    dispatch(cfg, out);
    return 0;
  } catch (const Error& e) {
    return fail(err, e);
  } catch (const json::exception& e) {
    return fail(err, Error(ErrorKind::InvalidInput, e.what()));
  }
}

}  // namespace ergo::cli
