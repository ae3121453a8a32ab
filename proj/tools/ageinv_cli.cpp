// Batch front door: config parsing, experiment orchestration, CSV/JSON
// report emission. All outputs are deterministic for a fixed seed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ageinv/config.hpp"
#include "ageinv/convolution.hpp"
#include "ageinv/grid.hpp"
#include "ageinv/model.hpp"
#include "ageinv/oracles.hpp"
#include "ageinv/rng.hpp"
#include "ageinv/scheme.hpp"
#include "ageinv/semigroup.hpp"
#include "ageinv/states.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace ageinv;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes through a temp file and renames, so partial experiments never
// leave a truncated report behind.
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write " + tmp.string());
    }
    out << content;
  }
  fs::rename(tmp, path);
}

struct Context {
  Config cfg;
  bool quiet = false;
  fs::path out_dir;
};

json config_echo(const Config& cfg) {
  json echo = json::object();
  for (const auto& [k, v] : cfg.echo) {
    echo[k] = v;
  }
  return echo;
}

json beta_report(const ModelParams& params) {
  const BetaCondition bc = check_beta_condition(params);
  return json{{"value", bc.satisfied},
              {"integral", bc.integral},
              {"bound", bc.bound}};
}

json regime_report(const RunStats& stats) {
  return json{{"lambda_hat", stats.lambda_hat},
              {"gamma_hat", stats.gamma_hat},
              {"delta_tau", stats.delta_tau},
              {"satisfied", stats.paper_regime}};
}

// Knot whose interval [l_k, l_{k+1}) covers t.
const Knot& covering_knot(const std::vector<Knot>& knots, double t) {
  std::size_t k = 0;
  while (k + 2 < knots.size() && knots[k + 1].l <= t + 1e-12) {
    ++k;
  }
  return knots[k];
}

std::string simulate_csv(const Trajectory& traj) {
  std::ostringstream csv;
  csv << "t,lp_norm_u,dist_to_C,H_norm,eta_accepted\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const double t = traj.sample_times[i];
    const Knot& k = covering_knot(traj.knots, t);
    csv << fmt(t) << ',' << fmt(lp_norm(traj.samples[i])) << ','
        << fmt(traj.sample_defects[i]) << ',' << fmt(lp_norm(k.H)) << ','
        << fmt(k.eta) << '\n';
  }
  return csv.str();
}

json run_report(const Context& ctx, const ModelParams& params,
                const Trajectory& traj) {
  double defect_sup = 0.0;
  for (double d : traj.sample_defects) {
    defect_sup = std::max(defect_sup, d);
  }
  json report;
  report["config"] = config_echo(ctx.cfg);
  report["seed"] = ctx.cfg.seed;
  report["beta_condition"] = beta_report(params);
  report["h0"] = h0_bound(params);
  report["paper_regime"] = regime_report(traj.stats);
  report["knots"] = traj.knots.size();
  report["defect_sup"] = defect_sup;
  report["terminated_by"] = to_string(traj.terminated_by);
  return report;
}

int cmd_simulate(const Context& ctx) {
  const ModelParams params = ctx.cfg.make_model();
  const GridFunction x0 = ctx.cfg.make_initial_state();
  const Trajectory traj = build_knots(x0, ctx.cfg.scheme, params);

  write_atomic(ctx.out_dir / "simulate.csv", simulate_csv(traj));
  write_atomic(ctx.out_dir / "simulate.json",
               run_report(ctx, params, traj).dump(2) + "\n");
  if (!ctx.quiet) {
    std::cout << "simulate: " << traj.knots.size() << " knots, terminated by "
              << to_string(traj.terminated_by) << "\n";
  }
  return traj.terminated_by == Termination::horizon ? 0 : 1;
}

int cmd_convergence(const Context& ctx, std::size_t levels) {
  const ModelParams params = ctx.cfg.make_model();
  const GridFunction x0 = ctx.cfg.make_initial_state();
  const ConvergenceResult conv =
      converge_run(x0, ctx.cfg.scheme, params, levels);

  json report;
  report["config"] = config_echo(ctx.cfg);
  report["seed"] = ctx.cfg.seed;
  report["epsilons"] = conv.epsilons;
  report["cauchy"] = conv.cauchy;
  json per_level = json::array();
  for (const Trajectory& traj : conv.levels) {
    double defect_sup = 0.0;
    for (double d : traj.sample_defects) {
      defect_sup = std::max(defect_sup, d);
    }
    per_level.push_back(json{{"knots", traj.knots.size()},
                             {"defect_sup", defect_sup}});
  }
  report["levels"] = per_level;
  bool decreasing = true;
  for (std::size_t j = 0; j + 1 < conv.cauchy.size(); ++j) {
    decreasing = decreasing && conv.cauchy[j + 1] < conv.cauchy[j];
  }
  report["cauchy_decreasing"] = decreasing;
  write_atomic(ctx.out_dir / "convergence.json", report.dump(2) + "\n");
  if (!ctx.quiet) {
    std::cout << "convergence: cauchy =";
    for (double c : conv.cauchy) {
      std::cout << ' ' << c;
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_invariance_report(const Context& ctx) {
  const ModelParams params = ctx.cfg.make_model();
  const GridFunction x0 = ctx.cfg.make_initial_state();
  const Trajectory traj = build_knots(x0, ctx.cfg.scheme, params);

  double knot_defect_sup = 0.0;
  for (const Knot& k : traj.knots) {
    knot_defect_sup =
        std::max(knot_defect_sup, dist_to_C(k.y, params.kappa()));
  }
  json report = run_report(ctx, params, traj);
  report["knot_defect_sup"] = knot_defect_sup;
  double mean = 0.0;
  for (double d : traj.sample_defects) {
    mean += d;
  }
  if (!traj.sample_defects.empty()) {
    mean /= static_cast<double>(traj.sample_defects.size());
  }
  report["defect_mean"] = mean;
  write_atomic(ctx.out_dir / "invariance_report.json", report.dump(2) + "\n");
  if (!ctx.quiet) {
    std::cout << "invariance-report: beta_condition="
              << (check_beta_condition(params).satisfied ? "true" : "false")
              << " knot_defect_sup=" << knot_defect_sup << "\n";
  }
  return 0;
}

int cmd_oracle_compare(const Context& ctx) {
  const ModelParams params = ctx.cfg.make_model();
  const GridFunction x0 = ctx.cfg.make_initial_state();
  const double tau = ctx.cfg.scheme.tau;

  const Trajectory traj = build_knots(x0, ctx.cfg.scheme, params);
  const PicardResult picard = picard_solve(x0, tau, 200, params);
  const OracleSolution chars = characteristics_solve(x0, tau, params);

  std::ostringstream csv;
  csv << "t,scheme_vs_picard,picard_vs_characteristics,"
         "scheme_vs_characteristics\n";
  double sup_sp = 0.0, sup_pc = 0.0, sup_sc = 0.0;
  const std::size_t n = std::min(
      {traj.samples.size(), picard.solution.states.size(),
       chars.states.size()});
  for (std::size_t i = 0; i < n; ++i) {
    const double sp = lp_norm(traj.samples[i] - picard.solution.states[i]);
    const double pc = lp_norm(picard.solution.states[i] - chars.states[i]);
    const double sc = lp_norm(traj.samples[i] - chars.states[i]);
    sup_sp = std::max(sup_sp, sp);
    sup_pc = std::max(sup_pc, pc);
    sup_sc = std::max(sup_sc, sc);
    csv << fmt(traj.sample_times[i]) << ',' << fmt(sp) << ',' << fmt(pc)
        << ',' << fmt(sc) << '\n';
  }
  write_atomic(ctx.out_dir / "oracle_compare.csv", csv.str());

  json report;
  report["config"] = config_echo(ctx.cfg);
  report["seed"] = ctx.cfg.seed;
  report["sup_scheme_vs_picard"] = sup_sp;
  report["sup_picard_vs_characteristics"] = sup_pc;
  report["sup_scheme_vs_characteristics"] = sup_sc;
  report["picard_iterate_diffs"] = picard.iterate_diffs;
  report["picard_converged"] = picard.converged;
  write_atomic(ctx.out_dir / "oracle_compare.json", report.dump(2) + "\n");
  if (!ctx.quiet) {
    std::cout << "oracle-compare: picard_vs_characteristics sup = " << sup_pc
              << "\n";
  }
  return 0;
}

int cmd_subtangency(const Context& ctx) {
  const ModelParams params = ctx.cfg.make_model();
  const AgeGrid grid = ctx.cfg.make_grid();
  Rng rng(ctx.cfg.seed);

  const std::vector<double> ladder = {8.0 * grid.cell_width(),
                                      4.0 * grid.cell_width(),
                                      2.0 * grid.cell_width(),
                                      1.0 * grid.cell_width()};
  std::ostringstream csv;
  csv << "state,h,defect,vhat2_norm_over_h\n";
  std::size_t monotone = 0;
  const std::size_t n_states = 10;
  for (std::size_t s = 0; s < n_states; ++s) {
    const GridFunction phi =
        random_c_state(grid, ctx.cfg.n, params.kappa(), rng, true);
    std::vector<double> defects;
    for (double h : ladder) {
      const double defect = subtangency_defect(phi, h, params);
      const double ratio = lp_norm(vhat2(phi, h, params)) / h;
      defects.push_back(defect);
      csv << s << ',' << fmt(h) << ',' << fmt(defect) << ',' << fmt(ratio)
          << '\n';
    }
    bool dec = true;
    for (std::size_t j = 0; j + 1 < defects.size(); ++j) {
      dec = dec && defects[j + 1] < defects[j];
    }
    monotone += dec ? 1 : 0;
  }
  write_atomic(ctx.out_dir / "subtangency.csv", csv.str());

  json report;
  report["config"] = config_echo(ctx.cfg);
  report["seed"] = ctx.cfg.seed;
  report["states"] = n_states;
  report["monotone_decreasing"] = monotone;
  write_atomic(ctx.out_dir / "subtangency.json", report.dump(2) + "\n");
  if (!ctx.quiet) {
    std::cout << "subtangency: " << monotone << "/" << n_states
              << " states with strictly decreasing defect\n";
  }
  return 0;
}

StepForcing random_forcing(const AgeGrid& grid, std::size_t n_comp,
                           double horizon, Rng& rng) {
  const std::size_t total = grid.cells_of(horizon);
  const std::size_t q = 1 + rng.below(4);
  std::vector<std::size_t> cells{0, total};
  while (cells.size() < q + 1) {
    cells.push_back(1 + rng.below(total - 1));
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }
  std::vector<double> breaks;
  for (std::size_t c : cells) {
    breaks.push_back(static_cast<double>(c) * grid.cell_width());
  }
  std::vector<StatePair> pieces;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    StatePair x = StatePair::zero(grid, n_comp);
    const double weight = rng.uniform();
    for (double& b : x.boundary) {
      b = rng.uniform(-1.0, 1.0);
    }
    const double bn = vector_lp_norm(x.boundary, grid.p());
    if (bn > 0.0) {
      for (double& b : x.boundary) {
        b *= weight / bn;
      }
    }
    for (double& v : x.density.values()) {
      v = rng.uniform(-1.0, 1.0);
    }
    const double dn = lp_norm(x.density);
    if (dn > 0.0) {
      x.density *= (1.0 - weight) / dn;
    }
    pieces.push_back(std::move(x));
  }
  return StepForcing(std::move(breaks), std::move(pieces));
}

int cmd_conv_tests(const Context& ctx) {
  const AgeGrid grid = ctx.cfg.make_grid();
  const std::size_t n = ctx.cfg.n;
  Rng rng(ctx.cfg.seed);
  const double horizon = std::min(1.0, ctx.cfg.scheme.tau);
  DeltaEstimator delta(grid, n, 200, ctx.cfg.seed);

  double cocycle_sup = 0.0;
  for (int i = 0; i < 20; ++i) {
    const StepForcing f = random_forcing(grid, n, horizon, rng);
    const std::size_t total = grid.cells_of(horizon);
    const std::size_t tc = rng.below(total);
    const std::size_t sc = rng.below(total - tc + 1);
    const double t = static_cast<double>(tc) * grid.cell_width();
    const double s = static_cast<double>(sc) * grid.cell_width();
    cocycle_sup = std::max(cocycle_sup, cocycle_check(f, t, s));
  }

  std::size_t bound_failures = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 100; ++i) {
    const StepForcing f = random_forcing(grid, n, horizon, rng);
    const double t =
        static_cast<double>(1 + rng.below(grid.cells_of(horizon))) *
        grid.cell_width();
    const BoundCheck bc = s_diamond_bound_check(f, t, delta);
    if (!bc.satisfied) {
      ++bound_failures;
    }
    if (bc.rhs > 0.0) {
      worst_ratio = std::max(worst_ratio, bc.lhs / bc.rhs);
    }
  }

  json report;
  report["config"] = config_echo(ctx.cfg);
  report["seed"] = ctx.cfg.seed;
  report["cocycle_defect_sup"] = cocycle_sup;
  report["cocycle_ok"] = cocycle_sup <= 1e-12;
  report["bound_failures"] = bound_failures;
  report["bound_worst_ratio"] = worst_ratio;
  write_atomic(ctx.out_dir / "conv_tests.json", report.dump(2) + "\n");
  if (!ctx.quiet) {
    std::cout << "conv-tests: cocycle sup " << cocycle_sup << ", "
              << bound_failures << " bound failures\n";
  }
  return (cocycle_sup <= 1e-12 && bound_failures == 0) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant-band integrator for age-structured populations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  std::size_t levels_override = 0;
  bool quiet = false;

  app.add_option("--config", config_path, "experiment configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed_override, "seed override")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--levels", levels_override,
                 "number of refinement levels (convergence)");
  app.add_flag("--quiet", quiet, "suppress progress output");

  app.add_subcommand("simulate", "run the knot scheme, emit CSV + JSON");
  app.add_subcommand("convergence", "epsilon-refinement Cauchy table");
  app.add_subcommand("invariance-report",
                     "defect statistics and invariance certificate");
  app.add_subcommand("oracle-compare", "three-way solver comparison");
  app.add_subcommand("subtangency", "defect-vs-step decay table");
  app.add_subcommand("conv-tests", "convolution property harness");

  CLI11_PARSE(app, argc, argv);

  try {
    Context ctx;
    ctx.cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (seed_set) {
      ctx.cfg.seed = seed_override;
      ctx.cfg.scheme.seed = seed_override;
    }
    ctx.quiet = quiet;
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "simulate") {
      return cmd_simulate(ctx);
    }
    if (sub == "convergence") {
      const std::size_t levels =
          levels_override > 0 ? levels_override : ctx.cfg.levels;
      return cmd_convergence(ctx, levels);
    }
    if (sub == "invariance-report") {
      return cmd_invariance_report(ctx);
    }
    if (sub == "oracle-compare") {
      return cmd_oracle_compare(ctx);
    }
    if (sub == "subtangency") {
      return cmd_subtangency(ctx);
    }
    if (sub == "conv-tests") {
      return cmd_conv_tests(ctx);
    }
    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
