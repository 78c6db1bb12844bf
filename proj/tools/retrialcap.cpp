// Command-line front-end: single evaluations, figure-data sweeps,
// capacity-planning optimization, self-validation, and generator dumps.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "retrialcap/dense_solve.hpp"
#include "retrialcap/io.hpp"
#include "retrialcap/measures.hpp"
#include "retrialcap/optimize.hpp"
#include "retrialcap/product_form.hpp"
#include "retrialcap/simulate.hpp"
#include "retrialcap/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
  retrialcap::ModelParams params{0, 0, 0, 40.0, 40.0, 1.0, 0.8, 0.5};
  std::string format = "csv";
  std::string output;
};

void add_rate_flags(CLI::App* cmd, retrialcap::ModelParams& p) {
  cmd->add_option("--lambda-n", p.lambda_n, "new-call arrival rate")->capture_default_str();
  cmd->add_option("--lambda-h", p.lambda_h, "handoff arrival rate")->capture_default_str();
  cmd->add_option("--nu", p.nu, "per-call service rate")->capture_default_str();
  cmd->add_option("--p", p.p, "retrial success probability")->capture_default_str();
  cmd->add_option("--mu-r", p.mu_r, "per-customer retrial rate")->capture_default_str();
}

void add_shape_flags(CLI::App* cmd, retrialcap::ModelParams& p, bool required) {
  auto* c = cmd->add_option("--c", p.c, "total channels");
  auto* g = cmd->add_option("--g", p.g, "guard channels");
  auto* m = cmd->add_option("--m", p.m, "orbit capacity");
  if (required) {
    c->required();
    g->required();
    m->required();
  }
}

void add_output_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", opts.output, "output file (default stdout)");
}

int emit(const CommonOpts& opts, const std::vector<retrialcap::SweepRow>& rows) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!opts.output.empty()) {
    file.open(opts.output);
    if (!file) {
      std::cerr << "error: cannot open output file " << opts.output << '\n';
      return kExitUsage;
    }
    os = &file;
  }
  if (opts.format == "json")
    retrialcap::write_json(*os, rows);
  else
    retrialcap::write_csv(*os, rows);
  return kExitOk;
}

int jobs_from_env() {
  if (const char* env = std::getenv("RETRIALCAP_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

retrialcap::SweepAxis parse_axis(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 4)
    throw retrialcap::domain_error("axis spec must be name:start:stop:step, got '" +
                                   spec + "'");
  return {parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])};
}

nlohmann::json optimize_record(const retrialcap::OptimizationResult& res, bool with_trace) {
  nlohmann::json j{{"feasible", res.feasible}};
  if (res.feasible) {
    j["c"] = res.c;
    j["g"] = res.g;
    j["m"] = res.m;
    j["P_b"] = res.achieved.P_b;
    j["P_d"] = res.achieved.P_d;
    j["M_b"] = res.achieved.M_b;
    j["M_o"] = res.achieved.M_o;
    j["M_s"] = res.achieved.M_s;
  }
  if (with_trace) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : res.trace)
      trace.push_back({{"c", t.c}, {"g", t.g}, {"m", t.m}, {"P_b", t.P_b}, {"P_d", t.P_d}});
    j["trace"] = trace;
  }
  return j;
}

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<ValidationCheck> run_validation(std::uint64_t seed, bool inject_fault);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary analysis and capacity planning for a guard-channel "
               "multi-server loss system with a finite retrial orbit"};
  app.require_subcommand(1);
  app.set_config("--config");

  CommonOpts eval_opts;
  auto* cmd_eval = app.add_subcommand("evaluate", "compute the five performance "
                                                  "measures for one parameter point");
  add_shape_flags(cmd_eval, eval_opts.params, true);
  add_rate_flags(cmd_eval, eval_opts.params);
  add_output_flags(cmd_eval, eval_opts);

  CommonOpts sweep_opts;
  std::vector<std::string> axis_specs;
  int sweep_jobs = jobs_from_env();
  auto* cmd_sweep = app.add_subcommand("sweep", "evaluate a 1- or 2-axis parameter grid");
  add_shape_flags(cmd_sweep, sweep_opts.params, true);
  add_rate_flags(cmd_sweep, sweep_opts.params);
  add_output_flags(cmd_sweep, sweep_opts);
  cmd_sweep->add_option("--axis", axis_specs, "axis spec name:start:stop:step (max 2)")
      ->required()
      ->expected(1, 2);
  cmd_sweep->add_option("--jobs", sweep_jobs, "parallel evaluations");

  CommonOpts opt_opts;
  std::string problem;
  double x_percent = 5.0;
  std::optional<double> pd0, pb0;
  int opt_c = 0, m_cap = -1;
  int c_min = 1, c_max = 200, m_min = 0, m_max = 0;
  std::string strategy = "exhaustive";
  bool with_trace = false, linear_scan = false;
  auto* cmd_opt = app.add_subcommand("optimize", "solve one of the planning problems");
  cmd_opt->add_option("problem", problem, "problem id")
      ->required()
      ->check(CLI::IsMember({"o1-algI", "o1-algII", "o2", "o3", "o4"}));
  add_rate_flags(cmd_opt, opt_opts.params);
  add_output_flags(cmd_opt, opt_opts);
  cmd_opt->add_option("--pd0", pd0, "dropping-probability bound");
  cmd_opt->add_option("--pb0", pb0, "blocking-probability bound");
  cmd_opt->add_option("--x", x_percent, "guard/orbit percentage")->capture_default_str();
  cmd_opt->add_option("--c", opt_c, "channel count (o1/o2)");
  cmd_opt->add_option("--m-cap", m_cap, "orbit search ceiling (default 2c)");
  cmd_opt->add_option("--c-min", c_min, "channel range lower bound (o3/o4)")->capture_default_str();
  cmd_opt->add_option("--c-max", c_max, "channel range upper bound (o3/o4)")->capture_default_str();
  cmd_opt->add_option("--m-min", m_min, "orbit range lower bound (o3)")->capture_default_str();
  cmd_opt->add_option("--m-max", m_max, "orbit range upper bound (o3)")->capture_default_str();
  cmd_opt->add_option("--strategy", strategy, "o3 strategy")
      ->check(CLI::IsMember({"exhaustive", "paperIV"}))
      ->capture_default_str();
  cmd_opt->add_flag("--trace", with_trace, "include the search trace in JSON output");
  cmd_opt->add_flag("--linear-scan", linear_scan, "disable monotone bisection (audit)");

  std::uint64_t validate_seed = 1;
  bool inject_fault = false;
  auto* cmd_validate = app.add_subcommand("validate", "run the built-in oracle suite");
  cmd_validate->add_option("--seed", validate_seed, "simulation seed")->capture_default_str();
  cmd_validate->add_flag("--inject-fault", inject_fault,
                         "perturb a generator entry to exercise the failure path");

  CommonOpts dump_opts;
  auto* cmd_dump = app.add_subcommand("dump-q", "write the generator in coordinate format");
  add_shape_flags(cmd_dump, dump_opts.params, true);
  add_rate_flags(cmd_dump, dump_opts.params);
  cmd_dump->add_option("--output,-o", dump_opts.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      app.exit(e);
      return kExitOk;
    }
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (cmd_eval->parsed()) {
      eval_opts.params.validate();
      std::vector<retrialcap::SweepRow> rows{
          {eval_opts.params, retrialcap::evaluate(eval_opts.params)}};
      return emit(eval_opts, rows);
    }

    if (cmd_sweep->parsed()) {
      std::vector<retrialcap::SweepAxis> axes;
      for (const auto& spec : axis_specs) axes.push_back(parse_axis(spec));
      const auto rows = retrialcap::run_sweep(sweep_opts.params, axes, sweep_jobs);
      return emit(sweep_opts, rows);
    }

    if (cmd_opt->parsed()) {
      retrialcap::QosTargets targets{pd0, pb0};
      retrialcap::SearchOptions search;
      search.linear_scan = linear_scan;
      search.m_cap = m_cap;
      const retrialcap::ModelParams& rates = opt_opts.params;

      retrialcap::OptimizationResult res;
      if (problem == "o1-algI") {
        if (opt_c < 1) throw retrialcap::domain_error("--c is required for o1-algI");
        res = retrialcap::solve_o1_alg1(rates, opt_c, x_percent, targets, search);
      } else if (problem == "o1-algII") {
        if (opt_c < 1) throw retrialcap::domain_error("--c is required for o1-algII");
        res = retrialcap::solve_o1_alg2(rates, opt_c, x_percent, targets, search);
      } else if (problem == "o2") {
        if (opt_c < 1) throw retrialcap::domain_error("--c is required for o2");
        res = retrialcap::solve_o2_alg3(rates, opt_c, x_percent, targets, search);
      } else if (problem == "o3") {
        const auto strat = strategy == "paperIV"
                               ? retrialcap::O3Strategy::paper_bracketing
                               : retrialcap::O3Strategy::exhaustive;
        res = retrialcap::solve_o3(rates, targets, strat, {c_min, c_max},
                                   {m_min, m_max}, search);
      } else {
        res = retrialcap::solve_o4_alg5(rates, targets, x_percent, {c_min, c_max}, search);
      }

      std::ofstream file;
      std::ostream* os = &std::cout;
      if (!opt_opts.output.empty()) {
        file.open(opt_opts.output);
        if (!file) throw retrialcap::domain_error("cannot open output file");
        os = &file;
      }
      if (opt_opts.format == "json") {
        *os << optimize_record(res, with_trace).dump(2) << '\n';
      } else if (res.feasible) {
        retrialcap::ModelParams p = rates;
        p.c = res.c;
        p.g = res.g;
        p.m = res.m;
        retrialcap::write_csv(*os, {{p, res.achieved}});
      } else {
        *os << "infeasible\n";
      }
      return res.feasible ? kExitOk : kExitInfeasible;
    }

    if (cmd_validate->parsed()) {
      const auto checks = run_validation(validate_seed, inject_fault);
      bool all_ok = true;
      for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS" : "FAIL") << ' ' << c.name;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
        std::cout << '\n';
        all_ok = all_ok && c.passed;
      }
      std::cout << (all_ok ? "validation passed" : "validation FAILED") << '\n';
      return all_ok ? kExitOk : kExitNumerical;
    }

    if (cmd_dump->parsed()) {
      dump_opts.params.validate();
      const auto gen = retrialcap::build_generator(dump_opts.params);
      if (dump_opts.output.empty()) {
        gen.write_coordinate(std::cout);
      } else {
        std::ofstream file(dump_opts.output);
        if (!file) throw retrialcap::domain_error("cannot open output file");
        gen.write_coordinate(file);
      }
      return kExitOk;
    }
  } catch (const retrialcap::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const retrialcap::capacity_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

namespace {

std::vector<ValidationCheck> run_validation(std::uint64_t seed, bool inject_fault) {
  using namespace retrialcap;
  std::vector<ValidationCheck> checks;
  std::ostringstream detail;

  // Generator structure: row sums and irreducibility, optionally with a
  // deliberately corrupted entry to prove the check can fail.
  {
    ModelParams p{10, 2, 3, 4.0, 4.0, 1.0, 0.8, 0.5};
    SparseGenerator gen = build_generator(p);
    double defect = max_row_sum_defect(gen);
    if (inject_fault) {
      auto triplets = gen.triplets();
      triplets.front().value += 0.25;
      defect = max_row_sum_defect(SparseGenerator(gen.space(), std::move(triplets)));
    }
    detail.str("");
    detail << "max row-sum defect " << defect;
    checks.push_back({"generator-row-sums", defect <= 1e-12, detail.str()});
    checks.push_back({"generator-irreducible", is_irreducible(gen), ""});
  }

  // Product-form agreement on a small m = 0 grid.
  {
    double worst = 0.0;
    for (int c : {5, 20, 60, 100}) {
      for (int g : {0, 1, 3}) {
        if (g > c) continue;
        ModelParams p{c, g, 0, 0.4 * c, 0.4 * c, 1.0, 0.8, 0.5};
        const auto dist = solve_stationary(build_generator(p));
        const auto oracle = product_form_m0(p);
        for (int j = 0; j <= c; ++j)
          worst = std::max(worst, std::abs(dist.pi[j] - oracle[j]));
      }
    }
    detail.str("");
    detail << "max per-entry error " << worst;
    checks.push_back({"product-form-m0", worst <= 1e-10, detail.str()});
  }

  // Dense brute-force agreement on small retrial instances.
  {
    double worst = 0.0;
    for (int c : {3, 6, 9}) {
      for (int m : {1, 3}) {
        ModelParams p{c, 1, m, 0.5 * c, 0.4 * c, 1.0, 0.7, 0.6};
        const auto gen = build_generator(p);
        const auto dist = solve_stationary(gen, Method::gth);
        const auto dense = dense_null_space(gen);
        for (std::size_t i = 0; i < dense.size(); ++i)
          worst = std::max(worst, std::abs(dist.pi[i] - dense[i]));
      }
    }
    detail.str("");
    detail << "max per-entry error " << worst;
    checks.push_back({"dense-brute-force", worst <= 1e-10, detail.str()});
  }

  // Simulation three-sigma agreement with the analytic pipeline.
  {
    bool ok = true;
    detail.str("");
    int cfg = 0;
    for (const ModelParams p : {ModelParams{8, 2, 3, 3.0, 3.0, 1.0, 0.8, 0.5},
                                ModelParams{12, 3, 4, 5.0, 4.0, 1.0, 0.6, 0.8}}) {
      SimulationConfig sim_cfg;
      sim_cfg.horizon = 4e5;
      sim_cfg.warmup = 2e4;
      sim_cfg.seed = seed + cfg++;
      const auto sim = simulate(p, sim_cfg);
      const auto analytic = evaluate(p);
      auto within = [](const Estimate& e, double truth) {
        return std::abs(e.value - truth) <= 3.0 * e.half_width + 1e-9;
      };
      if (!within(sim.P_b, analytic.P_b) || !within(sim.P_d, analytic.P_d) ||
          !within(sim.M_b, analytic.M_b) || !within(sim.M_o, analytic.M_o))
        ok = false;
    }
    checks.push_back({"simulation-three-sigma", ok, ""});
  }

  // Monotone behavior of the loss probabilities on a small grid.
  {
    bool ok = true;
    ModelParams base{0, 2, 2, 8.0, 8.0, 1.0, 0.8, 0.5};
    double prev_pb = 1.0, prev_pd = 1.0;
    for (int c = 18; c <= 24; ++c) {
      ModelParams p = base;
      p.c = c;
      const auto pm = evaluate(p);
      if (pm.P_b > prev_pb + 1e-12 || pm.P_d > prev_pd + 1e-12) ok = false;
      prev_pb = pm.P_b;
      prev_pd = pm.P_d;
    }
    checks.push_back({"monotone-in-c", ok, ""});
  }

  return checks;
}

}  // namespace
