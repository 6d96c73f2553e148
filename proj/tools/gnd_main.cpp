#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gnd/abrd.hpp"
#include "gnd/analysis.hpp"
#include "gnd/errors.hpp"
#include "gnd/fpl.hpp"
#include "gnd/instance_io.hpp"
#include "gnd/oracles.hpp"
#include "gnd/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRefused = 4;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gnd::ConfigError(fmt::format("cannot write '{}'", path));
  out << content;
}

void emit(const gnd::Report& report, bool json) {
  if (json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << gnd::render_text(report);
  }
}

gnd::EnumerationLimits limits_from(std::uint64_t max_paths, std::size_t max_edges,
                                   std::uint64_t max_profiles) {
  return {max_paths, max_edges, max_profiles};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximation and verification tools for generalized network design games"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string csm = "shapley";
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  bool json = false;
  std::uint64_t max_paths = 10000;
  std::size_t max_edges = 12;
  std::uint64_t max_profiles = 10000000;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--instance", instance_path, "Instance JSON file")->required();
    sub->add_flag("--json", json, "Emit the report as JSON");
  };
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--max-paths", max_paths, "Simple-path enumeration cap per request");
    sub->add_option("--max-subset-edges", max_edges, "Largest graph for subset enumeration");
    sub->add_option("--max-profiles", max_profiles, "Largest strategy-profile product");
  };
  const std::vector<std::string> mechanisms{"proportional", "shapley", "shapley-sampled"};

  auto* solve = app.add_subcommand("solve", "Run approximate-best-response dynamics");
  add_common(solve);
  add_limits(solve);
  std::string selection = "det";
  std::string output = "best";
  std::optional<std::uint64_t> max_steps;
  bool brute = false;
  std::string trace_path;
  std::uint64_t max_samples = 100000;
  solve->add_option("--csm", csm, "Cost-sharing mechanism")
      ->check(CLI::IsMember(mechanisms));
  solve->add_option("--epsilon", epsilon, "Approximation parameter in (0, 1)");
  solve->add_option("--seed", seed, "Master RNG seed");
  solve->add_option("--selection", selection, "Player selection rule")
      ->check(CLI::IsMember({"det", "rand"}));
  solve->add_option("--output", output, "Returned profile")
      ->check(CLI::IsMember({"best", "last"}));
  solve->add_option("--max-steps", max_steps, "Override the step budget");
  solve->add_flag("--brute", brute, "Compare against the brute-force optimum");
  solve->add_option("--trace", trace_path, "Write the step trace CSV here");
  solve->add_option("--max-samples", max_samples, "Cap on permutation samples per share");

  auto* brute_cmd = app.add_subcommand("brute", "Exhaustive optimum");
  add_common(brute_cmd);
  add_limits(brute_cmd);

  auto* nash = app.add_subcommand("nash", "Enumerate pure Nash equilibria and the PoA");
  add_common(nash);
  add_limits(nash);
  std::string csv_path;
  nash->add_option("--csm", csm, "Cost-sharing mechanism")
      ->check(CLI::IsMember({"proportional", "shapley"}));
  nash->add_option("--csv", csv_path, "Write one row per profile here");

  auto* smooth = app.add_subcommand("smooth", "Check (lambda, mu)-smoothness");
  add_common(smooth);
  add_limits(smooth);
  std::optional<double> lambda_opt, mu_opt;
  double rho = 1.0;
  std::uint64_t pairs = 10000;
  smooth->add_option("--csm", csm, "Cost-sharing mechanism")
      ->check(CLI::IsMember({"proportional", "shapley"}));
  smooth->add_option("--lambda", lambda_opt, "lambda (default from the expansion constants)");
  smooth->add_option("--mu", mu_opt, "mu (default 1/(2 rho))");
  smooth->add_option("--rho", rho, "Oracle ratio folded into the default parameters");
  smooth->add_option("--seed", seed, "Seed for sampled pairs");
  smooth->add_option("--pairs", pairs, "Pair budget: exhaustive up to this many, else sampled");
  smooth->add_option("--csv", csv_path, "Write one row per pair here");

  auto* poa = app.add_subcommand("poa-gen", "Write a price-of-anarchy lower-bound instance");
  gnd::PoaFamilyParams family;
  std::string out_path;
  poa->add_option("--sigma", family.sigma, "Startup cost")->required();
  poa->add_option("--xi", family.xi, "Speed-scaling factor")->required();
  poa->add_option("--alpha", family.alpha, "Leading exponent")->required();
  poa->add_option("--q", family.q, "Number of exponent terms");
  poa->add_option("--tail-alpha", family.tail_alphas, "Exponents of the extra terms");
  poa->add_option("--out", out_path, "Output instance file")->required();

  auto* fpl = app.add_subcommand("fpl", "Follow-the-perturbed-leader dynamics");
  add_common(fpl);
  gnd::FplConfig fpl_config;
  fpl->add_option("--rounds", fpl_config.rounds, "Number of rounds");
  fpl->add_option("--round-cap", fpl_config.round_cap, "Cap on the default round count");
  fpl->add_option("--eta", fpl_config.eta, "Perturbation scale");
  fpl->add_option("--seed", seed, "Master RNG seed");
  fpl->add_option("--lower-bound", fpl_config.lower_bound,
                  "Lower bound on the normalized optimum");
  fpl->add_option("--trace", trace_path, "Write the regret trace CSV here");

  auto* bounds = app.add_subcommand("bounds", "Print the theoretical constants");
  add_common(bounds);
  std::optional<double> rho_opt;
  bounds->add_option("--csm", csm, "Cost-sharing mechanism")
      ->check(CLI::IsMember(mechanisms));
  bounds->add_option("--epsilon", epsilon, "Approximation parameter in (0, 1)");
  bounds->add_option("--rho", rho_opt, "Oracle ratio (default from the request kinds)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const auto limits = limits_from(max_paths, max_edges, max_profiles);
    if (*solve) {
      const auto instance = gnd::load_instance(instance_path);
      gnd::AbrdConfig config;
      config.epsilon = epsilon;
      config.seed = seed;
      config.mechanism = gnd::parse_mechanism(csm);
      config.selection =
          selection == "det" ? gnd::Selection::deterministic : gnd::Selection::randomized;
      config.output = output == "best" ? gnd::OutputMode::best : gnd::OutputMode::last;
      config.step_budget_override = max_steps;
      config.max_samples = max_samples;
      gnd::OptimumHook hook;
      if (brute) {
        hook = [&](const gnd::Instance& inst) { return gnd::brute_force_opt(inst, limits).cost; };
        // Refuse before running so a refusal never costs a full run.
        gnd::strategy_spaces(instance, limits);
      }
      if (!max_steps) {
        const auto b = gnd::theoretical_bounds(
            instance, gnd::instance_rho(instance), epsilon,
            gnd::rep_expansion_constants(config.mechanism == gnd::Mechanism::proportional
                                             ? gnd::Mechanism::proportional
                                             : gnd::Mechanism::shapley_exact,
                                         instance.exponents()));
        const double budget = config.selection == gnd::Selection::deterministic
                                  ? b.T_real
                                  : static_cast<double>(instance.request_count()) * b.T_real *
                                        b.T_real;
        if (budget > 1e7) {
          std::cerr << fmt::format(
              "warning: step budget {:.9g} is very large; runs stop at convergence, "
              "use --max-steps to cap it\n",
              budget);
        }
      }
      const auto result = gnd::run_abrd(instance, config, hook);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      if (!trace_path.empty()) write_file(trace_path, gnd::trace_csv(result.trace));
      emit(gnd::run_report(instance, config, result), json);
    } else if (*brute_cmd) {
      const auto instance = gnd::load_instance(instance_path);
      const auto opt = gnd::brute_force_opt(instance, limits);
      gnd::Report r;
      r["profiles"] = opt.profiles;
      r["optimum"] = opt.cost;
      r["profile"] = gnd::profile_json(instance, opt.profile);
      emit(r, json);
    } else if (*nash) {
      const auto instance = gnd::load_instance(instance_path);
      const auto mech = gnd::parse_mechanism(csm);
      const auto report = gnd::enumerate_nash(instance, mech, limits);
      const auto params = gnd::smoothness_parameters(instance, mech);
      gnd::Report r;
      r["mechanism"] = std::string(gnd::to_string(mech));
      r["profiles"] = report.profiles;
      r["equilibria"] = report.equilibria.size();
      r["optimum"] = report.opt_cost;
      r["worst_ne_cost"] = report.worst_ne_cost ? gnd::Report(*report.worst_ne_cost) : gnd::Report();
      r["poa"] = report.poa ? gnd::Report(*report.poa) : gnd::Report();
      r["robust_poa_bound"] = params.lambda / (1.0 - params.mu);
      gnd::Report eq = gnd::Report::array();
      for (std::size_t k = 0; k < report.equilibria.size(); ++k) {
        gnd::Report e;
        e["cost"] = report.equilibrium_costs[k];
        e["profile"] = gnd::profile_json(instance, report.equilibria[k]);
        eq.push_back(std::move(e));
      }
      if (json) r["equilibrium_profiles"] = std::move(eq);
      if (!csv_path.empty()) write_file(csv_path, gnd::nash_csv(report));
      emit(r, json);
    } else if (*smooth) {
      const auto instance = gnd::load_instance(instance_path);
      const auto mech = gnd::parse_mechanism(csm);
      auto params = gnd::smoothness_parameters(instance, mech, rho);
      if (lambda_opt) params.lambda = *lambda_opt;
      if (mu_opt) params.mu = *mu_opt;
      gnd::PairSource source;
      source.max_exhaustive_pairs = pairs;
      source.sampled_pairs = pairs;
      source.seed = seed;
      source.keep_rows = !csv_path.empty();
      const auto report = gnd::smoothness_check(instance, mech, params, source, limits);
      gnd::Report r;
      r["mechanism"] = std::string(gnd::to_string(mech));
      r["lambda"] = report.lambda;
      r["mu"] = report.mu;
      r["pairs"] = report.pairs;
      r["exhaustive"] = report.exhaustive;
      r["max_ratio"] = report.max_ratio;
      r["violations"] = report.violations;
      r["pass"] = report.pass;
      if (!csv_path.empty()) write_file(csv_path, gnd::smoothness_csv(report));
      emit(r, json);
    } else if (*poa) {
      const auto instance = gnd::poa_lower_bound_instance(family);
      gnd::save_instance(instance, out_path);
      std::cout << fmt::format("wrote {} requests, {} resources to {}\n",
                               instance.request_count(), instance.resource_count(), out_path);
    } else if (*fpl) {
      const auto instance = gnd::load_instance(instance_path);
      fpl_config.seed = seed;
      fpl_config.keep_regret_trace = !trace_path.empty();
      const auto result = gnd::run_l_apx(instance, fpl_config);
      if (!trace_path.empty()) write_file(trace_path, gnd::regret_csv(result.trace));
      gnd::Report r;
      r["seed"] = seed;
      r["rounds"] = result.rounds;
      r["theoretical_rounds"] = result.theoretical_rounds;
      r["eta"] = result.eta;
      r["scale"] = result.scale;
      r["chosen_round"] = result.chosen_round;
      r["cost"] = result.cost;
      r["regret"] = result.regret;
      r["regret_bound"] = result.regret_bound;
      if (result.guarantee) {
        r["guarantee"] = *result.guarantee;
        r["guarantee_note"] = "conditional on the supplied lower bound";
      }
      r["profile"] = gnd::profile_json(instance, result.profile);
      emit(r, json);
    } else if (*bounds) {
      const auto instance = gnd::load_instance(instance_path);
      const auto mech = gnd::parse_mechanism(csm);
      const auto constants = gnd::rep_expansion_constants(
          mech == gnd::Mechanism::proportional ? mech : gnd::Mechanism::shapley_exact,
          instance.exponents());
      const auto b = gnd::theoretical_bounds(
          instance, rho_opt.value_or(gnd::instance_rho(instance)), epsilon, constants);
      emit(gnd::bounds_report(b), json);
    }
  } catch (const gnd::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gnd::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const gnd::EnumerationRefused& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const gnd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
