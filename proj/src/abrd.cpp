#include "gnd/abrd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gnd/errors.hpp"
#include "gnd/format.hpp"
#include "gnd/potential.hpp"
#include "gnd/rng.hpp"

namespace gnd {

std::string_view to_string(Selection s) {
  return s == Selection::deterministic ? "det" : "rand";
}

std::string_view to_string(OutputMode m) { return m == OutputMode::best ? "best" : "last"; }

StrategyProfile initial_profile(const Instance& instance, double toll_floor) {
  StrategyProfile p(instance.request_count());
  TollFunction tolls(instance.resource_count());
  for (RequestId i = 0; i < instance.request_count(); ++i) {
    for (ResourceId e = 0; e < tolls.size(); ++e) tolls[e] = instance.cost(e, instance.weight(i, e));
    clamp_tolls(tolls, toll_floor);
    p[i] = answer_request(instance, i, tolls).reply;
  }
  return p;
}

TollFunction player_tolls(const Instance& instance, const CostShareEvaluator& shares,
                          const std::vector<std::vector<ShareUser>>& users, RequestId player,
                          std::uint64_t step, double toll_floor) {
  TollFunction tolls(instance.resource_count());
  std::vector<ShareUser> local;
  for (ResourceId e = 0; e < tolls.size(); ++e) {
    local.clear();
    for (const auto& u : users[e]) {
      if (u.request != player) local.push_back(u);
    }
    local.push_back({player, instance.weight(player, e)});
    tolls[e] = shares.share(e, local, player, step);
  }
  clamp_tolls(tolls, toll_floor);
  return tolls;
}

namespace {

BestResponse respond(const Instance& instance, const CostShareEvaluator& shares,
                     const StrategyProfile& profile,
                     const std::vector<std::vector<ShareUser>>& users, RequestId player,
                     std::uint64_t step, double toll_floor) {
  const auto tolls = player_tolls(instance, shares, users, player, step, toll_floor);
  auto answer = answer_request(instance, player, tolls);
  return {std::move(answer.reply), answer.toll_total, toll_of(profile[player], tolls)};
}

}  // namespace

BestResponse approximate_best_response(const Instance& instance,
                                       const CostShareEvaluator& shares,
                                       const StrategyProfile& profile, RequestId player,
                                       std::uint64_t step, double toll_floor) {
  return respond(instance, shares, profile, users_by_resource(instance, profile), player, step,
                 toll_floor);
}

DeltaVector delta_vector(const Instance& instance, const CostShareEvaluator& shares,
                         const StrategyProfile& profile, double epsilon1, std::uint64_t step,
                         double toll_floor) {
  const auto users = users_by_resource(instance, profile);
  DeltaVector out;
  for (RequestId i = 0; i < instance.request_count(); ++i) {
    auto r = respond(instance, shares, profile, users, i, step, toll_floor);
    const double d = r.current_cost - epsilon1 * r.cost;
    out.deltas.push_back(d);
    out.Delta += d;
    out.responses.push_back(std::move(r));
  }
  return out;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

}  // namespace

RunResult run_abrd(const Instance& instance, const AbrdConfig& config,
                   const OptimumHook& optimum) {
  RunResult result;
  const double rho = config.rho.value_or(instance_rho(instance));
  const auto constants = rep_expansion_constants(
      config.mechanism == Mechanism::proportional ? Mechanism::proportional
                                                  : Mechanism::shapley_exact,
      instance.exponents());
  result.bounds = theoretical_bounds(instance, rho, config.epsilon, constants);
  const std::uint64_t n = instance.request_count();

  std::uint64_t budget = result.bounds.T;
  if (config.selection == Selection::randomized) {
    budget = saturating_mul(n, saturating_mul(budget, budget));
  }
  if (config.step_budget_override) {
    budget = *config.step_budget_override;
    result.guarantee_void = true;
  }
  result.step_budget = budget;

  ShareSettings settings;
  settings.mechanism = config.mechanism;
  settings.epsilon = config.epsilon;
  settings.seed = config.seed;
  settings.exact_threshold = config.exact_threshold;
  settings.max_samples = config.max_samples;
  if (config.mechanism == Mechanism::shapley_sampled) {
    const double tne = static_cast<double>(std::max<std::uint64_t>(budget, 1)) *
                       static_cast<double>(n) * static_cast<double>(instance.resource_count());
    settings.delta = std::clamp(1.0 / (2.0 * tne * tne), 1e-300, 0.5);
    result.share_delta = settings.delta;
  }
  const CostShareEvaluator shares(instance, settings);
  const bool shapley = config.mechanism != Mechanism::proportional;

  StrategyProfile p = initial_profile(instance, config.toll_floor);
  auto record_cost = [&](StepRecord& rec) {
    rec.cost = total_cost(instance, p);
    if (shapley && potential_computable(instance, p, config.exact_threshold)) {
      rec.potential = potential(instance, p, config.exact_threshold);
    }
  };

  StepRecord first;
  record_cost(first);
  result.trace.push_back(first);
  std::size_t best_index = 0;
  StrategyProfile best = p;

  for (std::uint64_t t = 1; t <= budget; ++t) {
    auto dv = delta_vector(instance, shares, p, result.bounds.epsilon1, t, config.toll_floor);
    StepRecord rec;
    rec.t = t;
    rec.Delta = dv.Delta;
    rec.deltas = dv.deltas;
    const bool converged =
        std::all_of(dv.deltas.begin(), dv.deltas.end(), [](double d) { return d <= 0.0; });
    if (converged) {
      rec.converged = true;
      record_cost(rec);
      result.trace.push_back(std::move(rec));
      result.converged = true;
      break;
    }
    std::optional<RequestId> chosen;
    if (config.selection == Selection::deterministic) {
      const double threshold = dv.Delta / static_cast<double>(n);
      for (RequestId j = 0; j < n; ++j) {
        if (dv.deltas[j] > 0.0 && dv.deltas[j] >= threshold) {
          chosen = j;
          break;
        }
      }
    } else {
      auto rng = make_stream(config.seed, StreamKind::selection, {t});
      const RequestId j = uniform_below(rng, n);
      rec.delta_selected = dv.deltas[j];
      if (dv.deltas[j] > 0.0) chosen = j;
    }
    if (chosen) {
      rec.player = chosen;
      rec.delta_selected = dv.deltas[*chosen];
      p[*chosen] = std::move(dv.responses[*chosen].reply);
    }
    record_cost(rec);
    if (rec.cost < result.trace[best_index].cost) {
      best_index = result.trace.size();
      best = p;
    }
    result.trace.push_back(std::move(rec));
  }

  result.best_profile = std::move(best);
  result.best_cost = result.trace[best_index].cost;
  result.last_profile = p;
  result.last_cost = result.trace.back().cost;
  if (config.output == OutputMode::best) {
    result.profile = result.best_profile;
    result.cost = result.best_cost;
    result.t_star = result.trace[best_index].t;
  } else {
    result.profile = result.last_profile;
    result.cost = result.last_cost;
    result.t_star = result.trace.back().t;
  }
  result.sampling = shares.stats();
  if (result.sampling.capped_shares > 0) {
    result.warnings.push_back(fmt::format(
        "{} sampled shares hit the sample cap of {} (largest requested count {}); the "
        "epsilon guarantee does not hold for them",
        result.sampling.capped_shares, config.max_samples, result.sampling.largest_requested));
  }
  if (optimum) {
    result.optimum = optimum(instance);
    if (*result.optimum > 0.0) result.empirical_ratio = result.cost / *result.optimum;
  }
  return result;
}

std::string trace_csv(const std::vector<StepRecord>& trace) {
  std::string out = "step,player,delta_selected,Delta,cost,potential,converged\n";
  for (const auto& r : trace) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.t,
                       r.player ? fmt::format("{}", *r.player) : std::string(),
                       format_real(r.delta_selected), format_real(r.Delta), format_real(r.cost),
                       r.potential ? format_real(*r.potential) : std::string(),
                       r.converged ? "true" : "false");
  }
  return out;
}

}  // namespace gnd
