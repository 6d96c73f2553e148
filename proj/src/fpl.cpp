#include "gnd/fpl.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gnd/bounds.hpp"
#include "gnd/errors.hpp"
#include "gnd/format.hpp"
#include "gnd/graph.hpp"
#include "gnd/oracles.hpp"
#include "gnd/rng.hpp"
#include "gnd/sharing.hpp"

namespace gnd {

namespace {

void require_routing(const Instance& instance) {
  for (const auto& r : instance.requests()) {
    if (!std::holds_alternative<Routing>(r.kind)) {
      throw ConfigError(fmt::format("request {} is not a routing request", r.id));
    }
  }
}

}  // namespace

NormalizedInstance normalize_costs(const Instance& instance) {
  require_routing(instance);
  Load total = 0;
  for (const auto& r : instance.requests()) {
    total += *std::max_element(r.weights.begin(), r.weights.end());
  }
  double s = 1.0;
  for (ResourceId e = 0; e < instance.resource_count(); ++e) s = std::max(s, instance.cost(e, total));
  auto resources = instance.resources();
  for (auto& r : resources) {
    r.sigma /= s;
    for (auto& x : r.xis) x /= s;
  }
  return {Instance(instance.exponents(), std::move(resources), instance.graph(),
                   instance.requests()),
          s};
}

Reply fpl_step(const HostGraph& graph, VertexId source, VertexId target,
               std::span<const double> cumulative, double eta, std::mt19937_64& rng) {
  std::vector<double> w(cumulative.begin(), cumulative.end());
  for (auto& x : w) x = std::max(x + eta * uniform01(rng), kDefaultTollFloor);
  auto path = shortest_path(graph, source, target, w);
  if (!path) throw InfeasibleError("no path between the routing endpoints");
  return normalize_reply(path->resources);
}

FplResult run_l_apx(const Instance& original, const FplConfig& config) {
  auto normalized = normalize_costs(original);
  const Instance& instance = normalized.instance;
  const auto& graph = instance.host_graph();
  const std::size_t n = instance.request_count();
  const std::size_t m = instance.resource_count();
  const auto v = static_cast<double>(graph.vertex_count());

  FplResult result;
  result.scale = normalized.scale;
  result.theoretical_rounds = 4.0 * static_cast<double>(n * n) * v * v * static_cast<double>(m);
  result.rounds = config.rounds.value_or(static_cast<std::uint64_t>(
      std::min(result.theoretical_rounds, static_cast<double>(config.round_cap))));
  if (result.rounds < 1) throw ConfigError("FPL needs at least one round");
  result.eta = config.eta.value_or(std::sqrt(static_cast<double>(result.rounds) /
                                             static_cast<double>(m)));
  if (!(result.eta > 0.0)) throw ConfigError("perturbation scale must be positive");
  result.regret_bound =
      2.0 * v * std::sqrt(static_cast<double>(m) * static_cast<double>(result.rounds));

  auto pick = make_stream(config.seed, StreamKind::round_pick, {});
  result.chosen_round = uniform_below(pick, result.rounds);

  std::vector<std::vector<double>> cumulative(n, std::vector<double>(m, 0.0));
  std::vector<double> realized(n, 0.0);
  StrategyProfile p(n);
  std::vector<ShareUser> local;
  for (std::uint64_t t = 0; t < result.rounds; ++t) {
    for (RequestId i = 0; i < n; ++i) {
      const auto& r = std::get<Routing>(instance.request(i).kind);
      auto rng = make_stream(config.seed, StreamKind::perturbation, {t, i});
      p[i] = fpl_step(graph, r.source, r.target, cumulative[i], result.eta, rng);
    }
    if (t == result.chosen_round) result.profile = p;
    const auto users = users_by_resource(instance, p);
    for (RequestId i = 0; i < n; ++i) {
      std::vector<double> loss(m);
      for (ResourceId e = 0; e < m; ++e) {
        local.clear();
        for (const auto& u : users[e]) {
          if (u.request != i) local.push_back(u);
        }
        local.push_back({i, instance.weight(i, e)});
        loss[e] = proportional_share({instance.resource(e), instance.exponents(), local, i});
        cumulative[i][e] += loss[e];
      }
      realized[i] += toll_of(p[i], loss);
      if (config.keep_regret_trace) {
        const auto& r = std::get<Routing>(instance.request(i).kind);
        auto tolls = cumulative[i];
        clamp_tolls(tolls);
        const auto best = routing_oracle(graph, r.source, r.target, tolls);
        result.trace.push_back(
            {t, i, realized[i], toll_of(best.reply, cumulative[i])});
      }
    }
  }
  for (RequestId i = 0; i < n; ++i) {
    const auto& r = std::get<Routing>(instance.request(i).kind);
    auto tolls = cumulative[i];
    clamp_tolls(tolls);
    const auto best = routing_oracle(graph, r.source, r.target, tolls);
    result.regret.push_back(realized[i] - toll_of(best.reply, cumulative[i]));
  }
  result.cost = total_cost(original, result.profile);
  if (config.lower_bound) {
    if (!(*config.lower_bound > 0.0)) throw ConfigError("lower bound must be positive");
    const auto constants = rep_expansion_constants(Mechanism::proportional, instance.exponents());
    result.guarantee =
        2.0 * (gamma_alpha(instance) +
               lambda_alpha(constants, instance.exponents().max_alpha()) +
               1.0 / *config.lower_bound);
  }
  return result;
}

std::string regret_csv(const std::vector<RegretRow>& trace) {
  std::string out = "round,player,realized,best_fixed\n";
  for (const auto& r : trace) {
    out += fmt::format("{},{},{},{}\n", r.round, r.player, format_real(r.realized),
                       format_real(r.best_fixed));
  }
  return out;
}

}  // namespace gnd
