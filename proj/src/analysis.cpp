#include "gnd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "gnd/bounds.hpp"
#include "gnd/errors.hpp"
#include "gnd/format.hpp"
#include "gnd/rng.hpp"

namespace gnd {

bool leq_tol(double a, double b) {
  return a <= b + std::max(kAbsTol, kRelTol * std::max(std::abs(a), std::abs(b)));
}

bool eq_tol(double a, double b) { return leq_tol(a, b) && leq_tol(b, a); }

namespace {

void simple_paths(const HostGraph& g, VertexId v, VertexId target, std::vector<bool>& on_path,
                  Reply& edges, std::set<Reply>& seen, std::vector<Reply>& out,
                  std::uint64_t cap) {
  if (v == target) {
    Reply r = normalize_reply(edges);
    if (seen.insert(r).second) {
      if (out.size() >= cap) {
        throw EnumerationRefused(fmt::format("more than {} simple paths", cap));
      }
      out.push_back(std::move(r));
    }
    return;
  }
  on_path[v] = true;
  for (const auto& arc : g.out_arcs(v)) {
    if (on_path[arc.to]) continue;
    edges.push_back(arc.resource);
    simple_paths(g, arc.to, target, on_path, edges, seen, out, cap);
    edges.pop_back();
  }
  on_path[v] = false;
}

std::vector<Reply> feasible_subsets(const Instance& instance, RequestId request,
                                    const EnumerationLimits& limits) {
  const auto& g = instance.host_graph();
  const auto& edges = g.edges();
  if (edges.size() > limits.max_subset_edges) {
    throw EnumerationRefused(fmt::format(
        "request {} needs subset enumeration over {} edges (limit {})",
        instance.request(request).id, edges.size(), limits.max_subset_edges));
  }
  std::vector<Reply> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    Reply r;
    for (std::size_t b = 0; b < edges.size(); ++b) {
      if (mask & (std::uint64_t{1} << b)) r.push_back(edges[b].resource);
    }
    r = normalize_reply(std::move(r));
    if (validate_reply(instance, request, r)) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<Reply> candidate_replies(const Instance& instance, RequestId request,
                                     const EnumerationLimits& limits) {
  const auto& kind = instance.request(request).kind;
  std::vector<Reply> out;
  if (const auto* r = std::get_if<Routing>(&kind)) {
    const auto& g = instance.host_graph();
    std::vector<bool> on_path(g.vertex_count(), false);
    Reply edges;
    std::set<Reply> seen;
    simple_paths(g, r->source, r->target, on_path, edges, seen, out, limits.max_paths);
  } else if (std::holds_alternative<MultiRouting>(kind) ||
             std::holds_alternative<SetConnectivity>(kind)) {
    out = feasible_subsets(instance, request, limits);
  } else if (const auto* m = std::get_if<MachineChoice>(&kind)) {
    std::set<ResourceId> seen;
    for (ResourceId e : m->machines) {
      if (seen.insert(e).second) out.push_back({e});
    }
  } else {
    std::set<Reply> seen;
    for (const auto& reply : std::get<ExplicitReplies>(kind).replies) {
      auto n = normalize_reply(reply);
      if (seen.insert(n).second) out.push_back(std::move(n));
    }
  }
  if (out.empty()) {
    throw InfeasibleError(
        fmt::format("request {} has no feasible reply", instance.request(request).id));
  }
  return out;
}

std::uint64_t profile_count(const std::vector<std::vector<Reply>>& spaces) {
  std::uint64_t total = 1;
  for (const auto& s : spaces) {
    if (s.empty()) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / s.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= s.size();
  }
  return total;
}

std::vector<std::vector<Reply>> strategy_spaces(const Instance& instance,
                                                const EnumerationLimits& limits) {
  std::vector<std::vector<Reply>> spaces;
  for (RequestId i = 0; i < instance.request_count(); ++i) {
    spaces.push_back(candidate_replies(instance, i, limits));
  }
  const auto count = profile_count(spaces);
  if (count > limits.max_profiles) {
    throw EnumerationRefused(
        fmt::format("{} profiles exceed the enumeration limit of {}", count, limits.max_profiles));
  }
  return spaces;
}

StrategyProfile profile_at(const std::vector<std::vector<Reply>>& spaces, std::uint64_t index) {
  StrategyProfile p(spaces.size());
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    p[i] = spaces[i][index % spaces[i].size()];
    index /= spaces[i].size();
  }
  return p;
}

namespace {

// Calls visit(index, profile, loads) for every profile, request 0 fastest.
template <typename Visit>
void for_each_profile(const Instance& instance, const std::vector<std::vector<Reply>>& spaces,
                      Visit&& visit) {
  const std::size_t n = spaces.size();
  std::vector<std::size_t> digit(n, 0);
  StrategyProfile p(n);
  LoadVector loads(instance.resource_count(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = spaces[i][0];
    for (ResourceId e : p[i]) loads[e] += instance.weight(i, e);
  }
  const std::uint64_t total = profile_count(spaces);
  for (std::uint64_t index = 0; index < total; ++index) {
    visit(index, static_cast<const StrategyProfile&>(p), static_cast<const LoadVector&>(loads));
    for (std::size_t i = 0; i < n; ++i) {
      for (ResourceId e : p[i]) loads[e] -= instance.weight(i, e);
      digit[i] = (digit[i] + 1) % spaces[i].size();
      p[i] = spaces[i][digit[i]];
      for (ResourceId e : p[i]) loads[e] += instance.weight(i, e);
      if (digit[i] != 0) break;
    }
  }
}

Mechanism exact_of(Mechanism m) {
  return m == Mechanism::proportional ? Mechanism::proportional : Mechanism::shapley_exact;
}

}  // namespace

OptResult brute_force_opt(const Instance& instance, const EnumerationLimits& limits) {
  const auto spaces = strategy_spaces(instance, limits);
  OptResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for_each_profile(instance, spaces, [&](std::uint64_t, const StrategyProfile& p,
                                         const LoadVector& loads) {
    const double c = total_cost(instance, loads);
    if (c < best.cost) {
      best.cost = c;
      best.profile = p;
    }
    ++best.profiles;
  });
  return best;
}

bool is_nash(const Instance& instance, Mechanism mechanism,
             const std::vector<std::vector<Reply>>& spaces, const StrategyProfile& profile) {
  const auto m = exact_of(mechanism);
  const auto users = users_by_resource(instance, profile);
  for (RequestId i = 0; i < profile.size(); ++i) {
    const double current = deviation_cost(instance, m, users, i, profile[i]);
    for (const auto& alt : spaces[i]) {
      if (alt == profile[i]) continue;
      if (!leq_tol(current, deviation_cost(instance, m, users, i, alt))) return false;
    }
  }
  return true;
}

PoaReport enumerate_nash(const Instance& instance, Mechanism mechanism,
                         const EnumerationLimits& limits) {
  const auto spaces = strategy_spaces(instance, limits);
  PoaReport report;
  report.opt_cost = std::numeric_limits<double>::infinity();
  const bool keep_rows = profile_count(spaces) <= 100000;
  for_each_profile(instance, spaces, [&](std::uint64_t index, const StrategyProfile& p,
                                         const LoadVector& loads) {
    const double c = total_cost(instance, loads);
    if (c < report.opt_cost) {
      report.opt_cost = c;
      report.opt_profile = p;
    }
    const bool nash = is_nash(instance, mechanism, spaces, p);
    if (nash) {
      report.equilibria.push_back(p);
      report.equilibrium_costs.push_back(c);
      if (!report.worst_ne_cost || c > *report.worst_ne_cost) report.worst_ne_cost = c;
    }
    if (keep_rows) report.rows.push_back({index, c, nash});
    ++report.profiles;
  });
  if (report.worst_ne_cost && report.opt_cost > 0.0) {
    report.poa = *report.worst_ne_cost / report.opt_cost;
  }
  return report;
}

SmoothnessParams smoothness_parameters(const Instance& instance, Mechanism mechanism,
                                       double rho) {
  const auto constants = rep_expansion_constants(exact_of(mechanism), instance.exponents());
  const double max_alpha = instance.exponents().max_alpha();
  return {gamma_alpha(instance) + lambda_alpha(constants, max_alpha) * std::pow(rho, max_alpha),
          1.0 / (2.0 * rho)};
}

SmoothnessReport smoothness_check(const Instance& instance, Mechanism mechanism,
                                  SmoothnessParams params, const PairSource& source,
                                  const EnumerationLimits& limits) {
  const auto m = exact_of(mechanism);
  const auto spaces = strategy_spaces(instance, limits);
  const std::uint64_t count = profile_count(spaces);
  SmoothnessReport report;
  report.lambda = params.lambda;
  report.mu = params.mu;
  report.max_ratio = -std::numeric_limits<double>::infinity();
  report.exhaustive = count <= source.max_exhaustive_pairs / count;

  std::vector<StrategyProfile> cache;
  std::vector<double> costs;
  if (report.exhaustive) {
    for (std::uint64_t k = 0; k < count; ++k) {
      cache.push_back(profile_at(spaces, k));
      costs.push_back(total_cost(instance, cache.back()));
    }
  }
  auto check = [&](std::uint64_t a, std::uint64_t b, const StrategyProfile& p,
                   const StrategyProfile& q, double cp, double cq) {
    const auto users = users_by_resource(instance, p);
    double lhs = 0.0;
    for (RequestId i = 0; i < p.size(); ++i) lhs += deviation_cost(instance, m, users, i, q[i]);
    const double rhs = params.lambda * cq + params.mu * cp;
    if (!leq_tol(lhs, rhs)) ++report.violations;
    if (cq > 0.0) report.max_ratio = std::max(report.max_ratio, (lhs - params.mu * cp) / cq);
    if (source.keep_rows) report.rows.push_back({a, b, lhs, cp, cq});
    ++report.pairs;
  };
  if (report.exhaustive) {
    for (std::uint64_t a = 0; a < count; ++a) {
      for (std::uint64_t b = 0; b < count; ++b) {
        check(a, b, cache[a], cache[b], costs[a], costs[b]);
      }
    }
  } else {
    for (std::uint64_t k = 0; k < source.sampled_pairs; ++k) {
      auto rng = make_stream(source.seed, StreamKind::sample_pairs, {k});
      const auto a = uniform_below(rng, count);
      const auto b = uniform_below(rng, count);
      const auto p = profile_at(spaces, a);
      const auto q = profile_at(spaces, b);
      check(a, b, p, q, total_cost(instance, p), total_cost(instance, q));
    }
  }
  report.pass = report.violations == 0;
  return report;
}

PotentialBoundsReport potential_bounds_check(const Instance& instance,
                                             std::span<const StrategyProfile> profiles) {
  PotentialBoundsReport report;
  const double b = std::ceil(instance.exponents().max_alpha());
  const double a = harmonic(instance.request_count());
  for (const auto& p : profiles) {
    const double c = total_cost(instance, p);
    const double phi = potential(instance, p);
    if (!leq_tol(c / b, phi) || !leq_tol(phi, a * c)) ++report.violations;
    ++report.checked;
  }
  report.pass = report.violations == 0;
  return report;
}

ExactnessReport potential_exactness_check(const Instance& instance,
                                          const StrategyProfile& profile, RequestId player,
                                          const Reply& alternative) {
  StrategyProfile moved = profile;
  moved[player] = normalize_reply(alternative);
  ExactnessReport r;
  r.potential_change = potential(instance, moved) - potential(instance, profile);
  r.cost_change = individual_cost(instance, Mechanism::shapley_exact, moved, player) -
                  individual_cost(instance, Mechanism::shapley_exact, profile, player);
  r.holds = eq_tol(r.potential_change, r.cost_change);
  return r;
}

BalanceReport budget_balance_check(Mechanism mechanism, const ExponentProfile& exponents,
                                   std::span<const BalanceQuery> queries) {
  BalanceReport report;
  const auto m = exact_of(mechanism);
  std::vector<ShareUser> users;
  for (const auto& q : queries) {
    users.clear();
    Load total = 0;
    for (std::size_t k = 0; k < q.weights.size(); ++k) {
      users.push_back({k, q.weights[k]});
      total += q.weights[k];
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < users.size(); ++k) {
      sum += exact_share(m, {q.resource, exponents, users, k});
    }
    const double f = rep_cost(q.resource, exponents, total);
    const double err = std::abs(sum - f) / std::max(std::abs(f), 1e-300);
    report.max_relative_error = std::max(report.max_relative_error, err);
    if (!eq_tol(sum, f)) report.pass = false;
    ++report.checked;
  }
  return report;
}

Instance poa_lower_bound_instance(const PoaFamilyParams& params) {
  if (!(params.sigma > 0.0 && params.xi > 0.0 && params.alpha > 1.0)) {
    throw ConfigError("the family needs sigma > 0, xi > 0 and alpha > 1");
  }
  if (params.q < 1) throw ConfigError("q must be at least 1");
  const double exact_n = std::pow(params.sigma / params.xi, 1.0 / params.alpha);
  const double rounded = std::round(exact_n);
  if (std::abs(exact_n - rounded) > 1e-9 * std::max(1.0, exact_n) || rounded < 2.0) {
    const double suggestion_n = std::max(2.0, rounded);
    throw ConfigError(fmt::format(
        "(sigma/xi)^(1/alpha) = {} is not an integer of at least 2; try sigma = {}",
        format_real(exact_n), format_real(params.xi * std::pow(suggestion_n, params.alpha))));
  }
  const auto n = static_cast<std::size_t>(rounded);
  const double nd = rounded;

  std::vector<double> alphas{params.alpha};
  if (params.q > 1) {
    if (!params.tail_alphas.empty() && params.tail_alphas.size() != params.q - 1) {
      throw ConfigError(fmt::format("expected {} tail exponents", params.q - 1));
    }
    if (!(params.tail_fraction > 0.0 && params.tail_fraction < 1.0)) {
      throw ConfigError("tail fraction must lie in (0, 1)");
    }
    for (std::size_t j = 1; j < params.q; ++j) {
      const double a = params.tail_alphas.empty() ? 1.0 + (params.alpha - 1.0) / 2.0
                                                  : params.tail_alphas[j - 1];
      if (!(a > 1.0 && a < params.alpha)) {
        throw ConfigError("tail exponents must lie strictly between 1 and alpha");
      }
      alphas.push_back(a);
    }
  }
  auto xis_for = [&](double xi1) {
    std::vector<double> xis{xi1};
    for (std::size_t j = 1; j < alphas.size(); ++j) {
      xis.push_back(params.tail_fraction * xi1 /
                    (static_cast<double>(params.q) * std::pow(nd, alphas[j]) * (nd + 1.0)));
    }
    return xis;
  };

  std::vector<std::string> vertices{"s", "t*"};
  for (std::size_t i = 1; i <= n; ++i) vertices.push_back(fmt::format("t{}", i));
  std::vector<ResourceParams> resources;
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    resources.push_back({fmt::format("e{}", i + 1), params.sigma, xis_for(params.xi)});
    edges.push_back({resources.size() - 1, 0, i + 2});
  }
  for (std::size_t i = 0; i < n; ++i) {
    resources.push_back({fmt::format("e'{}", i + 1), params.sigma / (nd + 1.0),
                         xis_for(3.0 * params.xi / (nd + 1.0))});
    edges.push_back({resources.size() - 1, 1, i + 2});
  }
  resources.push_back({"e*", nd * params.sigma / (nd + 1.0), xis_for(nd * params.xi / (nd + 1.0))});
  edges.push_back({resources.size() - 1, 0, 1});

  std::vector<Request> requests;
  for (std::size_t i = 0; i < n; ++i) {
    requests.push_back({static_cast<std::int64_t>(i + 1),
                        std::vector<Load>(resources.size(), 1), Routing{0, i + 2}});
  }
  return Instance(ExponentProfile{alphas}, std::move(resources),
                  HostGraph(true, std::move(vertices), std::move(edges)), std::move(requests));
}

std::string nash_csv(const PoaReport& report) {
  std::string out = "profile,cost,nash\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{}\n", r.index, format_real(r.cost), r.nash ? "true" : "false");
  }
  return out;
}

std::string smoothness_csv(const SmoothnessReport& report) {
  std::string out = "p,p_prime,lhs,cost_p,cost_p_prime,rhs,holds\n";
  for (const auto& r : report.rows) {
    const double rhs = report.lambda * r.cost_p_prime + report.mu * r.cost_p;
    out += fmt::format("{},{},{},{},{},{},{}\n", r.p, r.p_prime, format_real(r.lhs),
                       format_real(r.cost_p), format_real(r.cost_p_prime), format_real(rhs),
                       leq_tol(r.lhs, rhs) ? "true" : "false");
  }
  return out;
}

}  // namespace gnd
