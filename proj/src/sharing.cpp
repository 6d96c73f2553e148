#include "gnd/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <numeric>

#include <fmt/format.h>

#include "gnd/errors.hpp"
#include "gnd/rng.hpp"

namespace gnd {

std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::proportional:
      return "proportional";
    case Mechanism::shapley_exact:
      return "shapley";
    case Mechanism::shapley_sampled:
      return "shapley-sampled";
  }
  return "?";
}

Mechanism parse_mechanism(std::string_view name) {
  if (name == "proportional") return Mechanism::proportional;
  if (name == "shapley" || name == "shapley-exact") return Mechanism::shapley_exact;
  if (name == "shapley-sampled") return Mechanism::shapley_sampled;
  throw ConfigError(fmt::format("unknown cost-sharing mechanism '{}'", name));
}

double h_value(const ResourceParams& resource, const ExponentProfile& exponents,
               Load weight_sum) {
  if (weight_sum <= 0) return 0.0;
  const double log_sum = std::log(static_cast<double>(weight_sum));
  double h = 0.0;
  for (std::size_t j = 0; j < exponents.alphas.size(); ++j) {
    if (resource.xis[j] == 0.0) continue;
    h += resource.xis[j] * std::exp(exponents.alphas[j] * log_sum);
  }
  return h;
}

namespace {

struct Split {
  Load target_weight = 0;
  Load total = 0;
  std::vector<Load> others;
};

Split split_users(const ShareQuery& q) {
  Split s;
  bool found = false;
  for (const auto& u : q.users) {
    if (u.weight < 1) throw StructuralError("share query has a weight below 1");
    s.total += u.weight;
    if (u.request == q.target && !found) {
      s.target_weight = u.weight;
      found = true;
    } else {
      s.others.push_back(u.weight);
    }
  }
  if (!found) throw StructuralError("share query target is not among the users");
  return s;
}

}  // namespace

double proportional_share(const ShareQuery& query) {
  const auto s = split_users(query);
  return static_cast<double>(s.target_weight) / static_cast<double>(s.total) *
         rep_cost(query.resource, query.exponents, s.total);
}

double shapley_exact(const ShareQuery& query, std::size_t threshold) {
  const auto s = split_users(query);
  const std::size_t n = s.others.size() + 1;
  if (n > threshold) {
    throw UnsupportedError(fmt::format(
        "exact Shapley share requested for {} users (threshold {})", n, threshold));
  }
  const std::size_t m = n - 1;
  // coefficient[k] = k! (n-1-k)! / n! = 1 / (n * C(n-1, k))
  std::vector<double> coefficient(n);
  double binom = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    coefficient[k] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(m - k) / static_cast<double>(k + 1);
  }
  double value = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Load sum = 0;
    for (std::size_t b = 0; b < m; ++b) {
      if (mask & (std::uint64_t{1} << b)) sum += s.others[b];
    }
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    value += coefficient[k] * (h_value(query.resource, query.exponents, sum + s.target_weight) -
                               h_value(query.resource, query.exponents, sum));
  }
  return query.resource.sigma / static_cast<double>(n) + value;
}

std::uint64_t hoeffding_sample_count(const ShareQuery& query, double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  const auto s = split_users(query);
  const double n = static_cast<double>(s.others.size() + 1);
  if (s.others.empty()) return 0;
  const double range = h_value(query.resource, query.exponents, s.total);
  const double lower =
      query.resource.sigma / n + h_value(query.resource, query.exponents, s.target_weight);
  const double m =
      std::ceil(range * range * std::log(2.0 / delta) / (2.0 * std::pow(epsilon * lower, 2)));
  if (!(m < 1.8e19)) return UINT64_MAX;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(m));
}

SampledShare shapley_sampled(const ShareQuery& query, double epsilon, double delta,
                             std::mt19937_64& rng, std::uint64_t max_samples) {
  const auto s = split_users(query);
  const std::size_t n = s.others.size() + 1;
  if (n == 1) {
    return {rep_cost(query.resource, query.exponents, s.target_weight), 0, false};
  }
  SampledShare out;
  std::uint64_t wanted = hoeffding_sample_count(query, epsilon, delta);
  out.capped = wanted > max_samples;
  out.samples = std::min(wanted, std::max<std::uint64_t>(1, max_samples));

  // Position n-1 holds the target; Fisher-Yates over all n slots.
  std::vector<Load> order(s.others);
  order.push_back(s.target_weight);
  std::vector<std::size_t> perm(n);
  double sum = 0.0;
  for (std::uint64_t r = 0; r < out.samples; ++r) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t k = n - 1; k > 0; --k) {
      std::swap(perm[k], perm[uniform_below(rng, k + 1)]);
    }
    Load before = 0;
    for (std::size_t k = 0; k < n && perm[k] != n - 1; ++k) before += order[perm[k]];
    sum += h_value(query.resource, query.exponents, before + s.target_weight) -
           h_value(query.resource, query.exponents, before);
  }
  out.value = query.resource.sigma / static_cast<double>(n) +
              sum / static_cast<double>(out.samples);
  return out;
}

double exact_share(Mechanism mechanism, const ShareQuery& query, std::size_t threshold) {
  switch (mechanism) {
    case Mechanism::proportional:
      return proportional_share(query);
    case Mechanism::shapley_exact:
      return shapley_exact(query, threshold);
    case Mechanism::shapley_sampled:
      break;
  }
  throw ConfigError("exact share requested for a sampled mechanism");
}

double RepExpansionConstants::z_max() const {
  double z = 0.0;
  for (const auto& per_j : terms) {
    for (const auto& t : per_j) z = std::max(z, t.z);
  }
  return std::ceil(z);
}

double generalized_binomial(double alpha, unsigned k) {
  double c = 1.0;
  for (unsigned m = 0; m < k; ++m) c *= (alpha - m) / static_cast<double>(m + 1);
  return c;
}

RepExpansionConstants rep_expansion_constants(Mechanism mechanism,
                                              const ExponentProfile& exponents) {
  RepExpansionConstants c;
  for (double a : exponents.alphas) {
    double z1 = 0.0, z2 = 0.0;
    if (mechanism == Mechanism::proportional) {
      z1 = z2 = std::pow(2.0, a - 1.0);
    } else {
      z1 = std::pow(3.0, a);
      z2 = 2.0 * generalized_binomial(a, static_cast<unsigned>(std::floor((a + 1.0) / 2.0)));
    }
    c.terms.push_back({{0.0, a, z1}, {a - 1.0, 1.0, z2}});
  }
  return c;
}

ExpansionVerdict rep_expansion_check(Mechanism mechanism, const ShareQuery& query) {
  const auto s = split_users(query);
  const auto constants = rep_expansion_constants(mechanism, query.exponents);
  ExpansionVerdict v;
  v.share = exact_share(mechanism == Mechanism::proportional ? Mechanism::proportional
                                                             : Mechanism::shapley_exact,
                        query);
  const double rest = static_cast<double>(s.total - s.target_weight);
  const double own = static_cast<double>(s.target_weight);
  v.bound = query.resource.sigma;
  for (std::size_t j = 0; j < constants.terms.size(); ++j) {
    double inner = 0.0;
    for (const auto& t : constants.terms[j]) {
      inner += t.z * std::pow(rest, t.x) * std::pow(own, t.y);
    }
    v.bound += query.resource.xis[j] * inner;
  }
  v.holds = v.share <= v.bound * (1.0 + 1e-9) + 1e-12;
  return v;
}

std::vector<std::vector<ShareUser>> users_by_resource(const Instance& instance,
                                                      const StrategyProfile& profile) {
  std::vector<std::vector<ShareUser>> users(instance.resource_count());
  for (RequestId i = 0; i < profile.size(); ++i) {
    for (ResourceId e : profile[i]) users.at(e).push_back({i, instance.weight(i, e)});
  }
  return users;
}

double deviation_cost(const Instance& instance, Mechanism mechanism,
                      const std::vector<std::vector<ShareUser>>& users, RequestId player,
                      const Reply& reply, std::size_t threshold) {
  double cost = 0.0;
  std::vector<ShareUser> local;
  for (ResourceId e : reply) {
    local.clear();
    for (const auto& u : users[e]) {
      if (u.request != player) local.push_back(u);
    }
    local.push_back({player, instance.weight(player, e)});
    cost += exact_share(mechanism,
                        {instance.resource(e), instance.exponents(), local, player}, threshold);
  }
  return cost;
}

double individual_cost(const Instance& instance, Mechanism mechanism,
                       const StrategyProfile& profile, RequestId player,
                       std::size_t threshold) {
  return deviation_cost(instance, mechanism, users_by_resource(instance, profile), player,
                        profile[player], threshold);
}

CostShareEvaluator::CostShareEvaluator(const Instance& instance, ShareSettings settings)
    : instance_(instance), settings_(settings) {}

double CostShareEvaluator::share(ResourceId resource, std::span<const ShareUser> users,
                                 RequestId target, std::uint64_t step) const {
  const ShareQuery query{instance_.resource(resource), instance_.exponents(), users, target};
  if (settings_.mechanism != Mechanism::shapley_sampled) {
    return exact_share(settings_.mechanism, query, settings_.exact_threshold);
  }
  auto rng = make_stream(settings_.seed, StreamKind::cost_share, {step, target, resource});
  auto sampled =
      shapley_sampled(query, settings_.epsilon, settings_.delta, rng, settings_.max_samples);
  if (users.size() > 1) {
    ++stats_.sampled_shares;
    stats_.total_samples += sampled.samples;
    stats_.capped_shares += sampled.capped ? 1 : 0;
    stats_.largest_requested = std::max(
        stats_.largest_requested,
        hoeffding_sample_count(query, settings_.epsilon, settings_.delta));
  }
  return sampled.value;
}

}  // namespace gnd
