#pragma once

// Separable, uniform cost-sharing mechanisms. A share depends only on the
// resource, the multiset of weights its users place on it, and the target's
// own weight.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "gnd/instance.hpp"

namespace gnd {

enum class Mechanism { proportional, shapley_exact, shapley_sampled };

std::string_view to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view name);

inline constexpr std::size_t kExactShapleyThreshold = 12;

struct ShareUser {
  RequestId request;
  Load weight;
};

// Non-owning view of one share computation.
struct ShareQuery {
  const ResourceParams& resource;
  const ExponentProfile& exponents;
  std::span<const ShareUser> users;
  RequestId target;
};

// h_e(X) evaluated at the total weight of X: sum_j xi_j * (sum)^alpha_j.
double h_value(const ResourceParams& resource, const ExponentProfile& exponents,
               Load weight_sum);

double proportional_share(const ShareQuery& query);

// Subset-coefficient form of the Shapley share. Throws UnsupportedError
// above `threshold` users.
double shapley_exact(const ShareQuery& query, std::size_t threshold = kExactShapleyThreshold);

// Hoeffding count guaranteeing a (1 +- epsilon) estimate with probability
// at least 1 - delta.
std::uint64_t hoeffding_sample_count(const ShareQuery& query, double epsilon, double delta);

struct SampledShare {
  double value = 0.0;
  std::uint64_t samples = 0;
  bool capped = false;  // the Hoeffding count exceeded max_samples
};

SampledShare shapley_sampled(const ShareQuery& query, double epsilon, double delta,
                             std::mt19937_64& rng, std::uint64_t max_samples);

// Exact share under proportional or Shapley; sampled mechanisms are rejected.
double exact_share(Mechanism mechanism, const ShareQuery& query,
                   std::size_t threshold = kExactShapleyThreshold);

struct ExpansionTerm {
  double x;
  double y;
  double z;
};

// Per exponent j, the K_j terms of the REP-expansion bound.
struct RepExpansionConstants {
  std::vector<std::vector<ExpansionTerm>> terms;

  double z_max() const;  // ceiling of the largest z
};

// Generalized binomial coefficient C(alpha, k) for real alpha.
double generalized_binomial(double alpha, unsigned k);

RepExpansionConstants rep_expansion_constants(Mechanism mechanism,
                                              const ExponentProfile& exponents);

struct ExpansionVerdict {
  bool holds = true;
  double share = 0.0;
  double bound = 0.0;
};

ExpansionVerdict rep_expansion_check(Mechanism mechanism, const ShareQuery& query);

// Users of every resource under a profile, ordered by request index.
std::vector<std::vector<ShareUser>> users_by_resource(const Instance& instance,
                                                      const StrategyProfile& profile);

// Exact individual cost C_i of `player` if it played `reply` while everyone
// else keeps `profile` (its own entry in `profile` is ignored).
double deviation_cost(const Instance& instance, Mechanism mechanism,
                      const std::vector<std::vector<ShareUser>>& users,
                      RequestId player, const Reply& reply,
                      std::size_t threshold = kExactShapleyThreshold);

// Exact C_i(p).
double individual_cost(const Instance& instance, Mechanism mechanism,
                       const StrategyProfile& profile, RequestId player,
                       std::size_t threshold = kExactShapleyThreshold);

struct SamplingStats {
  std::uint64_t sampled_shares = 0;
  std::uint64_t capped_shares = 0;
  std::uint64_t total_samples = 0;
  std::uint64_t largest_requested = 0;
};

struct ShareSettings {
  Mechanism mechanism = Mechanism::shapley_exact;
  double epsilon = 0.01;
  double delta = 0.05;  // failure probability per sampled share
  std::uint64_t seed = 0;
  std::size_t exact_threshold = kExactShapleyThreshold;
  std::uint64_t max_samples = 100000;
};

// Computes epsilon-cost shares for the dynamics. Sampled shares draw from a
// stream keyed by (seed, step, target, resource), so a share is reproducible
// no matter when or how often it is requested.
class CostShareEvaluator {
 public:
  CostShareEvaluator(const Instance& instance, ShareSettings settings);

  // users must contain the target.
  double share(ResourceId resource, std::span<const ShareUser> users, RequestId target,
               std::uint64_t step) const;

  const ShareSettings& settings() const noexcept { return settings_; }
  const SamplingStats& stats() const noexcept { return stats_; }

 private:
  const Instance& instance_;
  ShareSettings settings_;
  mutable SamplingStats stats_;
};

}  // namespace gnd
