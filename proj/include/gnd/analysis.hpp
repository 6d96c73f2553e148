#pragma once

// Exhaustive and sampled verification tools: strategy-space enumeration,
// brute-force optimum, pure Nash enumeration, potential and smoothness
// checks, and the price-of-anarchy lower-bound family.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnd/instance.hpp"
#include "gnd/potential.hpp"
#include "gnd/sharing.hpp"

namespace gnd {

inline constexpr double kRelTol = 1e-9;
inline constexpr double kAbsTol = 1e-12;

// a <= b up to the shared relative/absolute tolerance.
bool leq_tol(double a, double b);
bool eq_tol(double a, double b);

struct EnumerationLimits {
  std::uint64_t max_paths = 10000;
  std::size_t max_subset_edges = 12;
  std::uint64_t max_profiles = 10000000;
};

// Strategy space of one request. Routing: simple paths. Multi-routing and
// set connectivity: every feasible subset of graph edges. Throws
// EnumerationRefused when a limit is exceeded.
std::vector<Reply> candidate_replies(const Instance& instance, RequestId request,
                                     const EnumerationLimits& limits = {});

// Strategy spaces of all requests, refusing when their product exceeds
// max_profiles.
std::vector<std::vector<Reply>> strategy_spaces(const Instance& instance,
                                                const EnumerationLimits& limits = {});

std::uint64_t profile_count(const std::vector<std::vector<Reply>>& spaces);

// Profile with mixed-radix index `index` (request 0 varies fastest).
StrategyProfile profile_at(const std::vector<std::vector<Reply>>& spaces, std::uint64_t index);

struct OptResult {
  StrategyProfile profile;
  double cost = 0.0;
  std::uint64_t profiles = 0;
};

// Exact minimizer of C; the first minimum in enumeration order wins.
OptResult brute_force_opt(const Instance& instance, const EnumerationLimits& limits = {});

bool is_nash(const Instance& instance, Mechanism mechanism,
             const std::vector<std::vector<Reply>>& spaces, const StrategyProfile& profile);

struct NashRow {
  std::uint64_t index;
  double cost;
  bool nash;
};

struct PoaReport {
  std::vector<StrategyProfile> equilibria;
  std::vector<double> equilibrium_costs;
  std::optional<double> worst_ne_cost;
  StrategyProfile opt_profile;
  double opt_cost = 0.0;
  std::optional<double> poa;
  std::uint64_t profiles = 0;
  std::vector<NashRow> rows;  // kept only up to 100000 profiles
};

PoaReport enumerate_nash(const Instance& instance, Mechanism mechanism,
                         const EnumerationLimits& limits = {});

struct SmoothnessParams {
  double lambda = 0.0;
  double mu = 0.0;
};

// (gamma_alpha + lambda_alpha rho^{max alpha}, 1/(2 rho)) with the
// mechanism's expansion constants.
SmoothnessParams smoothness_parameters(const Instance& instance, Mechanism mechanism,
                                       double rho = 1.0);

struct SmoothRow {
  std::uint64_t p;
  std::uint64_t p_prime;
  double lhs;
  double cost_p;
  double cost_p_prime;
};

struct SmoothnessReport {
  double lambda = 0.0;
  double mu = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  double max_ratio = 0.0;  // max (lhs - mu C(p)) / C(p')
  bool exhaustive = true;
  bool pass = true;
  std::vector<SmoothRow> rows;
};

struct PairSource {
  std::uint64_t max_exhaustive_pairs = 10000;
  std::uint64_t sampled_pairs = 10000;
  std::uint64_t seed = 0;
  bool keep_rows = false;
};

SmoothnessReport smoothness_check(const Instance& instance, Mechanism mechanism,
                                  SmoothnessParams params, const PairSource& source = {},
                                  const EnumerationLimits& limits = {});

struct PotentialBoundsReport {
  bool pass = true;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
};

// C(p)/ceil(max alpha) <= Phi(p) <= H_N C(p) for each profile.
PotentialBoundsReport potential_bounds_check(const Instance& instance,
                                             std::span<const StrategyProfile> profiles);

struct ExactnessReport {
  bool holds = true;
  double potential_change = 0.0;
  double cost_change = 0.0;
};

// Phi(p') - Phi(p) = C_i(p') - C_i(p) for p' = (alternative, p_{-i}) under
// exact Shapley shares.
ExactnessReport potential_exactness_check(const Instance& instance,
                                          const StrategyProfile& profile, RequestId player,
                                          const Reply& alternative);

struct BalanceQuery {
  ResourceParams resource;
  std::vector<Load> weights;
};

struct BalanceReport {
  bool pass = true;
  std::uint64_t checked = 0;
  double max_relative_error = 0.0;
};

BalanceReport budget_balance_check(Mechanism mechanism, const ExponentProfile& exponents,
                                   std::span<const BalanceQuery> queries);

struct PoaFamilyParams {
  double sigma = 16.0;
  double xi = 1.0;
  double alpha = 2.0;
  std::size_t q = 1;
  std::vector<double> tail_alphas;  // size q-1; default 1 + (alpha-1)/2
  double tail_fraction = 0.1;       // fraction of the strict tail-factor bound
};

// N = (sigma/xi)^{1/alpha} unit-weight routing requests from s to t_i with a
// direct edge e_i and a detour through the shared hub edge e* and e'_i.
// Resource order: e_1..e_N, e'_1..e'_N, e*.
Instance poa_lower_bound_instance(const PoaFamilyParams& params);

std::string nash_csv(const PoaReport& report);
std::string smoothness_csv(const SmoothnessReport& report);

}  // namespace gnd
