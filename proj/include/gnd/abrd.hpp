#pragma once

// Approximate-best-response dynamics driven by reply oracles.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gnd/bounds.hpp"
#include "gnd/instance.hpp"
#include "gnd/oracles.hpp"
#include "gnd/sharing.hpp"

namespace gnd {

enum class Selection { deterministic, randomized };
enum class OutputMode { best, last };

std::string_view to_string(Selection s);
std::string_view to_string(OutputMode m);

struct AbrdConfig {
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  Mechanism mechanism = Mechanism::shapley_exact;
  Selection selection = Selection::deterministic;
  OutputMode output = OutputMode::best;
  std::optional<std::uint64_t> step_budget_override;
  std::optional<double> rho;  // derived from the request kinds when empty
  std::size_t exact_threshold = kExactShapleyThreshold;
  std::uint64_t max_samples = 100000;
  double toll_floor = kDefaultTollFloor;
};

struct StepRecord {
  std::uint64_t t = 0;
  std::optional<RequestId> player;
  double delta_selected = 0.0;
  std::vector<double> deltas;
  double Delta = 0.0;
  double cost = 0.0;
  std::optional<double> potential;
  bool converged = false;
};

struct RunResult {
  StrategyProfile profile;  // according to the output mode
  double cost = 0.0;
  std::uint64_t t_star = 0;
  StrategyProfile best_profile;
  double best_cost = 0.0;
  StrategyProfile last_profile;
  double last_cost = 0.0;
  std::vector<StepRecord> trace;
  TheoreticalBounds bounds;
  std::uint64_t step_budget = 0;
  bool converged = false;
  bool guarantee_void = false;  // the step budget was overridden
  std::optional<double> optimum;
  std::optional<double> empirical_ratio;
  SamplingStats sampling;
  double share_delta = 0.0;  // per-share failure probability when sampling
  std::vector<std::string> warnings;
};

// p^0: each request answers tolls F_e(w_i(e)).
StrategyProfile initial_profile(const Instance& instance, double toll_floor = kDefaultTollFloor);

// Tolls tau(e) = share of `player` on S_e^{-i} + {i}, for every resource.
TollFunction player_tolls(const Instance& instance, const CostShareEvaluator& shares,
                          const std::vector<std::vector<ShareUser>>& users, RequestId player,
                          std::uint64_t step, double toll_floor = kDefaultTollFloor);

struct BestResponse {
  Reply reply;
  double cost = 0.0;          // C~_i of the returned reply against p_{-i}
  double current_cost = 0.0;  // C~_i(p) under the same tolls
};

BestResponse approximate_best_response(const Instance& instance,
                                       const CostShareEvaluator& shares,
                                       const StrategyProfile& profile, RequestId player,
                                       std::uint64_t step = 0,
                                       double toll_floor = kDefaultTollFloor);

struct DeltaVector {
  std::vector<double> deltas;
  double Delta = 0.0;
  std::vector<BestResponse> responses;
};

DeltaVector delta_vector(const Instance& instance, const CostShareEvaluator& shares,
                         const StrategyProfile& profile, double epsilon1,
                         std::uint64_t step = 0, double toll_floor = kDefaultTollFloor);

using OptimumHook = std::function<double(const Instance&)>;

RunResult run_abrd(const Instance& instance, const AbrdConfig& config,
                   const OptimumHook& optimum = {});

// CSV with header step,player,delta_selected,Delta,cost,potential,converged.
std::string trace_csv(const std::vector<StepRecord>& trace);

}  // namespace gnd
