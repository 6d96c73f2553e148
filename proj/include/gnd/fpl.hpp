#pragma once

// Follow-the-perturbed-leader learning for routing requests under
// proportional-fair tolls.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gnd/instance.hpp"

namespace gnd {

struct FplConfig {
  std::optional<std::uint64_t> rounds;  // default min(4 N^2 |V|^2 |E|, round_cap)
  std::uint64_t round_cap = 100000;
  std::optional<double> eta;            // default sqrt(rounds / |E|)
  std::uint64_t seed = 0;
  std::optional<double> lower_bound;    // LB on the optimum, for the report
  bool keep_regret_trace = false;
};

struct NormalizedInstance {
  Instance instance;
  double scale = 1.0;
};

// Divides every sigma and xi by S = max_e F_e(sum_i max_e' w_i(e')), with S
// clamped to at least 1. Rejects non-routing requests.
NormalizedInstance normalize_costs(const Instance& instance);

// Shortest path under cumulative tolls plus fresh uniform [0, eta] noise.
Reply fpl_step(const HostGraph& graph, VertexId source, VertexId target,
               std::span<const double> cumulative, double eta, std::mt19937_64& rng);

struct RegretRow {
  std::uint64_t round;
  RequestId player;
  double realized;
  double best_fixed;
};

struct FplResult {
  StrategyProfile profile;
  double cost = 0.0;  // in the original cost units
  std::uint64_t chosen_round = 0;
  std::uint64_t rounds = 0;
  double theoretical_rounds = 0.0;
  double eta = 0.0;
  double scale = 1.0;
  std::vector<double> regret;  // scaled units
  double regret_bound = 0.0;   // 2 |V| sqrt(|E| rounds)
  std::optional<double> guarantee;  // 2(gamma + lambda_alpha + 1/LB) when LB given
  std::vector<RegretRow> trace;
};

FplResult run_l_apx(const Instance& instance, const FplConfig& config);

std::string regret_csv(const std::vector<RegretRow>& trace);

}  // namespace gnd
