#pragma once

// Toll-minimizing reply oracles. Every oracle returns a feasible reply for its
// request together with the total toll of that reply and the approximation
// factor it guarantees.

#include <span>
#include <utility>
#include <vector>

#include "gnd/instance.hpp"

namespace gnd {

// Per-resource toll, indexed by resource id. Oracles expect positive tolls.
using TollFunction = std::vector<double>;

inline constexpr double kDefaultTollFloor = 1e-12;

struct OracleAnswer {
  Reply reply;
  double toll_total = 0.0;
  double rho = 1.0;
};

// Replaces every toll below `floor` (including zero and negatives) by `floor`.
void clamp_tolls(TollFunction& tolls, double floor = kDefaultTollFloor);

double toll_of(const Reply& reply, std::span<const double> tolls);

// Exact: minimum-toll simple path, lexicographically smallest vertex
// sequence among ties.
OracleAnswer routing_oracle(const HostGraph& graph, VertexId source, VertexId target,
                            std::span<const double> tolls);

// Exact: cheapest machine, smallest resource id among ties.
OracleAnswer machine_oracle(std::span<const ResourceId> machines,
                            std::span<const double> tolls);

// Metric-closure MST (Kou-Markowsky-Berman) on an undirected graph; rho = 2.
OracleAnswer steiner_tree_oracle(const HostGraph& graph,
                                 std::span<const VertexId> terminals,
                                 std::span<const double> tolls);

// Primal-dual moat growing with reverse deletion on an undirected graph;
// rho = 2.
OracleAnswer steiner_forest_oracle(const HostGraph& graph,
                                   std::span<const std::pair<VertexId, VertexId>> pairs,
                                   std::span<const double> tolls);

// Exact over the listed options, first listed among ties.
OracleAnswer explicit_oracle(const std::vector<Reply>& replies,
                             std::span<const double> tolls);

// Directed fallbacks: union of shortest paths. Each path costs at most the
// optimum, so the reported rho is the number of paths joined.
OracleAnswer directed_pairs_heuristic(const HostGraph& graph,
                                      std::span<const std::pair<VertexId, VertexId>> pairs,
                                      std::span<const double> tolls);
OracleAnswer directed_set_connectivity_heuristic(const HostGraph& graph,
                                                 std::span<const VertexId> terminals,
                                                 std::span<const double> tolls);

// Picks the oracle matching the request kind.
OracleAnswer answer_request(const Instance& instance, RequestId request,
                            std::span<const double> tolls);

// Guaranteed factor of the oracle answer_request uses for this request.
double oracle_rho(const Instance& instance, RequestId request);

// Largest oracle factor over all requests.
double instance_rho(const Instance& instance);

}  // namespace gnd
