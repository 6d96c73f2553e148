#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gnd/instance.hpp"

namespace gnd {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Single-source shortest distances under per-resource weights (indexed by
// resource id, all >= 0). With `reverse` set, distances are to `root` instead
// of from it. The queue is keyed by (distance, vertex id).
std::vector<double> shortest_distances(const HostGraph& graph, VertexId root,
                                       std::span<const double> weights,
                                       bool reverse = false);

struct Path {
  std::vector<VertexId> vertices;
  std::vector<ResourceId> resources;  // in traversal order
  double length = 0.0;
};

// Minimum-weight simple path from source to target. Among equally short paths
// the one with the lexicographically smallest vertex sequence wins, then the
// smallest resource id per hop. Weights must be strictly positive.
std::optional<Path> shortest_path(const HostGraph& graph, VertexId source,
                                  VertexId target, std::span<const double> weights);

// Vertices reachable from `from` using only the marked resources.
std::vector<bool> reachable_in(const HostGraph& graph, const std::vector<bool>& used,
                               VertexId from, bool reverse = false);

// Marks the resources of `reply` in a vector sized to the resource count.
// Returns false when the reply names a resource outside the graph.
bool mark_edges(const HostGraph& graph, std::size_t resource_count,
                const Reply& reply, std::vector<bool>& used);

}  // namespace gnd
