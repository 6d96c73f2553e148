#include "gnd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

namespace gnd {

std::vector<double> shortest_distances(const HostGraph& graph, VertexId root,
                                       std::span<const double> weights, bool reverse) {
  std::vector<double> dist(graph.vertex_count(), kUnreachable);
  using Entry = std::pair<double, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[root] = 0.0;
  queue.push({0.0, root});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const Arc& arc : reverse ? graph.in_arcs(u) : graph.out_arcs(u)) {
      const double nd = d + weights[arc.resource];
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        queue.push({nd, arc.to});
      }
    }
  }
  return dist;
}

std::optional<Path> shortest_path(const HostGraph& graph, VertexId source,
                                  VertexId target, std::span<const double> weights) {
  const auto to_target = shortest_distances(graph, target, weights, /*reverse=*/true);
  if (to_target[source] == kUnreachable) return std::nullopt;
  // Walk forward along tight arcs, always taking the smallest next vertex.
  Path path;
  path.vertices.push_back(source);
  std::vector<bool> visited(graph.vertex_count(), false);
  VertexId u = source;
  visited[u] = true;
  while (u != target) {
    const double remaining = to_target[u];
    const double tol = 1e-12 * std::max(1.0, remaining);
    const Arc* next = nullptr;
    for (const Arc& arc : graph.out_arcs(u)) {
      if (to_target[arc.to] == kUnreachable || visited[arc.to]) continue;
      const double slack = to_target[arc.to] + weights[arc.resource] - remaining;
      if (std::abs(slack) <= tol) {
        next = &arc;  // arcs are sorted by (to, resource); first tight wins
        break;
      }
    }
    if (next == nullptr) return std::nullopt;  // only reachable via rounding noise
    path.resources.push_back(next->resource);
    path.length += weights[next->resource];
    u = next->to;
    visited[u] = true;
    path.vertices.push_back(u);
  }
  return path;
}

std::vector<bool> reachable_in(const HostGraph& graph, const std::vector<bool>& used,
                               VertexId from, bool reverse) {
  std::vector<bool> seen(graph.vertex_count(), false);
  std::vector<VertexId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    for (const Arc& arc : reverse ? graph.in_arcs(u) : graph.out_arcs(u)) {
      if (!used[arc.resource] || seen[arc.to]) continue;
      seen[arc.to] = true;
      stack.push_back(arc.to);
    }
  }
  return seen;
}

bool mark_edges(const HostGraph& graph, std::size_t resource_count, const Reply& reply,
                std::vector<bool>& used) {
  used.assign(resource_count, false);
  for (ResourceId e : reply) {
    if (e >= resource_count || graph.edge_of(e) == nullptr) return false;
    used[e] = true;
  }
  return true;
}

}  // namespace gnd
