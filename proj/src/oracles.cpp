#include "gnd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "gnd/errors.hpp"
#include "gnd/graph.hpp"

namespace gnd {

void clamp_tolls(TollFunction& tolls, double floor) {
  for (double& t : tolls) {
    if (!(t >= floor)) t = floor;
  }
}

double toll_of(const Reply& reply, std::span<const double> tolls) {
  double sum = 0.0;
  for (ResourceId e : reply) sum += tolls[e];
  return sum;
}

namespace {

OracleAnswer make_answer(Reply reply, std::span<const double> tolls, double rho) {
  reply = normalize_reply(std::move(reply));
  const double total = toll_of(reply, tolls);
  return {std::move(reply), total, rho};
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Keeps the smaller root so component ids are deterministic.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

void require_undirected(const HostGraph& graph, const char* oracle) {
  if (graph.directed()) {
    throw StructuralError(fmt::format("{} requires an undirected graph", oracle));
  }
}

}  // namespace

OracleAnswer routing_oracle(const HostGraph& graph, VertexId source, VertexId target,
                            std::span<const double> tolls) {
  auto path = shortest_path(graph, source, target, tolls);
  if (!path) {
    throw InfeasibleError(fmt::format("no path from '{}' to '{}'",
                                      graph.vertices()[source], graph.vertices()[target]));
  }
  return make_answer(std::move(path->resources), tolls, 1.0);
}

OracleAnswer machine_oracle(std::span<const ResourceId> machines,
                            std::span<const double> tolls) {
  if (machines.empty()) throw StructuralError("machine oracle called with no machines");
  ResourceId best = machines.front();
  for (ResourceId m : machines) {
    if (tolls[m] < tolls[best] || (tolls[m] == tolls[best] && m < best)) best = m;
  }
  return make_answer({best}, tolls, 1.0);
}

OracleAnswer steiner_tree_oracle(const HostGraph& graph,
                                 std::span<const VertexId> terminal_span,
                                 std::span<const double> tolls) {
  require_undirected(graph, "steiner_tree_oracle");
  std::vector<VertexId> terminals(terminal_span.begin(), terminal_span.end());
  std::sort(terminals.begin(), terminals.end());
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  if (terminals.size() < 2) throw StructuralError("steiner tree needs two terminals");
  const std::size_t k = terminals.size();

  // Metric closure restricted to terminals.
  std::vector<std::vector<double>> dist(k);
  for (std::size_t a = 0; a < k; ++a) {
    auto d = shortest_distances(graph, terminals[a], tolls);
    dist[a].resize(k);
    for (std::size_t b = 0; b < k; ++b) {
      dist[a][b] = d[terminals[b]];
      if (dist[a][b] == kUnreachable) {
        throw InfeasibleError(fmt::format("terminals '{}' and '{}' are not connected",
                                          graph.vertices()[terminals[a]],
                                          graph.vertices()[terminals[b]]));
      }
    }
  }

  // Prim on the closure; ties go to the smaller terminal index.
  std::vector<bool> in_tree(k, false);
  std::vector<double> key(k, kUnreachable);
  std::vector<std::size_t> parent(k, 0);
  key[0] = 0.0;
  std::vector<bool> used(tolls.size(), false);
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t u = k;
    for (std::size_t v = 0; v < k; ++v) {
      if (!in_tree[v] && (u == k || key[v] < key[u])) u = v;
    }
    in_tree[u] = true;
    if (step > 0) {
      auto path = shortest_path(graph, terminals[parent[u]], terminals[u], tolls);
      if (!path) throw InfeasibleError("terminal path vanished");
      for (ResourceId e : path->resources) used[e] = true;
    }
    for (std::size_t v = 0; v < k; ++v) {
      if (!in_tree[v] && dist[u][v] < key[v]) {
        key[v] = dist[u][v];
        parent[v] = u;
      }
    }
  }

  // Kruskal on the union of closure paths.
  std::vector<ResourceId> candidates;
  for (ResourceId e = 0; e < used.size(); ++e) {
    if (used[e]) candidates.push_back(e);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](ResourceId a, ResourceId b) { return tolls[a] < tolls[b]; });
  DisjointSets sets(graph.vertex_count());
  std::vector<ResourceId> tree;
  for (ResourceId e : candidates) {
    const auto* edge = graph.edge_of(e);
    if (sets.unite(edge->tail, edge->head)) tree.push_back(e);
  }

  // Repeatedly drop non-terminal leaves.
  std::vector<bool> is_terminal(graph.vertex_count(), false);
  for (VertexId t : terminals) is_terminal[t] = true;
  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::vector<int> degree(graph.vertex_count(), 0);
    for (ResourceId e : tree) {
      const auto* edge = graph.edge_of(e);
      ++degree[edge->tail];
      ++degree[edge->head];
    }
    std::vector<ResourceId> kept;
    for (ResourceId e : tree) {
      const auto* edge = graph.edge_of(e);
      const bool dead = (degree[edge->tail] == 1 && !is_terminal[edge->tail]) ||
                        (degree[edge->head] == 1 && !is_terminal[edge->head]);
      if (dead) {
        pruned = true;
      } else {
        kept.push_back(e);
      }
    }
    tree = std::move(kept);
  }
  return make_answer(std::move(tree), tolls, 2.0);
}

OracleAnswer steiner_forest_oracle(const HostGraph& graph,
                                   std::span<const std::pair<VertexId, VertexId>> all_pairs,
                                   std::span<const double> tolls) {
  require_undirected(graph, "steiner_forest_oracle");
  if (all_pairs.empty()) throw StructuralError("steiner forest needs at least one pair");
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (auto [s, t] : all_pairs) {
    if (s != t) pairs.emplace_back(s, t);
  }
  const std::size_t n = graph.vertex_count();
  DisjointSets sets(n);
  std::vector<double> radius(n, 0.0);  // sum of duals of moats containing v
  std::vector<ResourceId> forest;

  auto active_roots = [&]() {
    std::vector<bool> active(n, false);
    for (auto [s, t] : pairs) {
      const auto rs = sets.find(s), rt = sets.find(t);
      if (rs != rt) active[rs] = active[rt] = true;
    }
    return active;
  };

  for (;;) {
    const auto active = active_roots();
    if (std::none_of(active.begin(), active.end(), [](bool b) { return b; })) break;
    // Growth needed before each crossing edge becomes tight.
    std::vector<std::pair<double, const GraphEdge*>> growth;
    for (const auto& edge : graph.edges()) {
      if (edge.tail == edge.head) continue;
      const auto ru = sets.find(edge.tail), rv = sets.find(edge.head);
      if (ru == rv) continue;
      const int rate = int(active[ru]) + int(active[rv]);
      if (rate == 0) continue;
      const double slack =
          std::max(0.0, tolls[edge.resource] - radius[edge.tail] - radius[edge.head]);
      growth.emplace_back(slack / rate, &edge);
    }
    double best_delta = kUnreachable;
    for (const auto& [delta, edge] : growth) best_delta = std::min(best_delta, delta);
    const double tol = 1e-12 * std::max(1.0, best_delta);
    const GraphEdge* best_edge = nullptr;
    for (const auto& [delta, edge] : growth) {
      if (delta <= best_delta + tol &&
          (best_edge == nullptr || edge->resource < best_edge->resource)) {
        best_edge = edge;
      }
    }
    if (best_edge == nullptr) {
      throw InfeasibleError("some terminal pair cannot be connected");
    }
    for (VertexId v = 0; v < n; ++v) {
      if (active[sets.find(v)]) radius[v] += best_delta;
    }
    forest.push_back(best_edge->resource);
    sets.unite(best_edge->tail, best_edge->head);
  }

  // Reverse deletion: drop edges (latest first) whose removal keeps every
  // pair connected.
  std::vector<bool> used(tolls.size(), false);
  for (ResourceId e : forest) used[e] = true;
  auto all_connected = [&]() {
    for (auto [s, t] : pairs) {
      if (!reachable_in(graph, used, s)[t]) return false;
    }
    return true;
  };
  for (auto it = forest.rbegin(); it != forest.rend(); ++it) {
    used[*it] = false;
    if (!all_connected()) used[*it] = true;
  }
  Reply reply;
  for (ResourceId e : forest) {
    if (used[e]) reply.push_back(e);
  }
  return make_answer(std::move(reply), tolls, 2.0);
}

OracleAnswer explicit_oracle(const std::vector<Reply>& replies,
                             std::span<const double> tolls) {
  if (replies.empty()) throw StructuralError("explicit oracle called with no replies");
  std::size_t best = 0;
  double best_toll = toll_of(replies[0], tolls);
  for (std::size_t k = 1; k < replies.size(); ++k) {
    const double t = toll_of(replies[k], tolls);
    if (t < best_toll) {
      best = k;
      best_toll = t;
    }
  }
  return make_answer(replies[best], tolls, 1.0);
}

OracleAnswer directed_pairs_heuristic(const HostGraph& graph,
                                      std::span<const std::pair<VertexId, VertexId>> pairs,
                                      std::span<const double> tolls) {
  Reply reply;
  std::size_t joined = 0;
  for (auto [s, t] : pairs) {
    if (s == t) continue;
    auto path = routing_oracle(graph, s, t, tolls);
    reply.insert(reply.end(), path.reply.begin(), path.reply.end());
    ++joined;
  }
  return make_answer(std::move(reply), tolls, static_cast<double>(std::max<std::size_t>(1, joined)));
}

OracleAnswer directed_set_connectivity_heuristic(const HostGraph& graph,
                                                 std::span<const VertexId> terminals,
                                                 std::span<const double> tolls) {
  if (terminals.size() < 2) throw StructuralError("set connectivity needs two terminals");
  std::vector<std::pair<VertexId, VertexId>> pairs;
  const VertexId root = terminals.front();
  for (std::size_t k = 1; k < terminals.size(); ++k) {
    pairs.emplace_back(root, terminals[k]);
    pairs.emplace_back(terminals[k], root);
  }
  return directed_pairs_heuristic(graph, pairs, tolls);
}

OracleAnswer answer_request(const Instance& instance, RequestId i,
                            std::span<const double> tolls) {
  const auto& req = instance.request(i);
  return std::visit(
      [&](const auto& k) -> OracleAnswer {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Routing>) {
          return routing_oracle(instance.host_graph(), k.source, k.target, tolls);
        } else if constexpr (std::is_same_v<K, MultiRouting>) {
          const auto& graph = instance.host_graph();
          if (graph.directed()) return directed_pairs_heuristic(graph, k.pairs, tolls);
          return steiner_forest_oracle(graph, k.pairs, tolls);
        } else if constexpr (std::is_same_v<K, SetConnectivity>) {
          const auto& graph = instance.host_graph();
          if (graph.directed()) {
            return directed_set_connectivity_heuristic(graph, k.terminals, tolls);
          }
          return steiner_tree_oracle(graph, k.terminals, tolls);
        } else if constexpr (std::is_same_v<K, MachineChoice>) {
          return machine_oracle(k.machines, tolls);
        } else {
          return explicit_oracle(k.replies, tolls);
        }
      },
      req.kind);
}

double oracle_rho(const Instance& instance, RequestId i) {
  const auto& req = instance.request(i);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MultiRouting>) {
          if (!instance.host_graph().directed()) return 2.0;
          std::size_t nontrivial = 0;
          for (auto [s, t] : k.pairs) nontrivial += (s != t);
          return static_cast<double>(std::max<std::size_t>(1, nontrivial));
        } else if constexpr (std::is_same_v<K, SetConnectivity>) {
          if (!instance.host_graph().directed()) return 2.0;
          return 2.0 * static_cast<double>(k.terminals.size() - 1);
        } else {
          return 1.0;
        }
      },
      req.kind);
}

double instance_rho(const Instance& instance) {
  double rho = 1.0;
  for (RequestId i = 0; i < instance.request_count(); ++i) {
    rho = std::max(rho, oracle_rho(instance, i));
  }
  return rho;
}

}  // namespace gnd
