#include "gnd/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "gnd/errors.hpp"
#include "gnd/graph.hpp"

namespace gnd {

Reply normalize_reply(Reply reply) {
  std::sort(reply.begin(), reply.end());
  reply.erase(std::unique(reply.begin(), reply.end()), reply.end());
  return reply;
}

double ExponentProfile::max_alpha() const {
  return alphas.empty() ? 0.0 : *std::max_element(alphas.begin(), alphas.end());
}

HostGraph::HostGraph(bool directed, std::vector<std::string> vertices,
                     std::vector<GraphEdge> edges)
    : directed_(directed),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      out_(vertices_.size()),
      in_(vertices_.size()) {
  std::set<std::string_view> names;
  for (const auto& v : vertices_) {
    if (!names.insert(v).second) {
      throw StructuralError(fmt::format("duplicate vertex '{}'", v));
    }
  }
  ResourceId max_resource = 0;
  for (const auto& e : edges_) {
    if (e.tail >= vertices_.size() || e.head >= vertices_.size()) {
      throw StructuralError("graph edge refers to an unknown vertex");
    }
    max_resource = std::max(max_resource, e.resource);
  }
  edge_index_.assign(edges_.empty() ? 0 : max_resource + 1, -1);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (edge_index_[e.resource] != -1) {
      throw StructuralError("resource used by more than one graph edge");
    }
    edge_index_[e.resource] = static_cast<std::ptrdiff_t>(k);
    if (e.tail == e.head) continue;
    out_[e.tail].push_back({e.head, e.resource});
    in_[e.head].push_back({e.tail, e.resource});
    if (!directed_) {
      out_[e.head].push_back({e.tail, e.resource});
      in_[e.tail].push_back({e.head, e.resource});
    }
  }
  auto by_target = [](const Arc& a, const Arc& b) {
    return std::tie(a.to, a.resource) < std::tie(b.to, b.resource);
  };
  for (auto& arcs : out_) std::sort(arcs.begin(), arcs.end(), by_target);
  for (auto& arcs : in_) std::sort(arcs.begin(), arcs.end(), by_target);
}

std::optional<VertexId> HostGraph::find_vertex(std::string_view name) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

const GraphEdge* HostGraph::edge_of(ResourceId resource) const {
  if (resource >= edge_index_.size() || edge_index_[resource] < 0) return nullptr;
  return &edges_[static_cast<std::size_t>(edge_index_[resource])];
}

bool is_graph_kind(const RequestKind& kind) {
  return std::holds_alternative<Routing>(kind) ||
         std::holds_alternative<MultiRouting>(kind) ||
         std::holds_alternative<SetConnectivity>(kind);
}

namespace {

void check_vertex(const HostGraph& graph, VertexId v, std::int64_t request) {
  if (v >= graph.vertex_count()) {
    throw StructuralError(fmt::format("request {} names an unknown vertex", request));
  }
}

void check_resource(std::size_t count, ResourceId e, std::int64_t request) {
  if (e >= count) {
    throw StructuralError(fmt::format("request {} names an unknown resource", request));
  }
}

}  // namespace

Instance::Instance(ExponentProfile exponents, std::vector<ResourceParams> resources,
                   std::optional<HostGraph> graph, std::vector<Request> requests)
    : exponents_(std::move(exponents)),
      resources_(std::move(resources)),
      graph_(std::move(graph)),
      requests_(std::move(requests)) {
  if (exponents_.alphas.empty()) throw StructuralError("exponent profile is empty");
  for (double a : exponents_.alphas) {
    if (!(a > 1.0) || !std::isfinite(a)) {
      throw StructuralError(fmt::format("exponent {} is not > 1", a));
    }
  }
  if (resources_.empty()) throw StructuralError("instance has no resources");
  std::set<std::string_view> ids;
  for (const auto& r : resources_) {
    if (!ids.insert(r.id).second) {
      throw StructuralError(fmt::format("duplicate resource id '{}'", r.id));
    }
    if (r.xis.size() != exponents_.size()) {
      throw StructuralError(fmt::format(
          "resource '{}' has {} speed-scaling factors, expected {}", r.id,
          r.xis.size(), exponents_.size()));
    }
    if (!(r.sigma >= 0.0) || !std::isfinite(r.sigma)) {
      throw StructuralError(fmt::format("resource '{}' has negative sigma", r.id));
    }
    bool any_positive = false;
    for (double xi : r.xis) {
      if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw StructuralError(fmt::format("resource '{}' has a negative xi", r.id));
      }
      any_positive = any_positive || xi > 0.0;
    }
    if (!any_positive) {
      throw StructuralError(fmt::format("resource '{}' has no positive xi", r.id));
    }
  }
  if (graph_) {
    for (const auto& e : graph_->edges()) {
      if (e.resource >= resources_.size()) {
        throw StructuralError("graph edge refers to an unknown resource");
      }
    }
  }
  if (requests_.empty()) throw StructuralError("instance has no requests");
  std::sort(requests_.begin(), requests_.end(),
            [](const Request& a, const Request& b) { return a.id < b.id; });
  for (std::size_t i = 0; i + 1 < requests_.size(); ++i) {
    if (requests_[i].id == requests_[i + 1].id) {
      throw StructuralError(fmt::format("duplicate request id {}", requests_[i].id));
    }
  }
  const std::size_t m = resources_.size();
  for (auto& req : requests_) {
    if (req.weights.size() != m) {
      throw StructuralError(fmt::format("request {} has {} weights, expected {}",
                                        req.id, req.weights.size(), m));
    }
    for (Load w : req.weights) {
      if (w < 1) {
        throw StructuralError(fmt::format("request {} has a weight below 1", req.id));
      }
    }
    if (is_graph_kind(req.kind) && !graph_) {
      throw StructuralError(
          fmt::format("request {} needs a host graph but the instance has none", req.id));
    }
    std::visit(
        [&](auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Routing>) {
            check_vertex(*graph_, k.source, req.id);
            check_vertex(*graph_, k.target, req.id);
            if (k.source == k.target) {
              throw StructuralError(
                  fmt::format("routing request {} has source == target", req.id));
            }
          } else if constexpr (std::is_same_v<K, MultiRouting>) {
            if (k.pairs.empty()) {
              throw StructuralError(
                  fmt::format("multi-routing request {} has no pairs", req.id));
            }
            for (auto [s, t] : k.pairs) {
              check_vertex(*graph_, s, req.id);
              check_vertex(*graph_, t, req.id);
            }
          } else if constexpr (std::is_same_v<K, SetConnectivity>) {
            std::sort(k.terminals.begin(), k.terminals.end());
            k.terminals.erase(std::unique(k.terminals.begin(), k.terminals.end()),
                              k.terminals.end());
            if (k.terminals.size() < 2) {
              throw StructuralError(fmt::format(
                  "set-connectivity request {} needs at least two terminals", req.id));
            }
            for (VertexId v : k.terminals) check_vertex(*graph_, v, req.id);
          } else if constexpr (std::is_same_v<K, MachineChoice>) {
            if (k.machines.empty()) {
              throw StructuralError(
                  fmt::format("machine request {} has no machines", req.id));
            }
            for (ResourceId e : k.machines) check_resource(m, e, req.id);
          } else {
            if (k.replies.empty()) {
              throw StructuralError(
                  fmt::format("explicit request {} lists no replies", req.id));
            }
            for (auto& r : k.replies) {
              r = normalize_reply(std::move(r));
              if (r.empty()) {
                throw StructuralError(
                    fmt::format("explicit request {} lists an empty reply", req.id));
              }
              for (ResourceId e : r) check_resource(m, e, req.id);
            }
          }
        },
        req.kind);
  }
}

const HostGraph& Instance::host_graph() const {
  if (!graph_) throw StructuralError("instance has no host graph");
  return *graph_;
}

std::optional<ResourceId> Instance::find_resource(std::string_view id) const {
  for (std::size_t e = 0; e < resources_.size(); ++e) {
    if (resources_[e].id == id) return e;
  }
  return std::nullopt;
}

double Instance::cost(ResourceId e, Load load) const {
  return rep_cost(resources_[e], exponents_, load);
}

double rep_cost(const ResourceParams& params, const ExponentProfile& exponents, Load load) {
  if (load <= 0) return 0.0;
  const double log_load = std::log(static_cast<double>(load));
  double cost = params.sigma;
  for (std::size_t j = 0; j < exponents.alphas.size(); ++j) {
    if (params.xis[j] == 0.0) continue;
    cost += params.xis[j] * std::exp(exponents.alphas[j] * log_load);
  }
  return cost;
}

LoadVector load_vector(const Instance& instance, const StrategyProfile& profile) {
  if (profile.size() != instance.request_count()) {
    throw StructuralError(fmt::format("profile has {} replies for {} requests",
                                      profile.size(), instance.request_count()));
  }
  LoadVector loads(instance.resource_count(), 0);
  for (RequestId i = 0; i < profile.size(); ++i) {
    for (ResourceId e : profile[i]) {
      if (e >= loads.size()) {
        throw StructuralError(fmt::format("reply of request {} names unknown resource {}",
                                          instance.request(i).id, e));
      }
      loads[e] += instance.weight(i, e);
    }
  }
  return loads;
}

double total_cost(const Instance& instance, const LoadVector& loads) {
  double sum = 0.0;
  for (ResourceId e = 0; e < loads.size(); ++e) sum += instance.cost(e, loads[e]);
  return sum;
}

double total_cost(const Instance& instance, const StrategyProfile& profile) {
  return total_cost(instance, load_vector(instance, profile));
}

namespace {

// Used-edge vector for a reply, or a failure verdict naming the bad resource.
std::optional<std::string> mark_or_reason(const Instance& instance, const Reply& reply,
                                          std::vector<bool>& used) {
  const auto& graph = instance.host_graph();
  if (!mark_edges(graph, instance.resource_count(), reply, used)) {
    return std::string("reply contains a resource that is not a graph edge");
  }
  return std::nullopt;
}

bool connected(const HostGraph& graph, const std::vector<bool>& used, VertexId s, VertexId t) {
  return reachable_in(graph, used, s)[t];
}

}  // namespace

Verdict validate_reply(const Instance& instance, RequestId i, const Reply& raw) {
  if (i >= instance.request_count()) return Verdict::fail("unknown request");
  for (ResourceId e : raw) {
    if (e >= instance.resource_count()) {
      return Verdict::fail(fmt::format("unknown resource index {}", e));
    }
  }
  const Reply reply = normalize_reply(raw);
  const auto& req = instance.request(i);
  return std::visit(
      [&](const auto& k) -> Verdict {
        using K = std::decay_t<decltype(k)>;
        static const std::vector<std::string> no_vertices;
        const auto& names =
            instance.has_graph() ? instance.host_graph().vertices() : no_vertices;
        if constexpr (std::is_same_v<K, Routing>) {
          std::vector<bool> used;
          if (auto why = mark_or_reason(instance, reply, used)) return Verdict::fail(*why);
          if (!connected(instance.host_graph(), used, k.source, k.target)) {
            return Verdict::fail(fmt::format("no path from '{}' to '{}'",
                                             names[k.source], names[k.target]));
          }
          return Verdict::pass();
        } else if constexpr (std::is_same_v<K, MultiRouting>) {
          std::vector<bool> used;
          if (auto why = mark_or_reason(instance, reply, used)) return Verdict::fail(*why);
          for (auto [s, t] : k.pairs) {
            if (!connected(instance.host_graph(), used, s, t)) {
              return Verdict::fail(
                  fmt::format("pair ('{}', '{}') is not connected", names[s], names[t]));
            }
          }
          return Verdict::pass();
        } else if constexpr (std::is_same_v<K, SetConnectivity>) {
          std::vector<bool> used;
          if (auto why = mark_or_reason(instance, reply, used)) return Verdict::fail(*why);
          const auto& graph = instance.host_graph();
          std::vector<bool> touched(graph.vertex_count(), false);
          for (ResourceId e : reply) {
            const auto* edge = graph.edge_of(e);
            touched[edge->tail] = touched[edge->head] = true;
          }
          for (VertexId t : k.terminals) {
            if (!touched[t]) {
              return Verdict::fail(fmt::format("terminal '{}' is not spanned", names[t]));
            }
          }
          const VertexId root = k.terminals.front();
          auto forward = reachable_in(graph, used, root);
          std::vector<bool> backward;
          if (graph.directed()) backward = reachable_in(graph, used, root, true);
          for (VertexId v = 0; v < graph.vertex_count(); ++v) {
            if (!touched[v]) continue;
            if (!forward[v] || (graph.directed() && !backward[v])) {
              return Verdict::fail(
                  fmt::format("reply subgraph is not {}connected ('{}')",
                              graph.directed() ? "strongly " : "", names[v]));
            }
          }
          return Verdict::pass();
        } else if constexpr (std::is_same_v<K, MachineChoice>) {
          if (reply.size() != 1) return Verdict::fail("machine reply is not a singleton");
          if (std::find(k.machines.begin(), k.machines.end(), reply.front()) ==
              k.machines.end()) {
            return Verdict::fail("machine is not in the allowed list");
          }
          return Verdict::pass();
        } else {
          for (const auto& option : k.replies) {
            if (option == reply) return Verdict::pass();
          }
          return Verdict::fail("reply is not one of the listed options");
        }
      },
      req.kind);
}

Verdict validate_profile(const Instance& instance, const StrategyProfile& profile) {
  if (profile.size() != instance.request_count()) {
    return Verdict::fail("profile size differs from the request count");
  }
  for (RequestId i = 0; i < profile.size(); ++i) {
    auto v = validate_reply(instance, i, profile[i]);
    if (!v) {
      return Verdict::fail(fmt::format("request {}: {}", instance.request(i).id, v.reason));
    }
  }
  return Verdict::pass();
}

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

}  // namespace gnd
