#pragma once

// Data model for generalized network design instances: resources with
// real-exponent polynomial (REP) costs, an optional host graph, and weighted
// requests with typed reply collections.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gnd {

using ResourceId = std::size_t;
using VertexId = std::size_t;
using RequestId = std::size_t;
using Load = std::int64_t;

// A reply is a set of resources, kept sorted and duplicate-free.
using Reply = std::vector<ResourceId>;

// One reply per request, indexed by request position.
using StrategyProfile = std::vector<Reply>;

// l_e per resource, indexed by resource position.
using LoadVector = std::vector<Load>;

Reply normalize_reply(Reply reply);

struct ExponentProfile {
  std::vector<double> alphas;

  std::size_t size() const noexcept { return alphas.size(); }
  double max_alpha() const;
};

struct ResourceParams {
  std::string id;
  double sigma = 0.0;
  std::vector<double> xis;
};

struct GraphEdge {
  ResourceId resource;
  VertexId tail;
  VertexId head;
};

// Directed view of an edge as seen from one endpoint.
struct Arc {
  VertexId to;
  ResourceId resource;
};

class HostGraph {
 public:
  HostGraph(bool directed, std::vector<std::string> vertices,
            std::vector<GraphEdge> edges);

  bool directed() const noexcept { return directed_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  std::optional<VertexId> find_vertex(std::string_view name) const;

  // Arcs leaving v (both orientations for undirected graphs), sorted by
  // (to, resource). Self-loops are omitted.
  std::span<const Arc> out_arcs(VertexId v) const { return out_[v]; }
  // Arcs entering v, reported with `to` set to the arc's tail.
  std::span<const Arc> in_arcs(VertexId v) const { return in_[v]; }

  // Edge carrying the given resource, or nullptr when the resource is not
  // part of the graph.
  const GraphEdge* edge_of(ResourceId resource) const;

 private:
  bool directed_;
  std::vector<std::string> vertices_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::vector<std::ptrdiff_t> edge_index_;  // by resource, -1 when absent
};

struct Routing {
  VertexId source;
  VertexId target;
};

struct MultiRouting {
  std::vector<std::pair<VertexId, VertexId>> pairs;
};

struct SetConnectivity {
  std::vector<VertexId> terminals;
};

struct MachineChoice {
  std::vector<ResourceId> machines;
};

struct ExplicitReplies {
  std::vector<Reply> replies;
};

using RequestKind =
    std::variant<Routing, MultiRouting, SetConnectivity, MachineChoice, ExplicitReplies>;

struct Request {
  std::int64_t id = 0;
  std::vector<Load> weights;  // w_i(e) per resource, every entry >= 1
  RequestKind kind;
};

bool is_graph_kind(const RequestKind& kind);

class Instance {
 public:
  // Validates every structural invariant and sorts requests by id. Resources
  // keep their declaration order; that order is the resource index.
  Instance(ExponentProfile exponents, std::vector<ResourceParams> resources,
           std::optional<HostGraph> graph, std::vector<Request> requests);

  const ExponentProfile& exponents() const noexcept { return exponents_; }
  const std::vector<ResourceParams>& resources() const noexcept { return resources_; }
  const ResourceParams& resource(ResourceId e) const { return resources_.at(e); }
  std::size_t resource_count() const noexcept { return resources_.size(); }

  bool has_graph() const noexcept { return graph_.has_value(); }
  const std::optional<HostGraph>& graph() const noexcept { return graph_; }
  // Throws StructuralError when the instance has no host graph.
  const HostGraph& host_graph() const;

  const std::vector<Request>& requests() const noexcept { return requests_; }
  const Request& request(RequestId i) const { return requests_.at(i); }
  std::size_t request_count() const noexcept { return requests_.size(); }

  Load weight(RequestId i, ResourceId e) const { return requests_[i].weights[e]; }
  std::optional<ResourceId> find_resource(std::string_view id) const;

  // F_e(load).
  double cost(ResourceId e, Load load) const;

 private:
  ExponentProfile exponents_;
  std::vector<ResourceParams> resources_;
  std::optional<HostGraph> graph_;
  std::vector<Request> requests_;
};

// F_e(l): 0 at zero load, sigma + sum_j xi_j * l^alpha_j otherwise.
double rep_cost(const ResourceParams& params, const ExponentProfile& exponents, Load load);

// Throws StructuralError on unknown resource ids or a wrong reply count.
LoadVector load_vector(const Instance& instance, const StrategyProfile& profile);

double total_cost(const Instance& instance, const LoadVector& loads);
double total_cost(const Instance& instance, const StrategyProfile& profile);

struct Verdict {
  bool ok = true;
  std::string reason;

  explicit operator bool() const noexcept { return ok; }
  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

Verdict validate_reply(const Instance& instance, RequestId request, const Reply& reply);
Verdict validate_profile(const Instance& instance, const StrategyProfile& profile);

// N-th harmonic number.
double harmonic(std::size_t n);

}  // namespace gnd
