#include "gnd/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "gnd/errors.hpp"

namespace gnd {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(fmt::format("{}: {}", path.empty() ? "<root>" : path, what));
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      fail(path, fmt::format("unknown key '{}'", key));
    }
  }
}

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, fmt::format("missing key '{}'", key));
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t k) { return fmt::format("{}[{}]", path, k); }

double real(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

struct Names {
  std::map<std::string, ResourceId> resources;
  std::map<std::string, VertexId> vertices;

  ResourceId resource(const json& v, const std::string& path) const {
    auto name = text(v, path);
    auto it = resources.find(name);
    if (it == resources.end()) fail(path, fmt::format("unknown resource '{}'", name));
    return it->second;
  }
  VertexId vertex(const json& v, const std::string& path) const {
    if (vertices.empty()) fail(path, "request refers to a vertex but there is no graph");
    auto name = text(v, path);
    auto it = vertices.find(name);
    if (it == vertices.end()) fail(path, fmt::format("unknown vertex '{}'", name));
    return it->second;
  }
};

RequestKind parse_kind(const json& k, const std::string& path, const Names& names) {
  if (!k.is_object()) fail(path, "expected an object");
  const auto type = text(field(k, path, "type"), join(path, "type"));
  if (type == "routing") {
    only_keys(k, path, {"type", "source", "target"});
    return Routing{names.vertex(field(k, path, "source"), join(path, "source")),
                   names.vertex(field(k, path, "target"), join(path, "target"))};
  }
  if (type == "multi_routing") {
    only_keys(k, path, {"type", "pairs"});
    const auto p = join(path, "pairs");
    MultiRouting out;
    const auto& pairs = array(field(k, path, "pairs"), p);
    for (std::size_t n = 0; n < pairs.size(); ++n) {
      const auto pp = at(p, n);
      if (!pairs[n].is_array() || pairs[n].size() != 2) fail(pp, "expected a [source, target] pair");
      out.pairs.emplace_back(names.vertex(pairs[n][0], at(pp, 0)),
                             names.vertex(pairs[n][1], at(pp, 1)));
    }
    return out;
  }
  if (type == "set_connectivity") {
    only_keys(k, path, {"type", "terminals"});
    const auto p = join(path, "terminals");
    SetConnectivity out;
    const auto& ts = array(field(k, path, "terminals"), p);
    for (std::size_t n = 0; n < ts.size(); ++n) out.terminals.push_back(names.vertex(ts[n], at(p, n)));
    return out;
  }
  if (type == "machine_choice") {
    only_keys(k, path, {"type", "machines"});
    const auto p = join(path, "machines");
    MachineChoice out;
    const auto& ms = array(field(k, path, "machines"), p);
    for (std::size_t n = 0; n < ms.size(); ++n) out.machines.push_back(names.resource(ms[n], at(p, n)));
    return out;
  }
  if (type == "explicit") {
    only_keys(k, path, {"type", "replies"});
    const auto p = join(path, "replies");
    ExplicitReplies out;
    const auto& rs = array(field(k, path, "replies"), p);
    for (std::size_t n = 0; n < rs.size(); ++n) {
      const auto rp = at(p, n);
      const auto& r = array(rs[n], rp);
      Reply reply;
      for (std::size_t x = 0; x < r.size(); ++x) reply.push_back(names.resource(r[x], at(rp, x)));
      out.replies.push_back(std::move(reply));
    }
    return out;
  }
  fail(join(path, "type"), fmt::format("unknown request kind '{}'", type));
}

Instance from_json(const json& doc) {
  only_keys(doc, "", {"alphas", "resources", "graph", "requests"});
  ExponentProfile exponents;
  const auto& alphas = array(field(doc, "", "alphas"), "alphas");
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    exponents.alphas.push_back(real(alphas[j], at("alphas", j)));
  }

  Names names;
  std::vector<ResourceParams> resources;
  const auto& rs = array(field(doc, "", "resources"), "resources");
  for (std::size_t n = 0; n < rs.size(); ++n) {
    const auto p = at("resources", n);
    only_keys(rs[n], p, {"id", "sigma", "xis"});
    ResourceParams r;
    r.id = text(field(rs[n], p, "id"), join(p, "id"));
    r.sigma = real(field(rs[n], p, "sigma"), join(p, "sigma"));
    const auto& xs = array(field(rs[n], p, "xis"), join(p, "xis"));
    for (std::size_t j = 0; j < xs.size(); ++j) r.xis.push_back(real(xs[j], at(join(p, "xis"), j)));
    if (!names.resources.emplace(r.id, n).second) {
      fail(join(p, "id"), fmt::format("duplicate resource id '{}'", r.id));
    }
    resources.push_back(std::move(r));
  }

  std::optional<HostGraph> graph;
  if (auto it = doc.find("graph"); it != doc.end()) {
    const std::string p = "graph";
    only_keys(*it, p, {"directed", "vertices", "edges"});
    const auto& d = field(*it, p, "directed");
    if (!d.is_boolean()) fail(join(p, "directed"), "expected a boolean");
    std::vector<std::string> vertices;
    const auto& vs = array(field(*it, p, "vertices"), join(p, "vertices"));
    for (std::size_t n = 0; n < vs.size(); ++n) {
      vertices.push_back(text(vs[n], at(join(p, "vertices"), n)));
      if (!names.vertices.emplace(vertices.back(), n).second) {
        fail(at(join(p, "vertices"), n), fmt::format("duplicate vertex '{}'", vertices.back()));
      }
    }
    std::vector<GraphEdge> edges;
    const auto ep = join(p, "edges");
    const auto& es = array(field(*it, p, "edges"), ep);
    std::set<ResourceId> seen;
    for (std::size_t n = 0; n < es.size(); ++n) {
      const auto q = at(ep, n);
      only_keys(es[n], q, {"id", "tail", "head"});
      GraphEdge e{names.resource(field(es[n], q, "id"), join(q, "id")),
                  names.vertex(field(es[n], q, "tail"), join(q, "tail")),
                  names.vertex(field(es[n], q, "head"), join(q, "head"))};
      if (!seen.insert(e.resource).second) fail(join(q, "id"), "resource used by two edges");
      edges.push_back(e);
    }
    graph.emplace(d.get<bool>(), std::move(vertices), std::move(edges));
  }

  std::vector<Request> requests;
  const auto& qs = array(field(doc, "", "requests"), "requests");
  for (std::size_t n = 0; n < qs.size(); ++n) {
    const auto p = at("requests", n);
    only_keys(qs[n], p, {"id", "weight_all", "weights", "kind"});
    Request r;
    r.id = integer(field(qs[n], p, "id"), join(p, "id"));
    Load base = 1;
    if (auto w = qs[n].find("weight_all"); w != qs[n].end()) {
      base = integer(*w, join(p, "weight_all"));
      if (base < 1) fail(join(p, "weight_all"), "weights must be at least 1");
    }
    r.weights.assign(resources.size(), base);
    if (auto w = qs[n].find("weights"); w != qs[n].end()) {
      const auto wp = join(p, "weights");
      if (!w->is_object()) fail(wp, "expected an object of resource id to weight");
      for (const auto& [key, value] : w->items()) {
        const auto kp = join(wp, key);
        auto e = names.resource(json(key), kp);
        r.weights[e] = integer(value, kp);
        if (r.weights[e] < 1) fail(kp, "weights must be at least 1");
      }
    }
    r.kind = parse_kind(field(qs[n], p, "kind"), join(p, "kind"), names);
    requests.push_back(std::move(r));
  }
  return Instance(std::move(exponents), std::move(resources), std::move(graph),
                  std::move(requests));
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < limit; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(fmt::format("line {}, column {}: malformed JSON ({})", line, column,
                                 e.what()),
                     line, column);
  }
  return from_json(doc);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string write_instance(const Instance& instance) {
  ordered_json doc;
  doc["alphas"] = instance.exponents().alphas;
  ordered_json resources = ordered_json::array();
  for (const auto& r : instance.resources()) {
    ordered_json o;
    o["id"] = r.id;
    o["sigma"] = r.sigma;
    o["xis"] = r.xis;
    resources.push_back(std::move(o));
  }
  doc["resources"] = std::move(resources);
  std::vector<std::string> vertex_names;
  if (instance.has_graph()) {
    const auto& g = instance.host_graph();
    vertex_names = g.vertices();
    ordered_json graph;
    graph["directed"] = g.directed();
    graph["vertices"] = g.vertices();
    ordered_json edges = ordered_json::array();
    for (const auto& e : g.edges()) {
      ordered_json o;
      o["id"] = instance.resource(e.resource).id;
      o["tail"] = vertex_names[e.tail];
      o["head"] = vertex_names[e.head];
      edges.push_back(std::move(o));
    }
    graph["edges"] = std::move(edges);
    doc["graph"] = std::move(graph);
  }
  auto names_of = [&](const Reply& reply) {
    ordered_json a = ordered_json::array();
    for (ResourceId e : reply) a.push_back(instance.resource(e).id);
    return a;
  };
  ordered_json requests = ordered_json::array();
  for (const auto& r : instance.requests()) {
    ordered_json o;
    o["id"] = r.id;
    std::map<Load, std::size_t> freq;
    for (Load w : r.weights) ++freq[w];
    Load base = freq.begin()->first;
    for (const auto& [w, c] : freq) {
      if (c > freq[base]) base = w;
    }
    o["weight_all"] = base;
    ordered_json overrides = ordered_json::object();
    for (ResourceId e = 0; e < r.weights.size(); ++e) {
      if (r.weights[e] != base) overrides[instance.resource(e).id] = r.weights[e];
    }
    if (!overrides.empty()) o["weights"] = std::move(overrides);
    ordered_json kind;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Routing>) {
            kind["type"] = "routing";
            kind["source"] = vertex_names[k.source];
            kind["target"] = vertex_names[k.target];
          } else if constexpr (std::is_same_v<K, MultiRouting>) {
            kind["type"] = "multi_routing";
            kind["pairs"] = ordered_json::array();
            for (auto [s, t] : k.pairs) {
              kind["pairs"].push_back({vertex_names[s], vertex_names[t]});
            }
          } else if constexpr (std::is_same_v<K, SetConnectivity>) {
            kind["type"] = "set_connectivity";
            kind["terminals"] = ordered_json::array();
            for (VertexId v : k.terminals) kind["terminals"].push_back(vertex_names[v]);
          } else if constexpr (std::is_same_v<K, MachineChoice>) {
            kind["type"] = "machine_choice";
            kind["machines"] = names_of(k.machines);
          } else {
            kind["type"] = "explicit";
            kind["replies"] = ordered_json::array();
            for (const auto& reply : k.replies) kind["replies"].push_back(names_of(reply));
          }
        },
        r.kind);
    o["kind"] = std::move(kind);
    requests.push_back(std::move(o));
  }
  doc["requests"] = std::move(requests);
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << write_instance(instance);
}

ordered_json reply_json(const Instance& instance, const Reply& reply) {
  ordered_json a = ordered_json::array();
  for (ResourceId e : reply) a.push_back(instance.resource(e).id);
  return a;
}

ordered_json profile_json(const Instance& instance, const StrategyProfile& profile) {
  ordered_json a = ordered_json::array();
  for (const auto& r : profile) a.push_back(reply_json(instance, r));
  return a;
}

std::string reply_text(const Instance& instance, const Reply& reply) {
  std::string out = "{";
  for (std::size_t k = 0; k < reply.size(); ++k) {
    if (k) out += ",";
    out += instance.resource(reply[k]).id;
  }
  return out + "}";
}

}  // namespace gnd
