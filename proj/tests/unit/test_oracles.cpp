#include <doctest.h>

#include "gnd/errors.hpp"
#include "gnd/oracles.hpp"
#include "support/generators.hpp"

using namespace gnd;

namespace {

std::vector<double> random_tolls(std::mt19937_64& rng, std::size_t m) {
  std::vector<double> t(m);
  for (auto& x : t) x = testing::uniform(rng, 0.1, 5.0);
  return t;
}

Instance on_graph(const testing::RandomGraph& g, RequestKind kind) {
  std::vector<ResourceParams> res;
  for (std::size_t e = 0; e < g.edges.size(); ++e) res.push_back({"e" + std::to_string(e), 1, {1}});
  return Instance({{2.0}}, res, testing::to_host(g),
                  {{0, std::vector<Load>(g.edges.size(), 1), std::move(kind)}});
}

}  // namespace

TEST_CASE("routing oracle on a triangle") {
  HostGraph g(false, {"s", "a", "t"}, {{0, 0, 1}, {1, 1, 2}, {2, 0, 2}});
  const std::vector<double> tolls{1, 1, 3};
  const auto ans = routing_oracle(g, 0, 2, tolls);
  CHECK(ans.reply == Reply{0, 1});
  CHECK(ans.toll_total == doctest::Approx(2.0));
  CHECK(ans.rho == 1.0);
}

TEST_CASE("routing oracle edge cases") {
  HostGraph single(false, {"s", "t"}, {{0, 0, 1}});
  const std::vector<double> seven{7};
  CHECK(routing_oracle(single, 0, 1, seven).toll_total == doctest::Approx(7.0));
  HostGraph apart(false, {"s", "t", "u"}, {{0, 0, 2}});
  CHECK_THROWS_AS(routing_oracle(apart, 0, 1, seven), InfeasibleError);
  // equal-cost paths s-a-t and s-b-t: the smaller vertex sequence wins
  HostGraph diamond(false, {"s", "a", "b", "t"}, {{0, 0, 2}, {1, 2, 3}, {2, 0, 1}, {3, 1, 3}});
  const std::vector<double> ones{1, 1, 1, 1};
  CHECK(routing_oracle(diamond, 0, 3, ones).reply == Reply{2, 3});
  // parallel edges of equal toll: the smaller resource id wins
  HostGraph par(false, {"s", "t"}, {{0, 0, 1}, {1, 0, 1}});
  CHECK(routing_oracle(par, 0, 1, std::vector<double>{2, 2}).reply == Reply{0});
}

TEST_CASE("routing oracle matches exhaustive paths and is scale invariant") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    const bool directed = k % 2 == 1;
    const auto g = testing::random_graph(rng, directed, 7, 12);
    const auto host = testing::to_host(g);
    const auto tolls = random_tolls(rng, g.edges.size());
    const auto s = static_cast<VertexId>(testing::uniform_int(rng, 0, static_cast<int>(g.vertices) - 1));
    auto t = s;
    while (t == s) t = static_cast<VertexId>(testing::uniform_int(rng, 0, static_cast<int>(g.vertices) - 1));
    const double best = testing::brute_force_path(g, tolls, s, t);
    const auto ans = routing_oracle(host, s, t, tolls);
    CHECK(ans.toll_total == doctest::Approx(best));
    CHECK(ans.toll_total == doctest::Approx(toll_of(ans.reply, tolls)));
    const auto inst = on_graph(g, Routing{s, t});
    CHECK(validate_reply(inst, 0, ans.reply).ok);
    auto scaled = tolls;
    for (auto& x : scaled) x *= 3.5;
    CHECK(routing_oracle(host, s, t, scaled).reply == ans.reply);
  }
}

TEST_CASE("machine oracle") {
  const std::vector<double> tolls{5, 9, 4, 4};
  CHECK(machine_oracle(std::vector<ResourceId>{0, 1}, tolls).reply == Reply{0});
  CHECK(machine_oracle(std::vector<ResourceId>{3, 2}, tolls).reply == Reply{2});
  CHECK(machine_oracle(std::vector<ResourceId>{1}, tolls).reply == Reply{1});
  CHECK_THROWS_AS(machine_oracle(std::vector<ResourceId>{}, tolls), StructuralError);
}

TEST_CASE("explicit oracle") {
  const std::vector<double> tolls{3, 2};
  CHECK(explicit_oracle({{0}, {1}}, tolls).reply == Reply{1});
  CHECK(explicit_oracle({{0}}, tolls).reply == Reply{0});
  CHECK(explicit_oracle({{0}, {0}}, std::vector<double>{1, 1}).reply == Reply{0});
  const std::vector<double> tie{2, 2};
  CHECK(explicit_oracle({{1}, {0}}, tie).reply == Reply{1});
}

TEST_CASE("steiner tree oracle small cases") {
  HostGraph path(false, {"t1", "a", "t2"}, {{0, 0, 1}, {1, 1, 2}});
  const std::vector<VertexId> ends{0, 2};
  const auto ans = steiner_tree_oracle(path, ends, std::vector<double>{1, 1});
  CHECK(ans.reply == Reply{0, 1});
  CHECK(ans.toll_total == doctest::Approx(2.0));
  CHECK(ans.rho == 2.0);

  HostGraph star(false, {"c", "t1", "t2", "t3", "x"},
                 {{0, 0, 1}, {1, 0, 2}, {2, 0, 3}, {3, 0, 4}});
  const std::vector<VertexId> three{1, 2, 3};
  const auto s = steiner_tree_oracle(star, three, std::vector<double>{1, 1, 1, 1});
  CHECK(s.reply == Reply{0, 1, 2});
  CHECK(s.toll_total == doctest::Approx(3.0));

  HostGraph apart(false, {"a", "b"}, {});
  CHECK_THROWS_AS(steiner_tree_oracle(apart, std::vector<VertexId>{0, 1}, std::vector<double>{}),
                  InfeasibleError);
}

TEST_CASE("steiner forest oracle small cases") {
  HostGraph line(false, {"v1", "v2", "v3", "v4"}, {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}});
  const std::vector<std::pair<VertexId, VertexId>> pairs{{0, 1}, {2, 3}};
  const auto ans = steiner_forest_oracle(line, pairs, std::vector<double>{1, 1, 1});
  CHECK(ans.reply == Reply{0, 2});
  CHECK(ans.toll_total == doctest::Approx(2.0));

  HostGraph tri(false, {"s", "a", "t"}, {{0, 0, 1}, {1, 1, 2}, {2, 0, 2}});
  const std::vector<double> tolls{1, 1, 3};
  const std::vector<std::pair<VertexId, VertexId>> one{{0, 2}};
  CHECK(steiner_forest_oracle(tri, one, tolls).toll_total ==
        doctest::Approx(routing_oracle(tri, 0, 2, tolls).toll_total));

  HostGraph two(false, {"a", "b", "c", "d"}, {{0, 0, 1}, {1, 2, 3}});
  const std::vector<std::pair<VertexId, VertexId>> disjoint{{0, 1}, {2, 3}};
  CHECK(steiner_forest_oracle(two, disjoint, std::vector<double>{4, 5}).reply == Reply{0, 1});
}

TEST_CASE("steiner oracles stay within twice the optimum") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 150; ++k) {
    const auto g = testing::random_graph(rng, false, 7, 11);
    const auto host = testing::to_host(g);
    const auto tolls = random_tolls(rng, g.edges.size());
    std::vector<VertexId> all(g.vertices);
    std::iota(all.begin(), all.end(), VertexId{0});
    std::shuffle(all.begin(), all.end(), rng);
    const auto nt = static_cast<std::size_t>(testing::uniform_int(rng, 2, static_cast<int>(g.vertices)));
    std::vector<VertexId> terms(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(nt));
    std::vector<std::pair<std::size_t, std::size_t>> star;
    for (std::size_t x = 1; x < terms.size(); ++x) star.emplace_back(terms[0], terms[x]);

    const auto tree = steiner_tree_oracle(host, terms, tolls);
    const double opt_tree = testing::brute_force_connect(g, tolls, star);
    CHECK(tree.toll_total <= 2.0 * opt_tree + 1e-9);
    CHECK(tree.toll_total == doctest::Approx(toll_of(tree.reply, tolls)));
    CHECK(validate_reply(on_graph(g, SetConnectivity{terms}), 0, tree.reply).ok);

    std::vector<std::pair<VertexId, VertexId>> pairs;
    const int np = testing::uniform_int(rng, 1, 3);
    for (int p = 0; p < np; ++p) {
      const auto a = static_cast<VertexId>(testing::uniform_int(rng, 0, static_cast<int>(g.vertices) - 1));
      auto b = a;
      while (b == a) b = static_cast<VertexId>(testing::uniform_int(rng, 0, static_cast<int>(g.vertices) - 1));
      pairs.emplace_back(a, b);
    }
    const auto forest = steiner_forest_oracle(host, pairs, tolls);
    std::vector<std::pair<std::size_t, std::size_t>> as_sizes(pairs.begin(), pairs.end());
    CHECK(forest.toll_total <= 2.0 * testing::brute_force_connect(g, tolls, as_sizes) + 1e-9);
    CHECK(validate_reply(on_graph(g, MultiRouting{pairs}), 0, forest.reply).ok);
  }
}

TEST_CASE("directed heuristics return feasible replies with their reported rho") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const auto g = testing::random_graph(rng, true, 6, 12);
    const auto tolls = random_tolls(rng, g.edges.size());
    std::vector<VertexId> terms{0, 1};
    if (g.vertices > 2) terms.push_back(2);
    const auto inst = on_graph(g, SetConnectivity{terms});
    const auto ans = answer_request(inst, 0, tolls);
    CHECK(validate_reply(inst, 0, ans.reply).ok);
    CHECK(ans.rho == 2.0 * static_cast<double>(terms.size() - 1));
    CHECK(oracle_rho(inst, 0) == ans.rho);

    const std::vector<std::pair<VertexId, VertexId>> pairs{{0, 1}, {1, 0}};
    const auto multi = on_graph(g, MultiRouting{pairs});
    const auto m = answer_request(multi, 0, tolls);
    CHECK(validate_reply(multi, 0, m.reply).ok);
    CHECK(m.rho == 2.0);
  }
}

TEST_CASE("toll floor") {
  TollFunction t{0.0, -1.0, 2.0, 1e-20};
  clamp_tolls(t);
  CHECK(t == TollFunction{1e-12, 1e-12, 2.0, 1e-12});
}
