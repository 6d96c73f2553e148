#include <doctest.h>

#include <cmath>

#include "gnd/bounds.hpp"
#include "gnd/errors.hpp"
#include "gnd/instance.hpp"
#include "gnd/sharing.hpp"
#include "support/generators.hpp"

using namespace gnd;

namespace {

Instance two_parallel(Load w1 = 1, Load w2 = 1) {
  HostGraph g(false, {"s", "t"}, {{0, 0, 1}, {1, 0, 1}});
  return Instance({{2.0}}, {{"e1", 1.0, {1.0}}, {"e2", 1.0, {1.0}}}, g,
                  {{1, {w1, w1}, Routing{0, 1}}, {2, {w2, w2}, Routing{0, 1}}});
}

}  // namespace

TEST_CASE("rep_cost evaluates the REP form") {
  const ExponentProfile a2{{2.0}};
  CHECK(rep_cost({"e", 1.0, {1.0}}, a2, 0) == 0.0);
  CHECK(rep_cost({"e", 1.0, {1.0}}, a2, 3) == doctest::Approx(10.0));
  CHECK(rep_cost({"e", 6.0, {1.0, 2.0}}, {{2.0, 3.0}}, 2) == doctest::Approx(26.0));
}

TEST_CASE("rep_cost is superadditive in the load-dependent part") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    auto q = testing::random_query(rng, 1, 1);
    const auto a = static_cast<Load>(testing::uniform_int(rng, 1, 20));
    const auto b = static_cast<Load>(testing::uniform_int(rng, 1, 20));
    const double lhs = h_value(q.resource, q.exponents, a + b);
    CHECK(lhs >= h_value(q.resource, q.exponents, a) + h_value(q.resource, q.exponents, b));
  }
}

TEST_CASE("loads and total cost") {
  const auto inst = two_parallel();
  CHECK(load_vector(inst, {{0}, {0}}) == LoadVector{2, 0});
  CHECK(load_vector(inst, {{0}, {1}}) == LoadVector{1, 1});
  CHECK(total_cost(inst, StrategyProfile{{0}, {0}}) == doctest::Approx(5.0));
  CHECK(total_cost(inst, StrategyProfile{{0}, {1}}) == doctest::Approx(4.0));

  const Instance machine({{2.0}}, {{"m", 6.0, {1.0}}}, std::nullopt,
                         {{1, {3}, MachineChoice{{0}}}});
  CHECK(load_vector(machine, {{0}}) == LoadVector{3});
  CHECK(total_cost(machine, StrategyProfile{{0}}) == doctest::Approx(15.0));

  CHECK_THROWS_AS(load_vector(inst, {{0}, {7}}), StructuralError);
  CHECK_THROWS_AS(load_vector(inst, {{0}}), StructuralError);
}

TEST_CASE("total cost is the sum of per-resource costs") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const auto inst = testing::random_explicit_instance(rng);
    StrategyProfile p;
    for (const auto& r : inst.requests()) p.push_back(std::get<ExplicitReplies>(r.kind).replies[0]);
    const auto loads = load_vector(inst, p);
    double sum = 0.0;
    for (ResourceId e = 0; e < inst.resource_count(); ++e) sum += inst.cost(e, loads[e]);
    CHECK(total_cost(inst, p) == sum);
  }
}

TEST_CASE("validate_reply per request kind") {
  // path s - a - t plus a chord s - t
  HostGraph g(false, {"s", "a", "t"}, {{0, 0, 1}, {1, 1, 2}, {2, 0, 2}});
  std::vector<ResourceParams> res{{"sa", 1, {1}}, {"at", 1, {1}}, {"st", 1, {1}},
                                  {"m1", 1, {1}}, {"m2", 1, {1}}};
  std::vector<Load> w(5, 1);
  const Instance inst({{2.0}}, res, g,
                      {{0, w, Routing{0, 2}},
                       {1, w, SetConnectivity{{0, 2}}},
                       {2, w, MachineChoice{{3, 4}}},
                       {3, w, ExplicitReplies{{{0, 1}, {2}}}},
                       {4, w, MultiRouting{{{0, 1}, {1, 2}}}}});
  CHECK(validate_reply(inst, 0, {0, 1}).ok);
  CHECK(validate_reply(inst, 0, {2}).ok);
  CHECK_FALSE(validate_reply(inst, 0, {0}).ok);
  CHECK_FALSE(validate_reply(inst, 1, {1}).ok);  // misses every edge at s
  CHECK(validate_reply(inst, 1, {2}).ok);
  CHECK_FALSE(validate_reply(inst, 2, {3, 4}).ok);
  CHECK(validate_reply(inst, 2, {4}).ok);
  CHECK_FALSE(validate_reply(inst, 2, {0}).ok);
  CHECK(validate_reply(inst, 3, {2}).ok);
  CHECK_FALSE(validate_reply(inst, 3, {0}).ok);
  CHECK(validate_reply(inst, 4, {0, 1}).ok);
  CHECK_FALSE(validate_reply(inst, 4, {0}).ok);
  const auto v = validate_reply(inst, 2, {3, 4});
  CHECK_FALSE(v.reason.empty());
}

TEST_CASE("directed set connectivity needs strong connectivity") {
  HostGraph g(true, {"a", "b"}, {{0, 0, 1}, {1, 1, 0}});
  const Instance inst({{2.0}}, {{"ab", 1, {1}}, {"ba", 1, {1}}}, g,
                      {{0, {1, 1}, SetConnectivity{{0, 1}}}});
  CHECK_FALSE(validate_reply(inst, 0, {0}).ok);
  CHECK(validate_reply(inst, 0, {0, 1}).ok);
}

TEST_CASE("instance invariants") {
  CHECK_THROWS_AS(Instance({{1.0}}, {{"e", 1, {1}}}, std::nullopt,
                           {{0, {1}, MachineChoice{{0}}}}),
                  StructuralError);
  CHECK_THROWS_AS(Instance({{2.0}}, {{"e", 1, {0}}}, std::nullopt,
                           {{0, {1}, MachineChoice{{0}}}}),
                  StructuralError);
  CHECK_THROWS_AS(Instance({{2.0}}, {{"e", 1, {1}}}, std::nullopt,
                           {{0, {0}, MachineChoice{{0}}}}),
                  StructuralError);
  CHECK_THROWS_AS(Instance({{2.0}}, {{"e", 1, {1}}}, std::nullopt, {{0, {1}, Routing{0, 1}}}),
                  StructuralError);
  CHECK_THROWS_AS(Instance({{2.0}}, {{"e", 1, {1}}}, std::nullopt, {}), StructuralError);
  CHECK_THROWS_AS(Instance({{2.0}}, {{"e", 1, {1}}}, std::nullopt,
                           {{0, {1}, ExplicitReplies{{{}}}}}),
                  StructuralError);
}

TEST_CASE("requests are ordered by id") {
  const Instance inst({{2.0}}, {{"e", 1, {1}}}, std::nullopt,
                      {{7, {2}, MachineChoice{{0}}}, {3, {1}, MachineChoice{{0}}}});
  CHECK(inst.request(0).id == 3);
  CHECK(inst.weight(1, 0) == 2);
}

TEST_CASE("gamma_alpha") {
  const Instance one({{2.0}}, {{"e", 4, {1}}}, std::nullopt, {{0, {1}, MachineChoice{{0}}}});
  CHECK(gamma_alpha(one) == doctest::Approx(2.0));
  const Instance two({{2.0}}, {{"a", 4, {1}}, {"b", 9, {1}}}, std::nullopt,
                     {{0, {1, 1}, MachineChoice{{0, 1}}}});
  CHECK(gamma_alpha(two) == doctest::Approx(3.0));
  // a zero factor is skipped rather than dividing by zero
  const Instance skip({{2.0, 3.0}}, {{"e", 4, {0.0, 2.0}}}, std::nullopt,
                      {{0, {1}, MachineChoice{{0}}}});
  CHECK(gamma_alpha(skip) == doctest::Approx(1.0));
}

TEST_CASE("theoretical bounds on the two-player instance") {
  const auto inst = two_parallel();
  const auto c = rep_expansion_constants(Mechanism::shapley_exact, inst.exponents());
  const auto b = theoretical_bounds(inst, 1.0, 0.01, c);

  const double e1 = 1.01 / 0.99;
  const double a = 1.5, bb = 2.0, mu = 0.5;
  const double q = 2.0 * e1 * 2.0 * a / (1.0 - e1 * e1 * mu);
  const double t = std::ceil(q * std::log(a * bb * 4.0));
  CHECK(b.epsilon1 == doctest::Approx(e1));
  CHECK(b.A == doctest::Approx(a));
  CHECK(b.B == bb);
  CHECK(b.mu == mu);
  CHECK(b.Q == doctest::Approx(q));
  CHECK(static_cast<double>(b.T) == t);
  CHECK(b.T == 32);
  // z_max = 9, K = 2: (2 * 2 * 9)^3
  CHECK(b.lambda_alpha == doctest::Approx(46656.0));
  CHECK(b.lambda == doctest::Approx(1.0 + 46656.0));
  CHECK(b.ratio_bound == doctest::Approx(2.0 * e1 * e1 * b.lambda / (1.0 - e1 * e1 * mu)));
  CHECK(b.ratio_bound > b.rho);
}

TEST_CASE("theoretical bounds reject large epsilon") {
  const auto inst = two_parallel();
  const auto c = rep_expansion_constants(Mechanism::proportional, inst.exponents());
  CHECK_THROWS_AS(theoretical_bounds(inst, 1.0, 0.2, c), ConfigError);
  CHECK_NOTHROW(theoretical_bounds(inst, 1.0, 0.17, c));
  CHECK_THROWS_AS(theoretical_bounds(inst, 1.0, 0.0, c), ConfigError);
}

TEST_CASE("ratio bound exceeds rho on random instances") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const auto inst = testing::random_explicit_instance(rng);
    const double rho = testing::uniform(rng, 1.0, 4.0);
    for (auto m : {Mechanism::proportional, Mechanism::shapley_exact}) {
      const auto b = theoretical_bounds(inst, rho, testing::uniform(rng, 0.001, 0.15),
                                        rep_expansion_constants(m, inst.exponents()));
      CHECK(b.ratio_bound > rho);
      CHECK(b.T >= 1);
    }
  }
}
