#include <doctest.h>

#include <cmath>

#include "gnd/errors.hpp"
#include "gnd/rng.hpp"
#include "gnd/sharing.hpp"
#include "support/generators.hpp"

using namespace gnd;

namespace {

const ResourceParams kEdge{"e", 6.0, {1.0}};
const ExponentProfile kA2{{2.0}};

std::vector<ShareUser> users_of(const std::vector<Load>& w) {
  std::vector<ShareUser> u;
  for (std::size_t k = 0; k < w.size(); ++k) u.push_back({k, w[k]});
  return u;
}

}  // namespace

TEST_CASE("h_value") {
  CHECK(h_value({"e", 0, {1}}, kA2, 3) == doctest::Approx(9.0));
  CHECK(h_value({"e", 0, {1}}, kA2, 0) == 0.0);
  CHECK(h_value({"e", 0, {1, 2}}, {{2.0, 3.0}}, 2) == doctest::Approx(20.0));
}

TEST_CASE("proportional share") {
  const auto u = users_of({1, 2});
  CHECK(proportional_share({kEdge, kA2, u, 0}) == doctest::Approx(5.0));
  CHECK(proportional_share({kEdge, kA2, u, 1}) == doctest::Approx(10.0));
  const auto solo = users_of({3});
  CHECK(proportional_share({kEdge, kA2, solo, 0}) == doctest::Approx(15.0));
}

TEST_CASE("exact Shapley share against permutation enumeration") {
  const auto u = users_of({1, 2});
  CHECK(shapley_exact({kEdge, kA2, u, 0}) ==
        doctest::Approx(testing::shapley_by_permutations(kEdge, kA2, {1, 2}, 0)));
  CHECK(shapley_exact({kEdge, kA2, u, 0}) == doctest::Approx(6.0));
  CHECK(shapley_exact({kEdge, kA2, u, 1}) == doctest::Approx(9.0));
  CHECK(shapley_exact({kEdge, kA2, users_of({3}), 0}) == doctest::Approx(15.0));
  CHECK(shapley_exact({{"e", 0, {1}}, kA2, users_of({1, 1}), 1}) == doctest::Approx(2.0));

  std::mt19937_64 rng(4);
  for (int k = 0; k < 300; ++k) {
    const auto q = testing::random_query(rng, 6, 5);
    const auto users = users_of(q.weights);
    for (std::size_t t = 0; t < users.size(); ++t) {
      CHECK(shapley_exact({q.resource, q.exponents, users, t}) ==
            doctest::Approx(testing::shapley_by_permutations(q.resource, q.exponents, q.weights, t))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("exact Shapley threshold and missing target") {
  const auto many = users_of(std::vector<Load>(13, 1));
  CHECK_THROWS_AS(shapley_exact({kEdge, kA2, many, 0}), UnsupportedError);
  CHECK_NOTHROW(shapley_exact({kEdge, kA2, many, 0}, 13));
  CHECK_THROWS_AS(proportional_share({kEdge, kA2, users_of({1, 2}), 5}), StructuralError);
}

TEST_CASE("shares depend only on the weight multiset") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) {
    const auto q = testing::random_query(rng, 6, 5);
    auto users = users_of(q.weights);
    auto shuffled = users;
    for (auto& x : shuffled) x.request += 100;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t t = 0; t < users.size(); ++t) {
      for (auto m : {Mechanism::proportional, Mechanism::shapley_exact}) {
        CHECK(exact_share(m, {q.resource, q.exponents, users, t}) ==
              doctest::Approx(exact_share(m, {q.resource, q.exponents, shuffled, t + 100})));
      }
    }
  }
}

TEST_CASE("h is supermodular") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 1000; ++k) {
    const double a = testing::uniform(rng, 1.0001, 5.0);
    const double x1 = testing::uniform(rng, 0, 10), x2 = testing::uniform(rng, 0, 10),
                 y = testing::uniform(rng, 0, 10);
    CHECK(std::pow(x1 + y, a) - std::pow(x1, a) <=
          std::pow(x1 + x2 + y, a) - std::pow(x1 + x2, a) + 1e-9);
  }
}

TEST_CASE("sampled Shapley") {
  auto rng = make_stream(1, StreamKind::cost_share, {0});
  const auto solo = shapley_sampled({kEdge, kA2, users_of({3}), 0}, 0.05, 0.05, rng, 10);
  CHECK(solo.value == doctest::Approx(15.0));

  // mean over seeds within three standard errors of the exact value
  const auto u = users_of({1, 2, 4});
  const double exact = shapley_exact({kEdge, kA2, u, 0});
  const int trials = 400;
  std::vector<double> xs;
  for (int s = 0; s < trials; ++s) {
    auto r = make_stream(static_cast<std::uint64_t>(s), StreamKind::cost_share, {1});
    xs.push_back(shapley_sampled({kEdge, kA2, u, 0}, 0.5, 0.5, r, 5).value);
  }
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= trials;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= trials - 1;
  CHECK(std::abs(mean - exact) <= 3.0 * std::sqrt(var / trials));

  int inside = 0;
  const auto pair = users_of({1, 2});
  for (int s = 0; s < 200; ++s) {
    auto r = make_stream(static_cast<std::uint64_t>(s), StreamKind::cost_share, {2});
    const auto est = shapley_sampled({kEdge, kA2, pair, 0}, 0.05, 0.05, r, 1000000);
    CHECK_FALSE(est.capped);
    inside += est.value >= 5.7 && est.value <= 6.3;
  }
  CHECK(inside >= 190);
}

TEST_CASE("Hoeffding sample count") {
  const auto u = users_of({1, 2});
  // range h(3) = 9, lower 6/2 + h(1) = 4
  const double expect = std::ceil(81.0 * std::log(2.0 / 0.05) / (2.0 * std::pow(0.05 * 4.0, 2)));
  CHECK(static_cast<double>(hoeffding_sample_count({kEdge, kA2, u, 0}, 0.05, 0.05)) == expect);
  CHECK(hoeffding_sample_count({kEdge, kA2, users_of({2}), 0}, 0.05, 0.05) == 0);
  CHECK_THROWS_AS(hoeffding_sample_count({kEdge, kA2, u, 0}, 1.5, 0.05), ConfigError);

  auto r = make_stream(0, StreamKind::cost_share, {});
  const auto capped = shapley_sampled({kEdge, kA2, u, 0}, 0.05, 0.05, r, 10);
  CHECK(capped.capped);
  CHECK(capped.samples == 10);
}

TEST_CASE("sampled shares are reproducible per key") {
  HostGraph g(false, {"s", "t"}, {{0, 0, 1}});
  const Instance inst(kA2, {kEdge}, g, {{0, {1}, Routing{0, 1}}, {1, {2}, Routing{0, 1}}});
  ShareSettings st;
  st.mechanism = Mechanism::shapley_sampled;
  st.epsilon = 0.2;
  st.seed = 77;
  const CostShareEvaluator a(inst, st), b(inst, st);
  const auto u = users_of({1, 2});
  const double x = a.share(0, u, 0, 5);
  b.share(0, u, 1, 5);
  CHECK(b.share(0, u, 0, 5) == x);
  CHECK(a.share(0, u, 0, 6) != x);
  CHECK(a.stats().sampled_shares == 2);
}

TEST_CASE("expansion constants") {
  const auto p = rep_expansion_constants(Mechanism::proportional, kA2);
  CHECK(p.terms[0][0].z == doctest::Approx(2.0));
  CHECK(p.terms[0][1].z == doctest::Approx(2.0));
  const auto s = rep_expansion_constants(Mechanism::shapley_exact, kA2);
  CHECK(s.terms[0][0].z == doctest::Approx(9.0));
  CHECK(s.terms[0][1].z == doctest::Approx(4.0));
  const auto s3 = rep_expansion_constants(Mechanism::shapley_exact, {{3.0}});
  CHECK(s3.terms[0][0].z == doctest::Approx(27.0));
  CHECK(s3.terms[0][1].z == doctest::Approx(6.0));
  CHECK(generalized_binomial(2.5, 1) == doctest::Approx(2.5));
  CHECK(generalized_binomial(2.5, 2) == doctest::Approx(2.5 * 1.5 / 2.0));
  for (const auto& c : {p, s, s3}) {
    for (const auto& t : c.terms[0]) {
      CHECK(t.x >= 0.0);
      CHECK(t.y >= 1.0);
      CHECK(t.z >= 0.0);
    }
  }
}

TEST_CASE("expansion inequality") {
  const auto u = users_of({1, 2});
  const auto pv = rep_expansion_check(Mechanism::proportional, {kEdge, kA2, u, 0});
  CHECK(pv.holds);
  CHECK(pv.share == doctest::Approx(5.0));
  CHECK(pv.bound == doctest::Approx(6.0 + 2.0 * 1.0 + 2.0 * 2.0));
  const auto sv = rep_expansion_check(Mechanism::shapley_exact, {kEdge, kA2, u, 0});
  CHECK(sv.holds);
  CHECK(sv.share == doctest::Approx(6.0));
  CHECK(sv.bound == doctest::Approx(6.0 + 9.0 * 1.0 + 4.0 * 2.0));

  // every weight multiset with entries <= 4 and at most 4 users, several exponents
  for (double a : {1.2, 1.5, 2.0, 2.5, 3.0, 3.7}) {
    const ExponentProfile ex{{a}};
    const ResourceParams r{"e", 2.0, {1.5}};
    std::vector<Load> w;
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
      if (!w.empty()) {
        const auto users = users_of(w);
        for (std::size_t t = 0; t < users.size(); ++t) {
          CHECK(rep_expansion_check(Mechanism::proportional, {r, ex, users, t}).holds);
          CHECK(rep_expansion_check(Mechanism::shapley_exact, {r, ex, users, t}).holds);
        }
      }
      if (depth == 4) return;
      for (Load x = w.empty() ? 1 : w.back(); x <= 4; ++x) {
        w.push_back(x);
        rec(depth + 1);
        w.pop_back();
      }
    };
    rec(0);
  }
}
