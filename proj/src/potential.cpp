#include "gnd/potential.hpp"

#include <bit>

#include <fmt/format.h>

#include "gnd/errors.hpp"

namespace gnd {

double resource_potential(const ResourceParams& resource, const ExponentProfile& exponents,
                          std::span<const Load> weights, std::size_t threshold) {
  const std::size_t n = weights.size();
  if (n == 0) return 0.0;
  if (n > threshold) {
    throw UnsupportedError(
        fmt::format("potential needs exact shares but a resource has {} users", n));
  }
  // binom[k] = C(n, k)
  std::vector<double> binom(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) {
    binom[k] = binom[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k);
  }
  double phi = 0.0;
  for (std::size_t k = 1; k <= n; ++k) phi += resource.sigma / static_cast<double>(k);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Load sum = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::uint64_t{1} << b)) sum += weights[b];
    }
    const auto k = static_cast<std::size_t>(std::popcount(mask));
    phi += h_value(resource, exponents, sum) / (binom[k] * static_cast<double>(k));
  }
  return phi;
}

double potential(const Instance& instance, const StrategyProfile& profile,
                 std::size_t threshold) {
  const auto users = users_by_resource(instance, profile);
  double phi = 0.0;
  std::vector<Load> weights;
  for (ResourceId e = 0; e < users.size(); ++e) {
    weights.clear();
    for (const auto& u : users[e]) weights.push_back(u.weight);
    phi += resource_potential(instance.resource(e), instance.exponents(), weights, threshold);
  }
  return phi;
}

double potential_by_prefix(const Instance& instance, const StrategyProfile& profile,
                           const std::vector<std::vector<RequestId>>& orders,
                           std::size_t threshold) {
  const auto users = users_by_resource(instance, profile);
  double phi = 0.0;
  std::vector<ShareUser> prefix;
  for (ResourceId e = 0; e < users.size(); ++e) {
    std::vector<RequestId> order;
    if (orders.empty()) {
      for (const auto& u : users[e]) order.push_back(u.request);
    } else {
      order = orders.at(e);
      if (order.size() != users[e].size()) {
        throw StructuralError(fmt::format("order for resource {} has the wrong size", e));
      }
    }
    prefix.clear();
    for (RequestId i : order) {
      prefix.push_back({i, instance.weight(i, e)});
      phi += shapley_exact({instance.resource(e), instance.exponents(), prefix, i}, threshold);
    }
  }
  return phi;
}

bool potential_computable(const Instance& instance, const StrategyProfile& profile,
                          std::size_t threshold) {
  for (const auto& u : users_by_resource(instance, profile)) {
    if (u.size() > threshold) return false;
  }
  return true;
}

}  // namespace gnd
