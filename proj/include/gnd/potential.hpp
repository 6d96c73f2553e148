#pragma once

#include <span>
#include <vector>

#include "gnd/instance.hpp"
#include "gnd/sharing.hpp"

namespace gnd {

// Shapley potential contribution of one resource, subset form:
// sum_k [sigma/k + sum_{|T|=k} h(T) / (C(n,k) k)].
double resource_potential(const ResourceParams& resource, const ExponentProfile& exponents,
                          std::span<const Load> weights,
                          std::size_t threshold = kExactShapleyThreshold);

// Phi(p), subset form. Throws UnsupportedError when some resource has more
// than `threshold` users.
double potential(const Instance& instance, const StrategyProfile& profile,
                 std::size_t threshold = kExactShapleyThreshold);

// Phi(p) as the sum of exact Shapley shares of each user among the users
// preceding it. orders[e] lists the request indices of S_e in arrival order;
// an empty outer vector means increasing request index on every resource.
double potential_by_prefix(const Instance& instance, const StrategyProfile& profile,
                           const std::vector<std::vector<RequestId>>& orders = {},
                           std::size_t threshold = kExactShapleyThreshold);

// True when every resource has at most `threshold` users under `profile`.
bool potential_computable(const Instance& instance, const StrategyProfile& profile,
                          std::size_t threshold = kExactShapleyThreshold);

}  // namespace gnd
