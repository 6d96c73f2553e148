#include "gnd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gnd/errors.hpp"

namespace gnd {

double gamma_alpha(const Instance& instance) {
  const auto& alphas = instance.exponents().alphas;
  double best = 0.0;
  for (const auto& r : instance.resources()) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      if (r.xis[j] == 0.0) continue;
      const double v = std::pow(r.sigma / ((alphas[j] - 1.0) * r.xis[j]), 1.0 / alphas[j]);
      lowest = std::min(lowest, v);
    }
    if (std::isfinite(lowest)) best = std::max(best, lowest);
  }
  return best;
}

double lambda_alpha(const RepExpansionConstants& constants, double max_alpha) {
  const double z_max = constants.z_max();
  double best = 0.0;
  for (const auto& per_j : constants.terms) {
    const auto K = static_cast<double>(per_j.size());
    best = std::max(best, std::pow(2.0 * K * z_max, max_alpha + 1.0));
  }
  return best;
}

TheoreticalBounds theoretical_bounds(const Instance& instance, double rho, double epsilon,
                                     const RepExpansionConstants& constants) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (!(rho >= 1.0)) throw ConfigError("oracle ratio rho must be at least 1");
  TheoreticalBounds b;
  b.rho = rho;
  b.epsilon1 = (1.0 + epsilon) / (1.0 - epsilon);
  const double e1sq = b.epsilon1 * b.epsilon1;
  if (e1sq >= 2.0) {
    throw ConfigError("epsilon too large: epsilon1^2 must stay below 2");
  }
  const double max_alpha = instance.exponents().max_alpha();
  const auto n = static_cast<double>(instance.request_count());
  b.mu = 1.0 / (2.0 * rho);
  b.gamma_alpha = gamma_alpha(instance);
  b.lambda_alpha = lambda_alpha(constants, max_alpha);
  b.lambda = b.gamma_alpha + b.lambda_alpha * std::pow(rho, max_alpha);
  b.A = harmonic(instance.request_count());
  b.B = std::ceil(max_alpha);
  const double denom = 1.0 - rho * e1sq * b.mu;
  b.Q = 2.0 * b.epsilon1 * n * b.A / denom;
  b.T_real = std::max(1.0, std::ceil(b.Q * std::log(b.A * b.B * std::pow(n, max_alpha))));
  b.T = b.T_real >= 1.8e19 ? std::numeric_limits<std::uint64_t>::max()
                           : static_cast<std::uint64_t>(b.T_real);
  b.ratio_bound = 2.0 * rho * e1sq * b.lambda / denom;
  return b;
}

}  // namespace gnd
