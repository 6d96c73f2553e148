#pragma once

#include <cstdint>

#include "gnd/instance.hpp"
#include "gnd/sharing.hpp"

namespace gnd {

struct TheoreticalBounds {
  double epsilon1 = 0.0;
  double gamma_alpha = 0.0;
  double lambda_alpha = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double A = 0.0;
  double B = 0.0;
  double Q = 0.0;
  std::uint64_t T = 0;
  double T_real = 0.0;  // ceil(Q ln(...)) before conversion; may exceed 2^64
  double ratio_bound = 0.0;
  double rho = 1.0;
};

// max_e min_j (sigma_e / ((alpha_j - 1) xi_{e,j}))^{1/alpha_j}, skipping
// zero factors.
double gamma_alpha(const Instance& instance);

// max_j (2 K_j z_max)^{max alpha + 1}.
double lambda_alpha(const RepExpansionConstants& constants, double max_alpha);

// Throws ConfigError when epsilon is outside (0, 1), rho < 1, or
// epsilon1^2 >= 2.
TheoreticalBounds theoretical_bounds(const Instance& instance, double rho, double epsilon,
                                     const RepExpansionConstants& constants);

}  // namespace gnd
