#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace dersizer {

/// Global-best particle swarm settings. Defaults are the constriction-
/// equivalent coefficients (w = 0.729, c1 = c2 = 1.49445).
struct PsoConfig {
  std::size_t swarm_size = 30;
  std::size_t max_iterations = 100;
  double inertia_weight = 0.729;
  double cognitive_coeff = 1.49445;
  double social_coeff = 1.49445;
  /// Maximum |velocity| as a fraction of each dimension's range.
  double velocity_clamp = 0.2;
  /// Stop when the best objective improves by no more than this fraction of
  /// its magnitude for `stagnation_patience` consecutive iterations.
  double stagnation_tolerance = 1e-9;
  std::size_t stagnation_patience = 20;
  std::uint64_t rng_seed = 7;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

void validate(const PsoConfig& config);

struct PsoResult {
  Eigen::VectorXd best_position;
  double best_objective = 0.0;
  std::size_t iterations_run = 0;
  std::size_t evaluations = 0;
  /// Best objective after initialization (entry 0) and after each iteration.
  std::vector<double> convergence_trace;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Minimizes `objective` over the box [lower, upper]. Positions leaving the
/// box are reflected back in and the offending velocity component flips
/// sign. All random numbers for an iteration are drawn before any
/// objective call, so the result depends only on the seed.
PsoResult optimize(const Objective& objective, const PsoConfig& config);

void write_trace_csv(std::ostream& out, const PsoResult& result);

}  // namespace dersizer
