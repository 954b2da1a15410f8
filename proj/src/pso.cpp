#include "dersizer/pso.hpp"

#include "dersizer/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace dersizer {

namespace {

double reflect(double x, double lo, double hi, double& v) {
  for (int bounce = 0; bounce < 4 && (x < lo || x > hi); ++bounce) {
    x = x < lo ? 2.0 * lo - x : 2.0 * hi - x;
    v = -v;
  }
  return std::clamp(x, lo, hi);
}

}  // namespace

void validate(const PsoConfig& c) {
  if (c.swarm_size < 2) throw std::invalid_argument("pso: swarm_size must be >= 2");
  if (c.max_iterations < 1) throw std::invalid_argument("pso: max_iterations must be >= 1");
  if (c.lower.size() == 0 || c.lower.size() != c.upper.size()) {
    throw std::invalid_argument("pso: bounds must be non-empty and of equal dimension");
  }
  if (!(c.lower.array() < c.upper.array()).all()) throw std::invalid_argument("pso: need lower < upper");
  if (c.inertia_weight < 0.0 || c.cognitive_coeff < 0.0 || c.social_coeff < 0.0) {
    throw std::invalid_argument("pso: coefficients must be >= 0");
  }
  if (!(c.velocity_clamp > 0.0) || c.velocity_clamp > 1.0) {
    throw std::invalid_argument("pso: velocity_clamp must be in (0, 1]");
  }
  if (c.stagnation_tolerance < 0.0) throw std::invalid_argument("pso: stagnation_tolerance must be >= 0");
}

PsoResult optimize(const Objective& objective, const PsoConfig& config) {
  validate(config);
  const auto dim = config.lower.size();
  const auto n = static_cast<Index>(config.swarm_size);
  const Eigen::ArrayXd lo = config.lower.array();
  const Eigen::ArrayXd hi = config.upper.array();
  const Eigen::ArrayXd vmax = config.velocity_clamp * (hi - lo);

  std::mt19937_64 rng(config.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::MatrixXd position(dim, n), velocity(dim, n);
  for (Index p = 0; p < n; ++p) {
    for (Index d = 0; d < dim; ++d) {
      position(d, p) = lo[d] + unit(rng) * (hi[d] - lo[d]);
      velocity(d, p) = (2.0 * unit(rng) - 1.0) * vmax[d];
    }
  }

  PsoResult result;
  Eigen::MatrixXd personal_best = position;
  Eigen::VectorXd personal_value(n);
  for (Index p = 0; p < n; ++p) personal_value[p] = objective(position.col(p));
  result.evaluations = static_cast<std::size_t>(n);

  Index leader = 0;
  personal_value.minCoeff(&leader);
  result.best_position = personal_best.col(leader);
  result.best_objective = personal_value[leader];
  result.convergence_trace.push_back(result.best_objective);

  Eigen::MatrixXd r1(dim, n), r2(dim, n);
  std::size_t stalled = 0;
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    for (Index p = 0; p < n; ++p) {
      for (Index d = 0; d < dim; ++d) {
        r1(d, p) = unit(rng);
        r2(d, p) = unit(rng);
      }
    }
    for (Index p = 0; p < n; ++p) {
      for (Index d = 0; d < dim; ++d) {
        double v = config.inertia_weight * velocity(d, p) +
                   config.cognitive_coeff * r1(d, p) * (personal_best(d, p) - position(d, p)) +
                   config.social_coeff * r2(d, p) * (result.best_position[d] - position(d, p));
        v = std::clamp(v, -vmax[d], vmax[d]);
        position(d, p) = reflect(position(d, p) + v, lo[d], hi[d], v);
        velocity(d, p) = v;
      }
    }

    Eigen::VectorXd values(n);
    for (Index p = 0; p < n; ++p) values[p] = objective(position.col(p));
    result.evaluations += static_cast<std::size_t>(n);

    const double previous = result.best_objective;
    for (Index p = 0; p < n; ++p) {
      if (values[p] < personal_value[p]) {
        personal_value[p] = values[p];
        personal_best.col(p) = position.col(p);
      }
      if (values[p] < result.best_objective) {
        result.best_objective = values[p];
        result.best_position = position.col(p);
      }
    }
    result.convergence_trace.push_back(result.best_objective);
    result.iterations_run = it + 1;

    const double improvement = previous - result.best_objective;
    if (improvement <= config.stagnation_tolerance * std::abs(previous)) {
      if (++stalled >= config.stagnation_patience) break;
    } else {
      stalled = 0;
    }
  }
  return result;
}

void write_trace_csv(std::ostream& out, const PsoResult& result) {
  out << "iteration,best_objective\n";
  for (std::size_t i = 0; i < result.convergence_trace.size(); ++i) {
    out << i << ',' << format_number(result.convergence_trace[i]) << '\n';
  }
}

}  // namespace dersizer
