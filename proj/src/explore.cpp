#include <cmath>
#include <vector>

#include "explorego/explore/policies.hpp"

namespace explorego::explore {

std::vector<double> tee_betas(double phi, double lambda, double alpha, int workers) {
  check_config(workers >= 2, "tee schedule needs at least 2 workers");
  check_config(phi > 0.0, "tee.phi must be positive");
  check_config(lambda > 0.0 && lambda <= 1.0, "tee.lambda must be in (0,1]");
  check_config(alpha >= 0.0, "tee.alpha must be non-negative");
  std::vector<double> betas(workers);
  for (int i = 0; i < workers; ++i) {
    const double exponent = 1.0 + (static_cast<double>(i) / (workers - 1)) * alpha;
    betas[i] = phi * std::pow(lambda, exponent);
  }
  return betas;
}

int pure_policy_ugreedy(std::span<const float> u_values, float eps, Rng& rng) {
  check(!u_values.empty(), "pure_policy_ugreedy with no action values");
  check(eps >= 0.0f && eps <= 1.0f, "pure_policy_ugreedy epsilon outside [0,1]");
  if (eps > 0.0f && rng.next_float() < eps)
    return static_cast<int>(rng.uniform_int(u_values.size()));
  int best = 0;
  for (int a = 1; a < static_cast<int>(u_values.size()); ++a)
    if (u_values[a] > u_values[best]) best = a;
  return best;
}

}  // namespace explorego::explore
