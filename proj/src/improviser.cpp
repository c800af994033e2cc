#include "ci/improviser.hpp"

namespace ci {

Word Improviser::draw(Rng& rng) const {
  if (bernoulli(coin_bias_, rng)) return sample_a_(rng);
  return sample_b_(rng);
}

BuildResult build_improviser(const Params& params,
                             std::shared_ptr<SpecOperations> ops) {
  BigInt size_i = ops->count_improvisations();
  BigInt size_a = ops->count_admissible();
  FeasibilityReport report = check_feasibility(size_i, size_a, params.epsilon,
                                               params.lambda, params.rho);
  if (!report.feasible) return report;

  Rational bias = 1 - *report.epsilon_opt;
  Sampler a = [ops](Rng& rng) { return ops->sample_admissible(rng); };
  Sampler b = [ops](Rng& rng) { return ops->sample_inadmissible(rng); };
  return Improviser(std::move(bias), std::move(a), std::move(b));
}

}  // namespace ci
