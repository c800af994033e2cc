#include "ci/feasibility.hpp"

#include "ci/error.hpp"

namespace ci {

namespace {

void check_params(const Rational& epsilon, const Rational& lambda,
                  const Rational& rho) {
  if (epsilon < 0 || epsilon > 1 || lambda < 0 || lambda > 1 || rho < 0 ||
      rho > 1)
    throw Error(ErrorCode::MalformedInput, "parameters must lie in [0,1]");
}

}  // namespace

FeasibilityReport check_feasibility(const BigInt& size_i, const BigInt& size_a,
                                    const Rational& epsilon,
                                    const Rational& lambda,
                                    const Rational& rho) {
  check_params(epsilon, lambda, rho);
  if (size_a > size_i || size_a < 0)
    throw Error(ErrorCode::MalformedInput, "need 0 <= |A| <= |I|");

  FeasibilityReport report;
  report.size_i = size_i;
  report.size_a = size_a;

  // Inequalities rearranged to avoid division:
  //   1/rho <= |I|        <=>  1 <= rho * |I|
  //   |I| <= 1/lambda     <=>  lambda * |I| <= 1   (skipped when lambda = 0)
  //   (1-eps)/rho <= |A|  <=>  1 - eps <= rho * |A|
  //   |I|-|A| <= eps/lam  <=>  lambda * (|I|-|A|) <= eps  (skipped, ditto)
  // rho = 0 then makes the rho-side fail unless vacuous (eps = 1 for 2b).
  bool ok_a = rho * size_i >= 1 && (lambda == 0 || lambda * size_i <= 1);
  bool ok_b = rho * size_a >= 1 - epsilon;
  bool ok_c = lambda == 0 || lambda * (size_i - size_a) <= epsilon;

  if (!ok_a) report.violated.push_back(Inequality::A);
  if (!ok_b) report.violated.push_back(Inequality::B);
  if (!ok_c) report.violated.push_back(Inequality::C);
  report.feasible = report.violated.empty();
  if (size_i > 0) report.epsilon_opt = epsilon_opt(size_i, size_a, lambda, rho);
  return report;
}

Rational epsilon_opt(const BigInt& size_i, const BigInt& size_a,
                     const Rational& lambda, const Rational& rho) {
  if (size_i < 1)
    throw Error(ErrorCode::MalformedInput, "epsilon_opt needs |I| >= 1");
  Rational from_rho = 1 - rho * size_a;
  Rational from_lambda = lambda * (size_i - size_a);
  Rational e = from_rho > from_lambda ? from_rho : from_lambda;
  if (e < 0) e = 0;
  if (e > 1) e = 1;
  return e;
}

}  // namespace ci
