#ifndef CI_FEASIBILITY_HPP
#define CI_FEASIBILITY_HPP

#include <optional>
#include <vector>

#include "ci/rational.hpp"

namespace ci {

/// The three feasibility inequalities on (|I|, |A|, epsilon, lambda, rho):
///   (2a)  1/rho <= |I| <= 1/lambda
///   (2b)  (1-epsilon)/rho <= |A|
///   (2c)  |I| - |A| <= epsilon/lambda
/// lambda = 0 makes both lambda-inequalities vacuous.
enum class Inequality { A, B, C };

struct FeasibilityReport {
  bool feasible = false;
  BigInt size_i;
  BigInt size_a;
  /// max(1 - rho|A|, lambda(|I|-|A|)) clamped to [0,1]; absent when |I| = 0.
  std::optional<Rational> epsilon_opt;
  std::vector<Inequality> violated;
};

/// Decides feasibility from the set sizes alone. All comparisons are in
/// exact integer arithmetic (cross-multiplied), never by division.
FeasibilityReport check_feasibility(const BigInt& size_i, const BigInt& size_a,
                                    const Rational& epsilon,
                                    const Rational& lambda,
                                    const Rational& rho);

/// The minimum feasible error: max(1 - rho|A|, lambda(|I|-|A|)),
/// clamped to [0,1]. Requires |I| >= 1.
Rational epsilon_opt(const BigInt& size_i, const BigInt& size_a,
                     const Rational& lambda, const Rational& rho);

}  // namespace ci

#endif
