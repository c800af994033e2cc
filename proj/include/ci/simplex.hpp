#ifndef CI_SIMPLEX_HPP
#define CI_SIMPLEX_HPP

#include <optional>
#include <vector>

#include "ci/rational.hpp"

namespace ci {

enum class Relation { Le, Ge, Eq };

struct LinearConstraint {
  std::vector<Rational> coeffs;  // one per variable
  Relation rel = Relation::Le;
  Rational rhs;
};

/// Feasibility LP over nonnegative variables with exact rational
/// coefficients.
struct RationalLp {
  std::size_t num_vars = 0;
  std::vector<LinearConstraint> constraints;
};

/// Phase-one simplex with Bland's anti-cycling rule; returns a feasible
/// point, or nullopt when the program is infeasible. All arithmetic is
/// exact.
std::optional<std::vector<Rational>> solve_lp(const RationalLp& lp);

}  // namespace ci

#endif
