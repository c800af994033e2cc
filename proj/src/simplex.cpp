#include "ci/simplex.hpp"

#include "ci/error.hpp"

namespace ci {

namespace {

// Standard-form tableau: rows Ax = b with b >= 0, after adding slack /
// surplus variables, then artificial variables; phase one minimizes the
// artificial sum.
struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // structural + slack + artificial
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<std::size_t> basis;  // column basic in each row
};

void pivot(Tableau& t, std::size_t pr, std::size_t pc) {
  Rational inv = 1 / t.a[pr][pc];
  for (std::size_t j = 0; j < t.cols; ++j) t.a[pr][j] *= inv;
  t.b[pr] *= inv;
  for (std::size_t i = 0; i < t.rows; ++i) {
    if (i == pr || t.a[i][pc] == 0) continue;
    Rational f = t.a[i][pc];
    for (std::size_t j = 0; j < t.cols; ++j) t.a[i][j] -= f * t.a[pr][j];
    t.b[i] -= f * t.b[pr];
  }
  t.basis[pr] = pc;
}

}  // namespace

std::optional<std::vector<Rational>> solve_lp(const RationalLp& lp) {
  for (const LinearConstraint& c : lp.constraints)
    if (c.coeffs.size() != lp.num_vars)
      throw Error(ErrorCode::ShapeMismatch, "constraint width != num_vars");

  std::size_t rows = lp.constraints.size();
  std::size_t structural = lp.num_vars;

  // Count slack columns (one per inequality).
  std::size_t slacks = 0;
  for (const LinearConstraint& c : lp.constraints)
    if (c.rel != Relation::Eq) ++slacks;

  Tableau t;
  t.rows = rows;
  t.cols = structural + slacks + rows;  // artificial per row
  t.a.assign(rows, std::vector<Rational>(t.cols, 0));
  t.b.assign(rows, 0);
  t.basis.assign(rows, 0);

  std::size_t slack_at = structural;
  std::size_t art_at = structural + slacks;
  for (std::size_t i = 0; i < rows; ++i) {
    const LinearConstraint& c = lp.constraints[i];
    bool flip = c.rhs < 0;  // keep b >= 0
    for (std::size_t j = 0; j < structural; ++j)
      t.a[i][j] = flip ? -c.coeffs[j] : c.coeffs[j];
    t.b[i] = flip ? -c.rhs : c.rhs;
    if (c.rel != Relation::Eq) {
      bool le = (c.rel == Relation::Le) != flip;
      t.a[i][slack_at++] = le ? 1 : -1;
    }
    t.a[i][art_at + i] = 1;
    t.basis[i] = art_at + i;
  }

  // Phase-one objective: minimize the sum of artificial variables.
  // Reduced costs z_j = sum over rows of a[i][j] (artificials start
  // basic with cost 1 each); maintained implicitly from the tableau.
  auto reduced_cost = [&](std::size_t j) {
    Rational z = 0;
    for (std::size_t i = 0; i < rows; ++i)
      if (t.basis[i] >= art_at) z += t.a[i][j];
    return z;
  };

  while (true) {
    // Bland's rule: entering column is the lowest index with positive
    // reduced cost (improves the minimization when pivoted in).
    std::size_t enter = t.cols;
    for (std::size_t j = 0; j < art_at; ++j) {
      if (reduced_cost(j) > 0) {
        enter = j;
        break;
      }
    }
    if (enter == t.cols) break;

    // Ratio test, ties broken by lowest basis index (Bland).
    std::size_t leave = rows;
    Rational best = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t.a[i][enter] <= 0) continue;
      Rational ratio = t.b[i] / t.a[i][enter];
      if (leave == rows || ratio < best ||
          (ratio == best && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows)
      throw Error(ErrorCode::Internal, "unbounded phase-one objective");
    pivot(t, leave, enter);
  }

  // Feasible iff every artificial is zero.
  for (std::size_t i = 0; i < rows; ++i)
    if (t.basis[i] >= art_at && t.b[i] != 0) return std::nullopt;

  std::vector<Rational> x(structural, 0);
  for (std::size_t i = 0; i < rows; ++i)
    if (t.basis[i] < structural) x[t.basis[i]] = t.b[i];
  return x;
}

}  // namespace ci
