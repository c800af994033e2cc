#include "ci/mci.hpp"

#include <algorithm>

#include "ci/error.hpp"

namespace ci {

CellTable cell_sizes(const MciInstance& instance, std::uint32_t k_cap) {
  std::uint32_t k = static_cast<std::uint32_t>(instance.softs.size());
  if (k > k_cap)
    throw Error(ErrorCode::CapExceeded, "too many soft specs for cell split");
  if (instance.m > instance.n)
    throw Error(ErrorCode::EmptyRange, "need m <= n");
  if (instance.epsilons.size() != instance.softs.size())
    throw Error(ErrorCode::ShapeMismatch, "one epsilon per soft spec");

  Dfa base = length_restrict(instance.hard, instance.m, instance.n);

  CellTable table;
  table.size_i = 0;
  table.cells.resize(std::size_t(1) << k);
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    Dfa cell = base;
    for (std::uint32_t i = 0; i < k; ++i) {
      bool in = (mask >> i) & 1u;
      cell = product(cell, instance.softs[i], in ? ProductMode::And
                                                 : ProductMode::Diff);
    }
    Cell& c = table.cells[mask];
    c.mask = mask;
    std::optional<BigInt> size = count_language(cell);
    if (!size)
      throw Error(ErrorCode::Internal, "length-restricted cell is infinite");
    c.size = *size;
    if (c.size > 0) c.sampler = std::make_shared<WalkSampler>(cell);
    table.size_i += c.size;
  }
  return table;
}

RationalLp build_cell_lp(const CellTable& cells, const MciInstance& instance) {
  std::uint32_t k = static_cast<std::uint32_t>(instance.softs.size());
  std::size_t cell_count = cells.cells.size();

  RationalLp lp;
  lp.num_vars = cell_count;

  auto row = [&](Relation rel, Rational rhs) -> LinearConstraint& {
    lp.constraints.push_back(
        {std::vector<Rational>(cell_count, 0), rel, std::move(rhs)});
    return lp.constraints.back();
  };

  // Total mass at most 1 (renormalization raises it back to 1 later).
  {
    LinearConstraint& c = row(Relation::Le, 1);
    for (std::size_t m = 0; m < cell_count; ++m) c.coeffs[m] = 1;
  }

  // Per soft spec i: the mass on cells containing i covers 1 - eps_i.
  for (std::uint32_t i = 0; i < k; ++i) {
    LinearConstraint& c = row(Relation::Ge, 1 - instance.epsilons[i]);
    for (std::size_t m = 0; m < cell_count; ++m)
      if ((m >> i) & 1u) c.coeffs[m] = 1;
  }

  // Per cell: lambda |A'_M| <= p_M <= rho |A'_M|; empty cells are
  // pinned to zero.
  for (std::size_t m = 0; m < cell_count; ++m) {
    const Cell& cell = cells.cells[m];
    if (cell.size == 0) {
      LinearConstraint& c = row(Relation::Eq, 0);
      c.coeffs[m] = 1;
      continue;
    }
    {
      LinearConstraint& c = row(Relation::Ge, instance.lambda * cell.size);
      c.coeffs[m] = 1;
    }
    {
      LinearConstraint& c = row(Relation::Le, instance.rho * cell.size);
      c.coeffs[m] = 1;
    }
  }
  return lp;
}

std::vector<Rational> renormalize_cell_probs(const CellTable& cells,
                                             const MciInstance& instance,
                                             std::vector<Rational> probs) {
  Rational total = 0;
  for (const Rational& p : probs) total += p;
  Rational deficit = 1 - total;
  if (deficit < 0)
    throw Error(ErrorCode::Internal, "LP solution exceeds total mass 1");
  for (std::size_t m = 0; m < probs.size() && deficit > 0; ++m) {
    if (cells.cells[m].size == 0) continue;
    Rational cap = instance.rho * cells.cells[m].size;
    Rational room = cap - probs[m];
    if (room <= 0) continue;
    Rational add = room < deficit ? room : deficit;
    probs[m] += add;
    deficit -= add;
  }
  if (deficit != 0)
    throw Error(ErrorCode::Internal, "could not renormalize to total mass 1");
  return probs;
}

namespace {

void verify_probs(const CellTable& cells, const MciInstance& instance,
                  const std::vector<Rational>& probs) {
  std::uint32_t k = static_cast<std::uint32_t>(instance.softs.size());
  Rational total = 0;
  for (std::size_t m = 0; m < probs.size(); ++m) {
    const Cell& cell = cells.cells[m];
    if (probs[m] < 0 || probs[m] < instance.lambda * cell.size ||
        probs[m] > instance.rho * cell.size)
      throw Error(ErrorCode::Internal, "cell probability violates its bounds");
    total += probs[m];
  }
  if (total != 1)
    throw Error(ErrorCode::Internal, "cell probabilities do not sum to 1");
  for (std::uint32_t i = 0; i < k; ++i) {
    Rational mass = 0;
    for (std::size_t m = 0; m < probs.size(); ++m)
      if ((m >> i) & 1u) mass += probs[m];
    if (mass < 1 - instance.epsilons[i])
      throw Error(ErrorCode::Internal, "soft-spec coverage lost");
  }
}

}  // namespace

MciImproviser::MciImproviser(CellTable cells, std::vector<Rational> cell_probs)
    : cells_(std::move(cells)), probs_(std::move(cell_probs)) {
  common_den_ = 1;
  for (const Rational& p : probs_)
    common_den_ = lcm(common_den_, BigInt(denominator(p)));
  BigInt acc = 0;
  for (const Rational& p : probs_) {
    acc += numerator(p) * (common_den_ / denominator(p));
    cumulative_.push_back(acc);
  }
  if (acc != common_den_)
    throw Error(ErrorCode::Internal, "cell probabilities do not sum to 1");
}

Word MciImproviser::draw(Rng& rng) const {
  BigInt u = rng.below(common_den_);
  for (std::size_t m = 0; m < cumulative_.size(); ++m) {
    if (u < cumulative_[m]) {
      if (!cells_.cells[m].sampler)
        throw Error(ErrorCode::Internal, "positive mass on an empty cell");
      return cells_.cells[m].sampler->draw(rng);
    }
  }
  throw Error(ErrorCode::Internal, "cell selection fell off the end");
}

std::optional<MciImproviser> mci_improviser(const MciInstance& instance) {
  CellTable cells = cell_sizes(instance);
  // Renormalization to total mass 1 needs rho |I| >= 1; without it no
  // distribution fits under the per-cell caps at all.
  if (instance.rho * cells.size_i < 1) return std::nullopt;
  RationalLp lp = build_cell_lp(cells, instance);
  std::optional<std::vector<Rational>> solution = solve_lp(lp);
  if (!solution) return std::nullopt;
  std::vector<Rational> probs =
      renormalize_cell_probs(cells, instance, std::move(*solution));
  verify_probs(cells, instance, probs);
  return MciImproviser(std::move(cells), std::move(probs));
}

}  // namespace ci
