#ifndef CI_MCI_HPP
#define CI_MCI_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ci/dfa.hpp"
#include "ci/improviser.hpp"
#include "ci/rational.hpp"
#include "ci/simplex.hpp"

namespace ci {

/// Multi-constraint instance over DFA specifications (NFAs must be
/// determinized by the caller).
struct MciInstance {
  Dfa hard;
  std::vector<Dfa> softs;
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::vector<Rational> epsilons;  // one per soft spec
  Rational lambda;
  Rational rho;
};

/// One admissibility cell A'_M: the improvisations admissible for
/// exactly the soft constraints in the mask M. Cells partition I.
struct Cell {
  std::uint32_t mask = 0;
  BigInt size;
  std::shared_ptr<WalkSampler> sampler;  // absent when the cell is empty
};

struct CellTable {
  std::vector<Cell> cells;  // indexed by mask, 0 .. 2^k - 1
  BigInt size_i;            // sum of cell sizes
};

/// Builds every cell as a product of the length-restricted hard spec
/// with each soft spec or its complement, then counts it. Throws
/// CapExceeded when k exceeds the cap.
CellTable cell_sizes(const MciInstance& instance, std::uint32_t k_cap = 12);

/// The cell LP: variables p_M >= 0, sum p_M <= 1, sum_{M ni i} p_M >=
/// 1 - eps_i, and lambda|A'_M| <= p_M <= rho|A'_M|. Empty cells are
/// eliminated (p_M fixed to 0) before solving.
RationalLp build_cell_lp(const CellTable& cells, const MciInstance& instance);

/// Cell-mixture improviser: picks cell M with probability p_M, then
/// uniformly within A'_M. Exposes the exact cell probabilities so the
/// induced word distribution can be verified symbolically.
class MciImproviser {
 public:
  MciImproviser(CellTable cells, std::vector<Rational> cell_probs);

  Word draw(Rng& rng) const;

  const std::vector<Rational>& cell_probabilities() const { return probs_; }
  const CellTable& cells() const { return cells_; }

 private:
  CellTable cells_;
  std::vector<Rational> probs_;
  BigInt common_den_;
  std::vector<BigInt> cumulative_;  // scaled by common_den_
};

/// Solves the cell LP, renormalizes the solution to total mass 1 by
/// raising probabilities toward their rho|A'_M| caps (deterministic
/// cell order), verifies every constraint exactly, and assembles the
/// improviser. nullopt when infeasible.
std::optional<MciImproviser> mci_improviser(const MciInstance& instance);

/// Renormalization step, exposed for tests.
std::vector<Rational> renormalize_cell_probs(const CellTable& cells,
                                             const MciInstance& instance,
                                             std::vector<Rational> probs);

}  // namespace ci

#endif
