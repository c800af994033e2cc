#ifndef CI_SAT_HPP
#define CI_SAT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ci {

/// Literal: +v / -v for variable v >= 1.
using Lit = int;
using Clause = std::vector<Lit>;

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;

  int fresh_var() { return ++num_vars; }
};

/// Assignment indexed by variable (entry 0 unused).
using Assignment = std::vector<bool>;

/// Sound and complete solver interface at the instance sizes used.
class SatOracle {
 public:
  virtual ~SatOracle() = default;
  /// Satisfying assignment, or nullopt for UNSAT.
  virtual std::optional<Assignment> solve(const Cnf& cnf) = 0;
};

/// Built-in DPLL solver (unit propagation + chronological backtracking).
std::unique_ptr<SatOracle> make_builtin_solver();

/// External solver process speaking the standard CNF text protocol
/// ("s SATISFIABLE" / "v ..." output lines).
std::unique_ptr<SatOracle> make_external_solver(const std::string& path);

/// Built-in solver, or the external one when CI_SAT_SOLVER is set.
std::unique_ptr<SatOracle> make_default_solver();

/// Appends clauses asserting xor(lits) == parity. Long constraints are
/// chunked (width 4) with fresh auxiliary variables.
void add_xor_constraint(Cnf& cnf, const std::vector<Lit>& lits, bool parity);

}  // namespace ci

#endif
