#ifndef CI_SCHEMES_HPP
#define CI_SCHEMES_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ci/cfg.hpp"
#include "ci/dfa.hpp"
#include "ci/improviser.hpp"
#include "ci/symbolic.hpp"

namespace ci {

enum class SpecKind { Dfa, Nfa, Ucfg, Symbolic };

const char* spec_kind_name(SpecKind kind);

/// A loaded specification of any supported kind. Symbolic payloads are
/// either a fixed-length CNF spec or an automaton to be unrolled.
struct SpecHandle {
  std::variant<Dfa, Nfa, Cfg, SymbolicSpec, SymbolicAutomaton> payload;

  SpecKind kind() const;
};

struct CiInstance {
  SpecHandle hard;
  SpecHandle soft;
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  Params params;  // epsilon, lambda, rho

  /// Throws MalformedInput on violated invariants (m > n, out-of-range
  /// parameters, lambda > rho).
  void validate() const;
};

// Scheme-specific instantiations of the five abstract operations.

/// DFA x DFA: length-restricted products counted and sampled on the
/// pruned path DAG.
std::shared_ptr<SpecOperations> make_dfa_dfa_ops(const Dfa& hard,
                                                 const Dfa& soft,
                                                 std::uint32_t m,
                                                 std::uint32_t n);

/// UCFG hard x DFA soft: A and I \ A as Bar-Hillel grammars against the
/// soft DFA and its complement; length restriction is implicit in the
/// per-length counting.
std::shared_ptr<SpecOperations> make_ucfg_dfa_ops(const Cfg& hard,
                                                  const Dfa& soft,
                                                  std::uint32_t m,
                                                  std::uint32_t n);

/// DFA hard x UCFG soft: A as a Bar-Hillel grammar against the
/// length-restricted hard DFA; I \ A sampled by the prefix walk.
std::shared_ptr<SpecOperations> make_dfa_ucfg_ops(const Dfa& hard,
                                                  const Cfg& soft,
                                                  std::uint32_t m,
                                                  std::uint32_t n);

struct SchemeResult {
  BuildResult result;
  FeasibilityReport report;            // counts and epsilon_opt, both branches
  std::string scheme;                  // e.g. "dfa-dfa"
  std::vector<std::string> warnings;   // e.g. NFA determinization notes
};

/// Dispatches on the (hard, soft) kind pair and runs the generic
/// construction. NFAs are determinized with a warning; UCFG x UCFG and
/// symbolic instances are rejected here (UnsupportedCombination) — the
/// symbolic path needs a tau and lives in the symbolic module.
SchemeResult build_for(const CiInstance& instance);

}  // namespace ci

#endif
