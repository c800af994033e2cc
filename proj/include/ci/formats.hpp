#ifndef CI_FORMATS_HPP
#define CI_FORMATS_HPP

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ci/cfg.hpp"
#include "ci/dfa.hpp"
#include "ci/schemes.hpp"
#include "ci/symbolic.hpp"

namespace ci {

// Line-based text formats. '#' starts a comment (';c' lines in CNF
// files). The reserved token <eps> never appears in alphabets. Parsers
// report errors with line numbers; printers round-trip exactly.

Dfa parse_dfa(std::istream& in);
std::string format_dfa(const Dfa& d);

Nfa parse_nfa(std::istream& in);
std::string format_nfa(const Nfa& n);

Cfg parse_cfg(std::istream& in);
std::string format_cfg(const Cfg& g);

/// DIMACS-style CNF with 'c k <bits>', 'c n <length>' headers and
/// 'c ind v1 v2 ... 0' projection lines in word order.
SymbolicSpec parse_symbolic_spec(std::istream& in);
std::string format_symbolic_spec(const SymbolicSpec& s);

/// Clause sections [init], [acc], [delta] with 'm: <bits>' and
/// 'k: <bits>' headers.
SymbolicAutomaton parse_symbolic_automaton(std::istream& in);
std::string format_symbolic_automaton(const SymbolicAutomaton& a);

/// Kind inferred from extension: .dfa .nfa .cfg .cnf .saut
SpecHandle load_spec(const std::filesystem::path& path);

/// Key-value instance file; soft = / epsilon = for single-constraint
/// instances, soft.i = / epsilon.i = (1-based, contiguous) for MCI.
/// Spec paths are resolved relative to the instance file.
struct InstanceFile {
  std::filesystem::path hard_path;
  std::vector<std::filesystem::path> soft_paths;
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::vector<Rational> epsilons;
  Rational lambda;
  Rational rho;
  bool multi = false;  // used the soft.i form
};

InstanceFile parse_instance_file(const std::filesystem::path& path);

}  // namespace ci

#endif
