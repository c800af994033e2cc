#include "ci/sat.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ci/error.hpp"

namespace ci {

namespace {

// Recursive DPLL with unit propagation. Values: 0 unset, 1 true, -1 false.
class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : cnf_(cnf), value_(cnf.num_vars + 1, 0) {}

  std::optional<Assignment> run() {
    if (!search()) return std::nullopt;
    Assignment out(cnf_.num_vars + 1, false);
    for (int v = 1; v <= cnf_.num_vars; ++v) out[v] = value_[v] > 0;
    return out;
  }

 private:
  int lit_value(Lit l) const {
    int v = value_[std::abs(l)];
    return l > 0 ? v : -v;
  }

  // Returns false on conflict; appends assigned vars to trail.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Clause& c : cnf_.clauses) {
        int unassigned = 0;
        Lit unit = 0;
        bool satisfied = false;
        for (Lit l : c) {
          int v = lit_value(l);
          if (v > 0) {
            satisfied = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            unit = l;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          value_[std::abs(unit)] = unit > 0 ? 1 : -1;
          trail.push_back(std::abs(unit));
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) value_[v] = 0;
      return false;
    }
    int branch = 0;
    for (int v = 1; v <= cnf_.num_vars; ++v)
      if (value_[v] == 0) {
        branch = v;
        break;
      }
    if (branch == 0) return true;
    for (int sign : {1, -1}) {
      value_[branch] = sign;
      if (search()) return true;
      value_[branch] = 0;
    }
    for (int v : trail) value_[v] = 0;
    return false;
  }

  const Cnf& cnf_;
  std::vector<int> value_;
};

class BuiltinSolver : public SatOracle {
 public:
  std::optional<Assignment> solve(const Cnf& cnf) override {
    return Dpll(cnf).run();
  }
};

class ExternalSolver : public SatOracle {
 public:
  explicit ExternalSolver(std::string path) : path_(std::move(path)) {}

  std::optional<Assignment> solve(const Cnf& cnf) override {
    std::string in = temp_name("in");
    std::string out = temp_name("out");
    {
      std::ofstream f(in);
      f << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
      for (const Clause& c : cnf.clauses) {
        for (Lit l : c) f << l << ' ';
        f << "0\n";
      }
    }
    std::string cmd = path_ + " " + in + " > " + out + " 2>/dev/null";
    // Exit codes are solver-specific (10/20 for SAT/UNSAT is common);
    // the answer is taken from the output instead.
    int rc = std::system(cmd.c_str());
    (void)rc;
    std::optional<Assignment> result = parse_output(out, cnf.num_vars);
    std::remove(in.c_str());
    std::remove(out.c_str());
    return result;
  }

 private:
  static std::string temp_name(const char* tag) {
    static int counter = 0;
    std::ostringstream s;
    const char* dir = std::getenv("TMPDIR");
    s << (dir ? dir : "/tmp") << "/ci_sat_" << getpid() << '_' << tag << '_'
      << counter++ << ".cnf";
    return s.str();
  }

  static std::optional<Assignment> parse_output(const std::string& path,
                                                int num_vars) {
    std::ifstream f(path);
    if (!f)
      throw Error(ErrorCode::Internal, "external solver produced no output");
    std::string line;
    bool sat = false;
    bool answered = false;
    Assignment out(num_vars + 1, false);
    while (std::getline(f, line)) {
      if (line.rfind("s ", 0) == 0) {
        answered = true;
        sat = line.find("UNSATISFIABLE") == std::string::npos &&
              line.find("SATISFIABLE") != std::string::npos;
      } else if (line.rfind("v ", 0) == 0) {
        std::istringstream vs(line.substr(2));
        Lit l = 0;
        while (vs >> l) {
          int v = std::abs(l);
          if (v >= 1 && v <= num_vars) out[v] = l > 0;
        }
      }
    }
    if (!answered)
      throw Error(ErrorCode::Internal, "external solver gave no s-line");
    if (!sat) return std::nullopt;
    return out;
  }

  std::string path_;
};

}  // namespace

std::unique_ptr<SatOracle> make_builtin_solver() {
  return std::make_unique<BuiltinSolver>();
}

std::unique_ptr<SatOracle> make_external_solver(const std::string& path) {
  return std::make_unique<ExternalSolver>(path);
}

std::unique_ptr<SatOracle> make_default_solver() {
  const char* path = std::getenv("CI_SAT_SOLVER");
  if (path && *path) return make_external_solver(path);
  return make_builtin_solver();
}

void add_xor_constraint(Cnf& cnf, const std::vector<Lit>& lits, bool parity) {
  // xor() == parity over an empty set: parity must be false.
  if (lits.empty()) {
    if (parity) cnf.clauses.push_back({});
    return;
  }

  // Chunk into xors of width <= 4, chaining through fresh variables:
  // xor(l1..l4) = t, then fold t into the remainder.
  std::vector<Lit> pending = lits;
  while (pending.size() > 4) {
    std::vector<Lit> chunk(pending.end() - 4, pending.end());
    pending.resize(pending.size() - 4);
    int t = cnf.fresh_var();
    // Clauses for t <-> xor(chunk): every sign pattern with an odd
    // number of positive chunk literals together with -t, and even
    // patterns with +t... encoded directly as: for each of the 16 sign
    // patterns, the clause forbidding the wrong t value.
    for (unsigned pat = 0; pat < 16; ++pat) {
      Clause c;
      bool odd = false;
      for (unsigned i = 0; i < 4; ++i) {
        bool flip = (pat >> i) & 1;
        c.push_back(flip ? chunk[i] : -chunk[i]);
        if (!flip) odd = !odd;  // literal true in forbidden assignment
      }
      // Forbidden assignments set each chunk literal to the negation of
      // its clause literal, so xor value is `odd`; force t to match.
      c.push_back(odd ? t : -t);
      cnf.clauses.push_back(std::move(c));
    }
    pending.push_back(t);
  }

  // Terminal constraint: xor(pending) == parity, pending size <= 4.
  unsigned k = static_cast<unsigned>(pending.size());
  for (unsigned pat = 0; pat < (1u << k); ++pat) {
    bool odd = false;
    Clause c;
    for (unsigned i = 0; i < k; ++i) {
      bool flip = (pat >> i) & 1;
      c.push_back(flip ? pending[i] : -pending[i]);
      if (!flip) odd = !odd;
    }
    if (odd != parity) cnf.clauses.push_back(std::move(c));
  }
}

}  // namespace ci
