#include "ci/formats.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ci/error.hpp"

namespace ci {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::MalformedInput,
              "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream s(line);
  std::string tok;
  while (s >> tok) out.push_back(tok);
  return out;
}

// Strips '#' comments and surrounding whitespace; empty result means
// the line is skippable.
std::string strip(const std::string& raw) {
  std::string line = raw;
  std::size_t hash = line.find('#');
  if (hash != std::string::npos) line.resize(hash);
  std::size_t a = line.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = line.find_last_not_of(" \t\r");
  return line.substr(a, b - a + 1);
}

std::uint32_t parse_u32(const std::string& tok, int line) {
  std::uint32_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(line, "expected a nonnegative integer, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(line, "expected an integer, got '" + tok + "'");
  return v;
}

Alphabet parse_alphabet(const std::vector<std::string>& tokens, int line) {
  Alphabet a;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i] == "<eps>") fail(line, "<eps> is reserved");
    if (a.find(tokens[i]) >= 0) fail(line, "duplicate symbol " + tokens[i]);
    a.tokens.push_back(tokens[i]);
  }
  if (a.tokens.empty()) fail(line, "alphabet must be nonempty");
  return a;
}

// Header + transition structure shared by the DFA and NFA readers.
struct AutomatonLines {
  Alphabet alphabet;
  std::uint32_t states = 0;
  std::vector<std::uint32_t> initials;
  std::vector<std::uint32_t> accepting;
  // (from, symbol, to)
  std::vector<std::array<std::uint32_t, 3>> transitions;
};

AutomatonLines read_automaton(std::istream& in) {
  AutomatonLines out;
  bool saw_alphabet = false, saw_states = false, saw_initial = false,
       saw_accepting = false;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::vector<std::string> t = tokenize(line);
    if (t[0] == "alphabet:") {
      out.alphabet = parse_alphabet(t, lineno);
      saw_alphabet = true;
    } else if (t[0] == "states:") {
      if (t.size() != 2) fail(lineno, "states: wants one count");
      out.states = parse_u32(t[1], lineno);
      saw_states = true;
    } else if (t[0] == "initial:") {
      for (std::size_t i = 1; i < t.size(); ++i)
        out.initials.push_back(parse_u32(t[i], lineno));
      saw_initial = true;
    } else if (t[0] == "accepting:") {
      for (std::size_t i = 1; i < t.size(); ++i)
        out.accepting.push_back(parse_u32(t[i], lineno));
      saw_accepting = true;
    } else {
      if (t.size() != 3) fail(lineno, "transition wants 'from symbol to'");
      if (!saw_alphabet || !saw_states)
        fail(lineno, "alphabet: and states: must precede transitions");
      std::uint32_t from = parse_u32(t[0], lineno);
      int sym = out.alphabet.find(t[1]);
      if (sym < 0) fail(lineno, "unknown symbol " + t[1]);
      std::uint32_t to = parse_u32(t[2], lineno);
      if (from >= out.states || to >= out.states)
        fail(lineno, "state index out of range");
      out.transitions.push_back(
          {from, static_cast<std::uint32_t>(sym), to});
    }
  }
  if (!saw_alphabet || !saw_states || !saw_initial || !saw_accepting)
    fail(lineno, "missing alphabet:/states:/initial:/accepting: header");
  if (out.states == 0) fail(lineno, "need at least one state");
  for (std::uint32_t q : out.initials)
    if (q >= out.states) fail(lineno, "initial state out of range");
  for (std::uint32_t q : out.accepting)
    if (q >= out.states) fail(lineno, "accepting state out of range");
  return out;
}

}  // namespace

Dfa parse_dfa(std::istream& in) {
  AutomatonLines lines = read_automaton(in);
  if (lines.initials.size() != 1)
    throw Error(ErrorCode::MalformedInput, "a DFA wants exactly one initial");

  Dfa d;
  d.alphabet = lines.alphabet;
  d.state_count = lines.states;
  d.initial = lines.initials[0];
  d.accepting.assign(d.state_count, false);
  for (std::uint32_t q : lines.accepting) d.accepting[q] = true;

  std::uint32_t missing = UINT32_MAX;
  d.delta.assign(std::size_t(d.state_count) * d.alphabet.size(), missing);
  for (const auto& [from, sym, to] : lines.transitions) {
    std::uint32_t& slot = d.delta[std::size_t(from) * d.alphabet.size() + sym];
    if (slot != missing)
      throw Error(ErrorCode::MalformedInput, "duplicate DFA transition");
    slot = to;
  }

  // Complete via a dead sink when any transition is absent.
  bool incomplete = false;
  for (std::uint32_t v : d.delta)
    if (v == missing) incomplete = true;
  if (incomplete) {
    std::uint32_t sink = d.state_count++;
    d.accepting.push_back(false);
    for (std::uint32_t& v : d.delta)
      if (v == missing) v = sink;
    for (std::size_t s = 0; s < d.alphabet.size(); ++s) d.delta.push_back(sink);
  }
  return d;
}

std::string format_dfa(const Dfa& d) {
  std::ostringstream out;
  out << "alphabet:";
  for (const std::string& t : d.alphabet.tokens) out << ' ' << t;
  out << "\nstates: " << d.state_count;
  out << "\ninitial: " << d.initial;
  out << "\naccepting:";
  for (std::uint32_t q = 0; q < d.state_count; ++q)
    if (d.accepting[q]) out << ' ' << q;
  out << '\n';
  for (std::uint32_t q = 0; q < d.state_count; ++q)
    for (std::size_t s = 0; s < d.alphabet.size(); ++s)
      out << q << ' ' << d.alphabet.tokens[s] << ' ' << d.step(q, s) << '\n';
  return out.str();
}

Nfa parse_nfa(std::istream& in) {
  AutomatonLines lines = read_automaton(in);
  if (lines.initials.empty())
    throw Error(ErrorCode::MalformedInput, "an NFA wants an initial state");

  Nfa n;
  n.alphabet = lines.alphabet;
  n.state_count = lines.states;
  n.initials.insert(lines.initials.begin(), lines.initials.end());
  n.accepting.assign(n.state_count, false);
  for (std::uint32_t q : lines.accepting) n.accepting[q] = true;
  n.delta.assign(std::size_t(n.state_count) * n.alphabet.size(), {});
  for (const auto& [from, sym, to] : lines.transitions) {
    auto& succ = n.delta[std::size_t(from) * n.alphabet.size() + sym];
    succ.push_back(to);
  }
  for (auto& succ : n.delta) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }
  return n;
}

std::string format_nfa(const Nfa& n) {
  std::ostringstream out;
  out << "alphabet:";
  for (const std::string& t : n.alphabet.tokens) out << ' ' << t;
  out << "\nstates: " << n.state_count;
  out << "\ninitial:";
  for (std::uint32_t q : n.initials) out << ' ' << q;
  out << "\naccepting:";
  for (std::uint32_t q = 0; q < n.state_count; ++q)
    if (n.accepting[q]) out << ' ' << q;
  out << '\n';
  for (std::uint32_t q = 0; q < n.state_count; ++q)
    for (std::size_t s = 0; s < n.alphabet.size(); ++s)
      for (std::uint32_t to : n.delta[std::size_t(q) * n.alphabet.size() + s])
        out << q << ' ' << n.alphabet.tokens[s] << ' ' << to << '\n';
  return out.str();
}

Cfg parse_cfg(std::istream& in) {
  Cfg g;
  bool saw_terminals = false, saw_start = false;
  std::string start_name;
  std::vector<std::string> declared;
  // (lhs name, rhs tokens, line)
  std::vector<std::pair<std::vector<std::string>, int>> rules;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::vector<std::string> t = tokenize(line);
    if (t[0] == "terminals:") {
      g.terminals = parse_alphabet(t, lineno);
      saw_terminals = true;
    } else if (t[0] == "nonterminals:") {
      declared.assign(t.begin() + 1, t.end());
    } else if (t[0] == "start:") {
      if (t.size() != 2) fail(lineno, "start: wants one nonterminal");
      start_name = t[1];
      saw_start = true;
    } else if (t[0] == "unambiguous:") {
      if (t.size() != 2 || (t[1] != "true" && t[1] != "false"))
        fail(lineno, "unambiguous: wants true or false");
      g.unambiguous_promise = t[1] == "true";
    } else {
      if (t.size() < 2 || t[1] != "->")
        fail(lineno, "production wants 'Lhs -> symbols...'");
      rules.emplace_back(std::move(t), lineno);
    }
  }
  if (!saw_terminals || !saw_start)
    fail(lineno, "missing terminals: or start: header");

  auto nt_id = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < g.nonterminals.size(); ++i)
      if (g.nonterminals[i] == name) return static_cast<int>(i);
    return -1;
  };
  for (const std::string& name : declared) {
    if (g.terminals.find(name) >= 0 || nt_id(name) >= 0)
      throw Error(ErrorCode::MalformedInput,
                  "nonterminal " + name + " clashes");
    g.nonterminals.push_back(name);
  }
  // Left-hand sides introduce nonterminals in file order.
  for (const auto& [t, line] : rules) {
    if (g.terminals.find(t[0]) >= 0)
      fail(line, t[0] + " is both a terminal and a production head");
    if (nt_id(t[0]) < 0) g.nonterminals.push_back(t[0]);
  }
  int start_id = nt_id(start_name);
  if (start_id < 0)
    throw Error(ErrorCode::MalformedInput,
                "start symbol " + start_name + " has no production");
  g.start = static_cast<std::uint32_t>(start_id);

  for (const auto& [t, line] : rules) {
    Production p;
    p.lhs = static_cast<std::uint32_t>(nt_id(t[0]));
    for (std::size_t i = 2; i < t.size(); ++i) {
      if (t[i] == "<eps>") {
        if (t.size() != 3) fail(line, "<eps> must be the whole right side");
        break;
      }
      int term = g.terminals.find(t[i]);
      if (term >= 0) {
        p.rhs.push_back({true, static_cast<std::uint32_t>(term)});
        continue;
      }
      int nt = nt_id(t[i]);
      if (nt < 0) fail(line, "unknown symbol " + t[i]);
      p.rhs.push_back({false, static_cast<std::uint32_t>(nt)});
    }
    g.productions.push_back(std::move(p));
  }
  return g;
}

std::string format_cfg(const Cfg& g) {
  std::ostringstream out;
  out << "terminals:";
  for (const std::string& t : g.terminals.tokens) out << ' ' << t;
  out << "\nnonterminals:";
  for (const std::string& t : g.nonterminals) out << ' ' << t;
  out << "\nstart: " << g.nonterminals[g.start];
  out << "\nunambiguous: " << (g.unambiguous_promise ? "true" : "false")
      << '\n';
  for (const Production& p : g.productions) {
    out << g.nonterminals[p.lhs] << " ->";
    if (p.rhs.empty()) out << " <eps>";
    for (const Sym& s : p.rhs)
      out << ' '
          << (s.is_terminal ? g.terminals.tokens[s.id] : g.nonterminals[s.id]);
    out << '\n';
  }
  return out.str();
}

SymbolicSpec parse_symbolic_spec(std::istream& in) {
  SymbolicSpec s;
  bool saw_k = false, saw_n = false, saw_p = false;
  std::size_t expected_clauses = 0;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::vector<std::string> t = tokenize(raw);
    if (t.empty()) continue;
    if (t[0] == "c") {
      if (t.size() >= 3 && t[1] == "k") {
        s.bits_per_symbol = parse_u32(t[2], lineno);
        saw_k = true;
      } else if (t.size() >= 3 && t[1] == "n") {
        s.length = parse_u32(t[2], lineno);
        saw_n = true;
      } else if (t.size() >= 2 && t[1] == "ind") {
        if (t.back() != "0") fail(lineno, "c ind line must end with 0");
        for (std::size_t i = 2; i + 1 < t.size(); ++i) {
          int v = parse_int(t[i], lineno);
          if (v < 1) fail(lineno, "projection variables are positive");
          s.projected.push_back(v);
        }
      }
      continue;
    }
    if (t[0] == "p") {
      if (t.size() != 4 || t[1] != "cnf") fail(lineno, "malformed p line");
      s.cnf.num_vars = static_cast<int>(parse_u32(t[2], lineno));
      expected_clauses = parse_u32(t[3], lineno);
      saw_p = true;
      continue;
    }
    if (!saw_p) fail(lineno, "clause before the p line");
    if (t.back() != "0") fail(lineno, "clause must end with 0");
    Clause c;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      int l = parse_int(t[i], lineno);
      if (l == 0 || std::abs(l) > s.cnf.num_vars)
        fail(lineno, "literal out of range");
      c.push_back(l);
    }
    s.cnf.clauses.push_back(std::move(c));
  }
  if (!saw_k || !saw_n || !saw_p)
    fail(lineno, "missing c k / c n / p cnf header");
  if (s.cnf.clauses.size() != expected_clauses)
    fail(lineno, "clause count disagrees with the p line");
  if (s.projected.size() !=
      std::size_t(s.length) * s.bits_per_symbol)
    fail(lineno, "projection size must be n*k");
  for (int v : s.projected)
    if (v > s.cnf.num_vars) fail(lineno, "projected variable out of range");
  return s;
}

std::string format_symbolic_spec(const SymbolicSpec& s) {
  std::ostringstream out;
  out << "c k " << s.bits_per_symbol << "\nc n " << s.length << "\nc ind";
  for (int v : s.projected) out << ' ' << v;
  out << " 0\np cnf " << s.cnf.num_vars << ' ' << s.cnf.clauses.size() << '\n';
  for (const Clause& c : s.cnf.clauses) {
    for (Lit l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

SymbolicAutomaton parse_symbolic_automaton(std::istream& in) {
  SymbolicAutomaton a;
  bool saw_m = false, saw_k = false;
  std::vector<Clause>* section = nullptr;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::vector<std::string> t = tokenize(line);
    if (t[0] == "m:") {
      if (t.size() != 2) fail(lineno, "m: wants one count");
      a.state_bits = parse_u32(t[1], lineno);
      saw_m = true;
    } else if (t[0] == "k:") {
      if (t.size() != 2) fail(lineno, "k: wants one count");
      a.input_bits = parse_u32(t[1], lineno);
      saw_k = true;
    } else if (t[0] == "[init]") {
      section = &a.init;
    } else if (t[0] == "[acc]") {
      section = &a.acc;
    } else if (t[0] == "[delta]") {
      section = &a.delta;
    } else {
      if (!section) fail(lineno, "clause outside any section");
      if (!saw_m || !saw_k) fail(lineno, "m: and k: must precede clauses");
      int width = static_cast<int>(
          section == &a.delta ? 2 * a.state_bits + a.input_bits
                              : a.state_bits);
      Clause c;
      for (const std::string& tok : t) {
        int l = parse_int(tok, lineno);
        if (l == 0 || std::abs(l) > width)
          fail(lineno, "template literal out of range");
        c.push_back(l);
      }
      section->push_back(std::move(c));
    }
  }
  if (!saw_m || !saw_k) fail(lineno, "missing m: or k: header");
  return a;
}

std::string format_symbolic_automaton(const SymbolicAutomaton& a) {
  std::ostringstream out;
  out << "m: " << a.state_bits << "\nk: " << a.input_bits << '\n';
  auto section = [&](const char* name, const std::vector<Clause>& clauses) {
    out << '[' << name << "]\n";
    for (const Clause& c : clauses) {
      for (std::size_t i = 0; i < c.size(); ++i)
        out << (i ? " " : "") << c[i];
      out << '\n';
    }
  };
  section("init", a.init);
  section("acc", a.acc);
  section("delta", a.delta);
  return out.str();
}

SpecHandle load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::MalformedInput,
                "cannot open spec file " + path.string());
  std::string ext = path.extension().string();
  try {
    if (ext == ".dfa") return SpecHandle{parse_dfa(in)};
    if (ext == ".nfa") return SpecHandle{parse_nfa(in)};
    if (ext == ".cfg") return SpecHandle{parse_cfg(in)};
    if (ext == ".cnf") return SpecHandle{parse_symbolic_spec(in)};
    if (ext == ".saut") return SpecHandle{parse_symbolic_automaton(in)};
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  throw Error(ErrorCode::MalformedInput,
              "unknown spec extension '" + ext + "' (" + path.string() + ")");
}

InstanceFile parse_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::MalformedInput,
                "cannot open instance file " + path.string());
  std::filesystem::path dir = path.parent_path();

  InstanceFile f;
  std::map<std::string, std::string> kv;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(raw);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(lineno, "empty key or value");
    if (!kv.emplace(key, value).second) fail(lineno, "duplicate key " + key);
  }

  auto take = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw Error(ErrorCode::MalformedInput,
                  path.string() + ": missing key " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto resolve = [&](const std::string& rel) {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : dir / p;
  };

  f.hard_path = resolve(take("hard"));
  f.m = parse_u32(take("m"), 0);
  f.n = parse_u32(take("n"), 0);
  f.lambda = parse_rational(take("lambda"));
  f.rho = parse_rational(take("rho"));

  if (kv.count("soft")) {
    f.soft_paths.push_back(resolve(take("soft")));
    f.epsilons.push_back(parse_rational(take("epsilon")));
  } else {
    f.multi = true;
    for (std::uint32_t i = 1;; ++i) {
      std::string sk = "soft." + std::to_string(i);
      if (!kv.count(sk)) break;
      f.soft_paths.push_back(resolve(take(sk)));
      f.epsilons.push_back(
          parse_rational(take("epsilon." + std::to_string(i))));
    }
    if (f.soft_paths.empty())
      throw Error(ErrorCode::MalformedInput,
                  path.string() + ": no soft spec given");
  }
  if (!kv.empty())
    throw Error(ErrorCode::MalformedInput,
                path.string() + ": unknown key " + kv.begin()->first);
  return f;
}

}  // namespace ci
