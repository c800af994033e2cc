#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "ci/error.hpp"
#include "ci/formats.hpp"
#include "ci/mci.hpp"
#include "ci/schemes.hpp"
#include "ci/symbolic.hpp"
#include "json.hpp"

namespace {

using namespace ci;
using nlohmann::json;

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitError = 2;

// Desk-scale cap for exact symbolic counting; beyond it feasibility is
// reported as unknown rather than guessed.
constexpr std::uint64_t kSymbolicCountCap = 1u << 16;

struct CommonFlags {
  std::uint64_t seed = 0;
  std::uint64_t count = 1;
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  std::string tau;
  std::string format = "text";
  unsigned jobs = 1;
};

const char* inequality_name(Inequality i) {
  switch (i) {
    case Inequality::A: return "size";
    case Inequality::B: return "admissible-coverage";
    case Inequality::C: return "inadmissible-mass";
  }
  return "?";
}

// Renders count words drawn via fn(word_index, rng). Each word uses its
// own derived stream so output is independent of the job split; draws
// are serialized (samplers mutate shared caches) but rendering is not.
void emit_words(std::uint64_t seed, std::uint64_t count, unsigned jobs,
                const std::function<Word(Rng&)>& draw,
                const std::function<std::string(const Word&)>& render) {
  std::vector<std::string> lines(count);
  if (jobs <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) {
      Rng rng = Rng::derived(seed, i);
      lines[i] = render(draw(rng));
    }
  } else {
    std::mutex draw_mutex;
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      try {
        while (true) {
          std::uint64_t i = next.fetch_add(1);
          if (i >= count) return;
          Rng rng = Rng::derived(seed, i);
          Word w;
          {
            std::lock_guard<std::mutex> lock(draw_mutex);
            w = draw(rng);
          }
          lines[i] = render(w);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  for (const std::string& line : lines) std::cout << line << '\n';
}

std::string render_plain(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(w[i]);
  }
  if (out.empty()) out = "<eps>";
  return out;
}

bool is_symbolic(const SpecHandle& h) {
  return h.kind() == SpecKind::Symbolic;
}

// Fixed-length CNF view of a symbolic handle; automata are unrolled.
SymbolicSpec symbolic_at(const SpecHandle& h, std::uint32_t n) {
  if (const SymbolicAutomaton* a = std::get_if<SymbolicAutomaton>(&h.payload))
    return unroll(*a, n);
  const SymbolicSpec& s = std::get<SymbolicSpec>(h.payload);
  if (s.length != n)
    throw Error(ErrorCode::ShapeMismatch,
                "CNF spec has fixed length " + std::to_string(s.length));
  return s;
}

CiInstance load_single_instance(const std::string& path) {
  InstanceFile f = parse_instance_file(path);
  if (f.multi)
    throw Error(ErrorCode::MalformedInput,
                "multi-soft instance; use the mci command");
  CiInstance inst;
  inst.hard = load_spec(f.hard_path);
  inst.soft = load_spec(f.soft_paths[0]);
  inst.m = f.m;
  inst.n = f.n;
  inst.params = {f.epsilons[0], f.lambda, f.rho};
  inst.validate();
  return inst;
}

MciInstance load_mci_instance(const std::string& path,
                              std::vector<std::string>& warnings) {
  InstanceFile f = parse_instance_file(path);
  MciInstance inst;
  auto as_dfa = [&warnings](const SpecHandle& h, const std::string& role) {
    if (const Dfa* d = std::get_if<Dfa>(&h.payload)) return *d;
    if (const Nfa* n = std::get_if<Nfa>(&h.payload)) {
      warnings.push_back("determinized the " + role + " NFA");
      return determinize(*n);
    }
    throw Error(ErrorCode::UnsupportedCombination,
                role + " spec must be a DFA or NFA for mci");
  };
  inst.hard = as_dfa(load_spec(f.hard_path), "hard");
  for (std::size_t i = 0; i < f.soft_paths.size(); ++i)
    inst.softs.push_back(
        as_dfa(load_spec(f.soft_paths[i]), "soft." + std::to_string(i + 1)));
  inst.m = f.m;
  inst.n = f.n;
  inst.epsilons = f.epsilons;
  inst.lambda = f.lambda;
  inst.rho = f.rho;
  if (inst.m > inst.n) throw Error(ErrorCode::EmptyRange, "need m <= n");
  return inst;
}

struct CheckOutcome {
  std::string status;  // FEASIBLE / INFEASIBLE / FEASIBILITY-UNKNOWN
  json body;
  int exit_code = kExitFeasible;
};

void print_report(const CheckOutcome& outcome, const std::string& format) {
  if (format == "json") {
    json j = outcome.body;
    j["status"] = outcome.status;
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << outcome.status << '\n';
  for (auto it = outcome.body.begin(); it != outcome.body.end(); ++it) {
    if (it.value().is_array()) {
      std::cout << it.key() << ':';
      for (const auto& v : it.value())
        std::cout << ' ' << (v.is_string() ? v.get<std::string>() : v.dump());
      std::cout << '\n';
    } else if (it.value().is_string()) {
      std::cout << it.key() << ": " << it.value().get<std::string>() << '\n';
    } else {
      std::cout << it.key() << ": " << it.value().dump() << '\n';
    }
  }
}

CheckOutcome check_instance(const CiInstance& inst) {
  if (is_symbolic(inst.hard) || is_symbolic(inst.soft)) {
    if (!is_symbolic(inst.hard) || !is_symbolic(inst.soft))
      throw Error(ErrorCode::UnsupportedCombination,
                  "symbolic specs cannot mix with explicit ones");
    if (inst.m != inst.n)
      throw Error(ErrorCode::UnsupportedCombination,
                  "symbolic instances are fixed-length (m == n)");
    SymbolicSpec hard = symbolic_at(inst.hard, inst.n);
    SymbolicSpec soft = symbolic_at(inst.soft, inst.n);
    std::unique_ptr<SatOracle> oracle = make_default_solver();
    CheckOutcome out;
    out.body["scheme"] = "symbolic";
    try {
      BigInt size_i = projected_count_exact(hard, *oracle, kSymbolicCountCap);
      BigInt size_a =
          projected_count_exact(conjoin(hard, soft), *oracle,
                                kSymbolicCountCap);
      FeasibilityReport report =
          check_feasibility(size_i, size_a, inst.params.epsilon,
                            inst.params.lambda, inst.params.rho);
      out.body["size_i"] = size_i.str();
      out.body["size_a"] = size_a.str();
      if (report.epsilon_opt)
        out.body["epsilon_opt"] = format_rational(*report.epsilon_opt);
      if (report.feasible) {
        out.status = "FEASIBLE";
      } else {
        out.status = "INFEASIBLE";
        out.exit_code = kExitInfeasible;
        json v = json::array();
        for (Inequality i : report.violated) v.push_back(inequality_name(i));
        out.body["violated"] = v;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapExceeded) throw;
      out.status = "FEASIBILITY-UNKNOWN";
    }
    return out;
  }

  SchemeResult res = build_for(inst);
  CheckOutcome out;
  out.body["scheme"] = res.scheme;
  if (!res.warnings.empty()) out.body["warnings"] = res.warnings;

  const FeasibilityReport& report = res.report;
  out.body["size_i"] = report.size_i.str();
  out.body["size_a"] = report.size_a.str();
  if (report.epsilon_opt)
    out.body["epsilon_opt"] = format_rational(*report.epsilon_opt);
  if (report.feasible) {
    out.status = "FEASIBLE";
  } else {
    out.status = "INFEASIBLE";
    out.exit_code = kExitInfeasible;
    json v = json::array();
    for (Inequality i : report.violated) v.push_back(inequality_name(i));
    out.body["violated"] = v;
  }
  return out;
}

int cmd_check(const std::string& instance_path, const std::string& format) {
  CiInstance inst = load_single_instance(instance_path);
  CheckOutcome out = check_instance(inst);
  print_report(out, format);
  return out.exit_code;
}

int cmd_improvise(const std::string& instance_path, const CommonFlags& flags) {
  CiInstance inst = load_single_instance(instance_path);
  bool symbolic = is_symbolic(inst.hard) || is_symbolic(inst.soft);
  if (!symbolic && !flags.tau.empty())
    throw Error(ErrorCode::MalformedInput,
                "--tau applies only to symbolic instances");

  if (symbolic) {
    if (!is_symbolic(inst.hard) || !is_symbolic(inst.soft))
      throw Error(ErrorCode::UnsupportedCombination,
                  "symbolic specs cannot mix with explicit ones");
    if (flags.tau.empty())
      throw Error(ErrorCode::MalformedInput,
                  "symbolic instances need --tau");
    if (inst.m != inst.n)
      throw Error(ErrorCode::UnsupportedCombination,
                  "symbolic instances are fixed-length (m == n)");
    CheckOutcome feas = check_instance(inst);
    if (feas.exit_code != kExitFeasible) {
      print_report(feas, "text");
      return feas.exit_code;
    }
    SymbolicSpec hard = symbolic_at(inst.hard, inst.n);
    SymbolicSpec soft = symbolic_at(inst.soft, inst.n);
    std::unique_ptr<SatOracle> oracle = make_default_solver();
    SymbolicImproviser imp(hard, soft, inst.params.epsilon,
                           parse_rational(flags.tau), *oracle);
    emit_words(flags.seed, flags.count, flags.jobs,
               [&imp](Rng& rng) { return imp.draw(rng); }, render_plain);
    return kExitFeasible;
  }

  SchemeResult res = build_for(inst);
  if (std::holds_alternative<FeasibilityReport>(res.result)) {
    CheckOutcome out = check_instance(inst);
    print_report(out, "text");
    return kExitInfeasible;
  }
  const Improviser& imp = std::get<Improviser>(res.result);

  // Words print with the hard spec's symbol tokens when it has any.
  const Alphabet* alphabet = nullptr;
  if (const Dfa* d = std::get_if<Dfa>(&inst.hard.payload))
    alphabet = &d->alphabet;
  else if (const Nfa* n = std::get_if<Nfa>(&inst.hard.payload))
    alphabet = &n->alphabet;
  else if (const Cfg* g = std::get_if<Cfg>(&inst.hard.payload))
    alphabet = &g->terminals;
  auto render = [alphabet](const Word& w) {
    return alphabet ? alphabet->render(w) : render_plain(w);
  };
  emit_words(flags.seed, flags.count, flags.jobs,
             [&imp](Rng& rng) { return imp.draw(rng); }, render);
  return kExitFeasible;
}

int cmd_count(const std::string& spec_path, const CommonFlags& flags) {
  if (flags.min > flags.max)
    throw Error(ErrorCode::EmptyRange, "need --min <= --max");
  SpecHandle spec = load_spec(spec_path);
  BigInt total = 0;
  switch (spec.kind()) {
    case SpecKind::Dfa:
    case SpecKind::Nfa: {
      Dfa d = spec.kind() == SpecKind::Dfa
                  ? std::get<Dfa>(spec.payload)
                  : determinize(std::get<Nfa>(spec.payload));
      total = *count_language(length_restrict(d, flags.min, flags.max));
      break;
    }
    case SpecKind::Ucfg: {
      const Cfg& g = std::get<Cfg>(spec.payload);
      if (!g.unambiguous_promise)
        throw Error(ErrorCode::Unsupported,
                    "counting needs an unambiguous grammar");
      NormalizedCfg norm = normalize(g);
      CountTable table = count_by_length(norm, flags.max);
      ambiguity_tripwire(norm, table);
      total = table.total_in_range(flags.min, flags.max);
      break;
    }
    case SpecKind::Symbolic: {
      std::unique_ptr<SatOracle> oracle = make_default_solver();
      if (const SymbolicSpec* s = std::get_if<SymbolicSpec>(&spec.payload)) {
        if (s->length >= flags.min && s->length <= flags.max)
          total = projected_count_exact(*s, *oracle, kSymbolicCountCap);
      } else {
        const auto& a = std::get<SymbolicAutomaton>(spec.payload);
        for (std::uint32_t n = flags.min; n <= flags.max; ++n)
          total += projected_count_exact(unroll(a, n), *oracle,
                                         kSymbolicCountCap);
      }
      break;
    }
  }
  if (flags.format == "json") {
    json j;
    j["count"] = total.str();
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << total.str() << '\n';
  }
  return kExitFeasible;
}

int cmd_sample(const std::string& spec_path, const CommonFlags& flags) {
  if (flags.min > flags.max)
    throw Error(ErrorCode::EmptyRange, "need --min <= --max");
  SpecHandle spec = load_spec(spec_path);
  switch (spec.kind()) {
    case SpecKind::Dfa:
    case SpecKind::Nfa: {
      Dfa d = spec.kind() == SpecKind::Dfa
                  ? std::get<Dfa>(spec.payload)
                  : determinize(std::get<Nfa>(spec.payload));
      Dfa restricted = length_restrict(d, flags.min, flags.max);
      WalkSampler sampler(restricted);
      emit_words(flags.seed, flags.count, flags.jobs,
                 [&sampler](Rng& rng) { return sampler.draw(rng); },
                 [&d](const Word& w) { return d.alphabet.render(w); });
      return kExitFeasible;
    }
    case SpecKind::Ucfg: {
      const Cfg& g = std::get<Cfg>(spec.payload);
      if (!g.unambiguous_promise)
        throw Error(ErrorCode::Unsupported,
                    "sampling needs an unambiguous grammar");
      NormalizedCfg norm = normalize(g);
      CountTable table = count_by_length(norm, flags.max);
      ambiguity_tripwire(norm, table);
      if (table.total_in_range(flags.min, flags.max) == 0)
        throw Error(ErrorCode::EmptyRange, "no words in the length range");
      emit_words(flags.seed, flags.count, flags.jobs,
                 [&](Rng& rng) {
                   return sample_range(norm, table, flags.min, flags.max, rng);
                 },
                 [&g](const Word& w) { return g.terminals.render(w); });
      return kExitFeasible;
    }
    case SpecKind::Symbolic: {
      if (flags.tau.empty())
        throw Error(ErrorCode::MalformedInput, "symbolic sampling needs --tau");
      if (flags.min != flags.max)
        throw Error(ErrorCode::UnsupportedCombination,
                    "symbolic sampling is fixed-length (--min == --max)");
      SymbolicSpec s = symbolic_at(spec, flags.min);
      std::unique_ptr<SatOracle> oracle = make_default_solver();
      ApproxSampler sampler(std::move(s), parse_rational(flags.tau), *oracle);
      emit_words(flags.seed, flags.count, flags.jobs,
                 [&sampler](Rng& rng) { return sampler.draw(rng); },
                 render_plain);
      return kExitFeasible;
    }
  }
  throw Error(ErrorCode::Internal, "unhandled spec kind");
}

int cmd_mci_check(const std::string& instance_path, const std::string& format) {
  std::vector<std::string> warnings;
  MciInstance inst = load_mci_instance(instance_path, warnings);
  CellTable cells = cell_sizes(inst);
  std::optional<MciImproviser> imp = mci_improviser(inst);

  CheckOutcome out;
  out.body["scheme"] = "mci-dfa";
  if (!warnings.empty()) out.body["warnings"] = warnings;
  out.body["size_i"] = cells.size_i.str();
  json sizes = json::array();
  for (const Cell& c : cells.cells) sizes.push_back(c.size.str());
  out.body["cell_sizes"] = sizes;
  if (imp) {
    out.status = "FEASIBLE";
    json probs = json::array();
    for (const Rational& p : imp->cell_probabilities())
      probs.push_back(format_rational(p));
    out.body["cell_probabilities"] = probs;
  } else {
    out.status = "INFEASIBLE";
    out.exit_code = kExitInfeasible;
  }
  print_report(out, format);
  return out.exit_code;
}

int cmd_mci_improvise(const std::string& instance_path,
                      const CommonFlags& flags) {
  std::vector<std::string> warnings;
  MciInstance inst = load_mci_instance(instance_path, warnings);
  std::optional<MciImproviser> imp = mci_improviser(inst);
  if (!imp) {
    std::cout << "INFEASIBLE\n";
    return kExitInfeasible;
  }
  const Alphabet& alphabet = inst.hard.alphabet;
  emit_words(flags.seed, flags.count, flags.jobs,
             [&](Rng& rng) { return imp->draw(rng); },
             [&alphabet](const Word& w) { return alphabet.render(w); });
  return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"control-improvisation toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string instance_path;
  std::string spec_path;

  auto add_seeded = [&flags](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "RNG seed");
    cmd->add_option("--count", flags.count, "number of words");
    cmd->add_option("--jobs", flags.jobs, "worker threads");
  };

  CLI::App* check = app.add_subcommand("check", "decide feasibility");
  check->add_option("instance", instance_path, "instance file")->required();
  check->add_option("--format", flags.format, "text|json");

  CLI::App* improvise = app.add_subcommand("improvise", "generate words");
  improvise->add_option("instance", instance_path, "instance file")
      ->required();
  add_seeded(improvise);
  improvise->add_option("--tau", flags.tau,
                        "approximation factor (symbolic only)");

  CLI::App* count = app.add_subcommand("count", "count words in a spec");
  count->add_option("spec", spec_path, "spec file")->required();
  count->add_option("--min", flags.min, "minimum length")->required();
  count->add_option("--max", flags.max, "maximum length")->required();
  count->add_option("--format", flags.format, "text|json");

  CLI::App* sample = app.add_subcommand("sample", "sample words from a spec");
  sample->add_option("spec", spec_path, "spec file")->required();
  sample->add_option("--min", flags.min, "minimum length")->required();
  sample->add_option("--max", flags.max, "maximum length")->required();
  add_seeded(sample);
  sample->add_option("--tau", flags.tau,
                     "approximation factor (symbolic only)");

  CLI::App* mci = app.add_subcommand("mci", "multi-constraint instances");
  mci->require_subcommand(1);
  CLI::App* mci_check = mci->add_subcommand("check", "decide feasibility");
  mci_check->add_option("instance", instance_path, "instance file")
      ->required();
  mci_check->add_option("--format", flags.format, "text|json");
  CLI::App* mci_improvise =
      mci->add_subcommand("improvise", "generate words");
  mci_improvise->add_option("instance", instance_path, "instance file")
      ->required();
  add_seeded(mci_improvise);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints usage/help
    return e.get_name() == "CallForHelp" ? kExitFeasible : kExitError;
  }

  try {
    if (flags.format != "text" && flags.format != "json")
      throw Error(ErrorCode::MalformedInput, "--format wants text or json");
    if (flags.jobs == 0) flags.jobs = 1;
    if (*check) return cmd_check(instance_path, flags.format);
    if (*improvise) return cmd_improvise(instance_path, flags);
    if (*count) return cmd_count(spec_path, flags);
    if (*sample) return cmd_sample(spec_path, flags);
    if (*mci_check) return cmd_mci_check(instance_path, flags.format);
    if (*mci_improvise) return cmd_mci_improvise(instance_path, flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
