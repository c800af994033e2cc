#include "ci/schemes.hpp"

#include <optional>

#include "ci/error.hpp"

namespace ci {

const char* spec_kind_name(SpecKind kind) {
  switch (kind) {
    case SpecKind::Dfa: return "dfa";
    case SpecKind::Nfa: return "nfa";
    case SpecKind::Ucfg: return "ucfg";
    case SpecKind::Symbolic: return "symbolic";
  }
  return "?";
}

SpecKind SpecHandle::kind() const {
  if (std::holds_alternative<Dfa>(payload)) return SpecKind::Dfa;
  if (std::holds_alternative<Nfa>(payload)) return SpecKind::Nfa;
  if (std::holds_alternative<Cfg>(payload)) return SpecKind::Ucfg;
  return SpecKind::Symbolic;
}

void CiInstance::validate() const {
  if (m > n) throw Error(ErrorCode::EmptyRange, "need m <= n");
  const Params& p = params;
  if (p.epsilon < 0 || p.epsilon > 1 || p.lambda < 0 || p.lambda > 1 ||
      p.rho < 0 || p.rho > 1)
    throw Error(ErrorCode::MalformedInput, "parameters must lie in [0,1]");
  if (p.lambda > p.rho)
    throw Error(ErrorCode::MalformedInput, "need lambda <= rho");
}

namespace {

// Shared pattern: counts are eager (cheap, needed by the feasibility
// check anyway); sampling structures are built on first use so empty
// sets only fault when actually sampled from.

class DfaDfaOps : public SpecOperations {
 public:
  DfaDfaOps(const Dfa& hard, const Dfa& soft, std::uint32_t m, std::uint32_t n)
      : i_dfa_(length_restrict(hard, m, n)),
        a_dfa_(product(i_dfa_, soft, ProductMode::And)),
        b_dfa_(product(i_dfa_, soft, ProductMode::Diff)) {}

  BigInt count_improvisations() override {
    return *count_language(i_dfa_);  // finite by length restriction
  }
  BigInt count_admissible() override { return *count_language(a_dfa_); }

  Word sample_admissible(Rng& rng) override {
    if (!a_sampler_) a_sampler_.emplace(a_dfa_);
    return a_sampler_->draw(rng);
  }
  Word sample_inadmissible(Rng& rng) override {
    if (!b_sampler_) b_sampler_.emplace(b_dfa_);
    return b_sampler_->draw(rng);
  }

 private:
  Dfa i_dfa_;
  Dfa a_dfa_;
  Dfa b_dfa_;
  std::optional<WalkSampler> a_sampler_;
  std::optional<WalkSampler> b_sampler_;
};

class UcfgDfaOps : public SpecOperations {
 public:
  UcfgDfaOps(const Cfg& hard, const Dfa& soft, std::uint32_t m, std::uint32_t n)
      : m_(m), n_(n) {
    if (!hard.unambiguous_promise)
      throw Error(ErrorCode::AmbiguityDetected,
                  "grammar is not promised unambiguous");
    NormalizedCfg g = normalize(hard);
    i_table_ = count_by_length(g, n);
    ambiguity_tripwire(g, i_table_);
    a_gram_ = bar_hillel(g, soft);
    a_table_ = count_by_length(a_gram_, n);
    ambiguity_tripwire(a_gram_, a_table_);
    b_gram_ = bar_hillel(g, complement(soft));
    b_table_ = count_by_length(b_gram_, n);
    ambiguity_tripwire(b_gram_, b_table_);
  }

  BigInt count_improvisations() override {
    return i_table_.total_in_range(m_, n_);
  }
  BigInt count_admissible() override { return a_table_.total_in_range(m_, n_); }

  Word sample_admissible(Rng& rng) override {
    return sample_range(a_gram_, a_table_, m_, n_, rng);
  }
  Word sample_inadmissible(Rng& rng) override {
    return sample_range(b_gram_, b_table_, m_, n_, rng);
  }

 private:
  std::uint32_t m_;
  std::uint32_t n_;
  CountTable i_table_;
  NormalizedCfg a_gram_;
  CountTable a_table_;
  NormalizedCfg b_gram_;
  CountTable b_table_;
};

class DfaUcfgOps : public SpecOperations {
 public:
  DfaUcfgOps(const Dfa& hard, const Cfg& soft, std::uint32_t m, std::uint32_t n)
      : n_(n), i_dfa_(length_restrict(hard, m, n)) {
    if (!soft.unambiguous_promise)
      throw Error(ErrorCode::AmbiguityDetected,
                  "grammar is not promised unambiguous");
    s_gram_ = normalize(soft);
    a_gram_ = bar_hillel(s_gram_, i_dfa_);
    a_table_ = count_by_length(a_gram_, n);
    ambiguity_tripwire(a_gram_, a_table_);
  }

  BigInt count_improvisations() override { return *count_language(i_dfa_); }
  BigInt count_admissible() override { return a_table_.total_in_range(0, n_); }

  Word sample_admissible(Rng& rng) override {
    return sample_range(a_gram_, a_table_, 0, n_, rng);
  }
  Word sample_inadmissible(Rng& rng) override {
    if (!walk_) walk_.emplace(i_dfa_, s_gram_, n_);
    return walk_->draw(rng);
  }

 private:
  std::uint32_t n_;
  Dfa i_dfa_;
  NormalizedCfg s_gram_;
  NormalizedCfg a_gram_;
  CountTable a_table_;
  std::optional<PrefixWalkSampler> walk_;
};

}  // namespace

std::shared_ptr<SpecOperations> make_dfa_dfa_ops(const Dfa& hard,
                                                 const Dfa& soft,
                                                 std::uint32_t m,
                                                 std::uint32_t n) {
  return std::make_shared<DfaDfaOps>(hard, soft, m, n);
}

std::shared_ptr<SpecOperations> make_ucfg_dfa_ops(const Cfg& hard,
                                                  const Dfa& soft,
                                                  std::uint32_t m,
                                                  std::uint32_t n) {
  return std::make_shared<UcfgDfaOps>(hard, soft, m, n);
}

std::shared_ptr<SpecOperations> make_dfa_ucfg_ops(const Dfa& hard,
                                                  const Cfg& soft,
                                                  std::uint32_t m,
                                                  std::uint32_t n) {
  return std::make_shared<DfaUcfgOps>(hard, soft, m, n);
}

SchemeResult build_for(const CiInstance& instance) {
  instance.validate();

  SpecKind hk = instance.hard.kind();
  SpecKind sk = instance.soft.kind();
  if (hk == SpecKind::Symbolic || sk == SpecKind::Symbolic)
    throw Error(ErrorCode::UnsupportedCombination,
                "symbolic specs require the approximate pipeline");
  if (hk == SpecKind::Ucfg && sk == SpecKind::Ucfg)
    throw Error(ErrorCode::UnsupportedCombination,
                "grammar-grammar instances are not supported");

  std::vector<std::string> warnings;
  auto as_dfa = [&warnings](const SpecHandle& h, const char* role) {
    if (const Dfa* d = std::get_if<Dfa>(&h.payload)) return *d;
    warnings.push_back(std::string("determinized the ") + role + " NFA");
    return determinize(std::get<Nfa>(h.payload));
  };

  std::shared_ptr<SpecOperations> ops;
  std::string scheme;
  if (hk == SpecKind::Ucfg) {
    ops = make_ucfg_dfa_ops(std::get<Cfg>(instance.hard.payload),
                            as_dfa(instance.soft, "soft"), instance.m,
                            instance.n);
    scheme = "ucfg-dfa";
  } else if (sk == SpecKind::Ucfg) {
    ops = make_dfa_ucfg_ops(as_dfa(instance.hard, "hard"),
                            std::get<Cfg>(instance.soft.payload), instance.m,
                            instance.n);
    scheme = "dfa-ucfg";
  } else {
    ops = make_dfa_dfa_ops(as_dfa(instance.hard, "hard"),
                           as_dfa(instance.soft, "soft"), instance.m,
                           instance.n);
    scheme = "dfa-dfa";
  }

  BuildResult result = build_improviser(instance.params, ops);
  FeasibilityReport report;
  if (const FeasibilityReport* r = std::get_if<FeasibilityReport>(&result)) {
    report = *r;
  } else {
    // Recount for the report; cheap next to building the samplers.
    report = check_feasibility(ops->count_improvisations(),
                               ops->count_admissible(),
                               instance.params.epsilon, instance.params.lambda,
                               instance.params.rho);
  }
  return SchemeResult{std::move(result), std::move(report), std::move(scheme),
                      std::move(warnings)};
}

}  // namespace ci
