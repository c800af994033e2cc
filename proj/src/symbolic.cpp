#include "ci/symbolic.hpp"

#include <algorithm>

#include "ci/error.hpp"

namespace ci {

namespace {

// Remaps a template literal into unrolled variable space. Template vars
// are 1..width; base maps template var i to base[i-1].
Lit remap(Lit l, const std::vector<int>& base) {
  int v = std::abs(l);
  int mapped = base[v - 1];
  return l > 0 ? mapped : -mapped;
}

void append_template(Cnf& cnf, const std::vector<Clause>& clauses,
                     const std::vector<int>& base) {
  for (const Clause& c : clauses) {
    Clause out;
    out.reserve(c.size());
    for (Lit l : c) out.push_back(remap(l, base));
    cnf.clauses.push_back(std::move(out));
  }
}

}  // namespace

SymbolicSpec unroll(const SymbolicAutomaton& a, std::uint32_t n) {
  std::uint32_t m = a.state_bits;
  std::uint32_t k = a.input_bits;
  if (k == 0) throw Error(ErrorCode::MalformedInput, "need input_bits >= 1");

  SymbolicSpec spec;
  spec.bits_per_symbol = k;
  spec.length = n;

  // Variable layout: states x_0 .. x_n first (m bits each), then the
  // input symbols c_0 .. c_{n-1} (k bits each, word order).
  spec.cnf.num_vars = static_cast<int>((n + 1) * m + n * k);
  auto state_base = [&](std::uint32_t t) {
    std::vector<int> base(m);
    for (std::uint32_t i = 0; i < m; ++i)
      base[i] = static_cast<int>(t * m + i + 1);
    return base;
  };
  auto input_var = [&](std::uint32_t t, std::uint32_t i) {
    return static_cast<int>((n + 1) * m + t * k + i + 1);
  };

  append_template(spec.cnf, a.init, state_base(0));
  for (std::uint32_t t = 0; t < n; ++t) {
    std::vector<int> base = state_base(t);
    for (std::uint32_t i = 0; i < k; ++i) base.push_back(input_var(t, i));
    std::vector<int> next = state_base(t + 1);
    base.insert(base.end(), next.begin(), next.end());
    append_template(spec.cnf, a.delta, base);
  }
  append_template(spec.cnf, a.acc, state_base(n));

  for (std::uint32_t t = 0; t < n; ++t)
    for (std::uint32_t i = 0; i < k; ++i)
      spec.projected.push_back(input_var(t, i));
  return spec;
}

SymbolicSpec conjoin(const SymbolicSpec& h, const SymbolicSpec& s) {
  if (h.bits_per_symbol != s.bits_per_symbol || h.length != s.length)
    throw Error(ErrorCode::ShapeMismatch,
                "conjoin needs matching symbol width and length");

  SymbolicSpec out = h;
  // Rename s's variables: projected vars map onto h's, auxiliaries get
  // fresh names above h's range.
  std::vector<int> rename(s.cnf.num_vars + 1, 0);
  for (std::size_t i = 0; i < s.projected.size(); ++i)
    rename[s.projected[i]] = h.projected[i];
  for (int v = 1; v <= s.cnf.num_vars; ++v)
    if (rename[v] == 0) rename[v] = out.cnf.fresh_var();
  for (const Clause& c : s.cnf.clauses) {
    Clause mapped;
    mapped.reserve(c.size());
    for (Lit l : c) {
      int v = rename[std::abs(l)];
      mapped.push_back(l > 0 ? v : -v);
    }
    out.cnf.clauses.push_back(std::move(mapped));
  }
  return out;
}

namespace {

Word decode_projected(const SymbolicSpec& spec, const Assignment& a) {
  Word w(spec.length, 0);
  std::uint32_t k = spec.bits_per_symbol;
  for (std::uint32_t t = 0; t < spec.length; ++t) {
    std::uint32_t sym = 0;
    for (std::uint32_t i = 0; i < k; ++i)
      sym = (sym << 1) | (a[spec.projected[t * k + i]] ? 1u : 0u);
    w[t] = sym;
  }
  return w;
}

Clause block_projected(const SymbolicSpec& spec, const Assignment& a) {
  Clause c;
  c.reserve(spec.projected.size());
  for (int v : spec.projected) c.push_back(a[v] ? -v : v);
  return c;
}

}  // namespace

std::vector<Word> enumerate_projected(const SymbolicSpec& spec,
                                      SatOracle& oracle, std::uint64_t cap) {
  Cnf work = spec.cnf;
  std::vector<Word> models;
  while (true) {
    std::optional<Assignment> a = oracle.solve(work);
    if (!a) break;
    if (models.size() > cap) break;
    models.push_back(decode_projected(spec, *a));
    work.clauses.push_back(block_projected(spec, *a));
  }
  std::sort(models.begin(), models.end());
  return models;
}

BigInt projected_count_exact(const SymbolicSpec& spec, SatOracle& oracle,
                             std::uint64_t cap) {
  Cnf work = spec.cnf;
  std::uint64_t count = 0;
  while (true) {
    std::optional<Assignment> a = oracle.solve(work);
    if (!a) break;
    if (++count > cap)
      throw Error(ErrorCode::CapExceeded, "projected model count exceeds cap");
    work.clauses.push_back(block_projected(spec, *a));
  }
  return BigInt(count);
}

bool is_member(const SymbolicSpec& spec, const Word& w, SatOracle& oracle) {
  if (w.size() != spec.length) return false;
  Cnf work = spec.cnf;
  std::uint32_t k = spec.bits_per_symbol;
  for (std::uint32_t t = 0; t < spec.length; ++t) {
    if (w[t] >= spec.alphabet_size()) return false;
    for (std::uint32_t i = 0; i < k; ++i) {
      int v = spec.projected[t * k + i];
      bool bit = (w[t] >> (k - 1 - i)) & 1u;
      work.clauses.push_back({bit ? v : -v});
    }
  }
  return oracle.solve(work).has_value();
}

ApproxSampler::ApproxSampler(SymbolicSpec spec, Rational tau, SatOracle& oracle,
                             std::uint64_t retry_cap)
    : spec_(std::move(spec)), oracle_(oracle), retry_cap_(retry_cap) {
  if (tau <= 0)
    throw Error(ErrorCode::MalformedInput, "tau must be positive");
  // pivot = ceil(2 * (1 + 1/tau)^2): cells at most this large keep the
  // output within a 1+tau factor of uniform.
  Rational p = 2 * (1 + 1 / tau) * (1 + 1 / tau);
  BigInt np = numerator(p) / denominator(p);
  if (numerator(p) % denominator(p) != 0) ++np;
  if (np > 1000000)
    throw Error(ErrorCode::MalformedInput, "tau too small; pivot too large");
  pivot_ = np.convert_to<std::uint64_t>();
}

Word ApproxSampler::draw(Rng& rng) const {
  for (std::uint64_t attempt = 0; attempt < retry_cap_; ++attempt) {
    Cnf work = spec_.cnf;
    // Add random parity constraints one at a time until the cell is
    // small enough, then pick uniformly inside it.
    std::vector<Word> cell;
    for (std::size_t hashes = 0; hashes <= spec_.projected.size(); ++hashes) {
      SymbolicSpec view = spec_;
      view.cnf = work;
      cell = enumerate_projected(view, oracle_, pivot_);
      if (cell.size() <= pivot_) break;
      std::vector<Lit> xor_lits;
      for (int v : spec_.projected)
        if (rng.below_u64(2) == 1) xor_lits.push_back(v);
      add_xor_constraint(work, xor_lits, rng.below_u64(2) == 1);
    }
    if (cell.empty()) continue;
    if (cell.size() > pivot_) continue;
    return cell[rng.below_u64(cell.size())];
  }
  throw Error(ErrorCode::EmptyLanguage,
              "sampler exhausted retries without finding a model");
}

SymbolicImproviser::SymbolicImproviser(const SymbolicSpec& hard,
                                       const SymbolicSpec& soft,
                                       const Rational& epsilon,
                                       const Rational& tau, SatOracle& oracle)
    : epsilon_(epsilon),
      sample_a_(conjoin(hard, soft), tau, oracle),
      sample_i_(hard, tau, oracle) {
  if (epsilon < 0 || epsilon > 1)
    throw Error(ErrorCode::MalformedInput, "epsilon must lie in [0,1]");
}

Word SymbolicImproviser::draw(Rng& rng) const {
  if (bernoulli(1 - epsilon_, rng)) return sample_a_.draw(rng);
  return sample_i_.draw(rng);
}

}  // namespace ci
