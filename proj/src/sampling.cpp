#include "ksat/sampling.hpp"

#include <algorithm>

#include "ksat/errors.hpp"

namespace ksat {

namespace {

// Closed form for a single-clause component: the clause has w unpinned
// distinct variables and exactly one falsifying assignment (none if some
// entry is tautological), so each side of the split counts 2^(w-1) minus at
// most one.
void single_clause_counts(const ResidualIndex& idx, std::uint32_t c, Var v, BigInt& t0,
                          BigInt& t1) {
  const Formula& f = idx.formula();
  const auto vars = f.vars(c);
  const auto pols = f.polarities(c);
  std::uint32_t w = 0;
  std::uint8_t pol_v = 0;
  bool taut = false;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (idx.pinned(vars[i])) continue;
    ++w;
    if (vars[i] == v) pol_v = pols[i];
    if (pols[i] == (kPolPos | kPolNeg)) taut = true;
  }
  const BigInt half = BigInt(1) << (w - 1);
  t1 = taut || (pol_v & kPolPos) ? half : half - 1;
  t0 = taut || (pol_v & kPolNeg) ? half : half - 1;
}

// t0/t1 for v under the current pinning: counts of v's residual component
// with v pinned false resp. true. Returns false when v is in no residual
// clause (free coin).
bool component_counts(ResidualIndex& idx, Var v, std::size_t cap, CountWork& work,
                      const CountLimits& lim, std::vector<std::uint32_t>& comp, LocalFormula& lf,
                      BigInt& t0, BigInt& t1, SampleStats* stats) {
  idx.component_of(v, cap, comp);
  if (comp.empty()) return false;
  if (stats) {
    stats->max_component = std::max(stats->max_component, comp.size());
    stats->components_counted++;
  }
  if (comp.size() == 1) {
    single_clause_counts(idx, comp[0], v, t0, t1);
    return true;
  }
  idx.extract(comp, lf);
  std::uint32_t local = UINT32_MAX;
  for (std::uint32_t i = 0; i < lf.num_vars(); ++i)
    if (lf.global_var[i] == v) {
      local = i;
      break;
    }
  t0 = count_local_pinned(lf, local, false, work, lim);
  t1 = count_local_pinned(lf, local, true, work, lim);
  return true;
}

}  // namespace

void sample_on_index(ResidualIndex& idx, std::vector<Var>& s_sorted, std::size_t component_cap,
                     Rng& rng, CountWork& work, const CountLimits& lim,
                     std::vector<std::pair<Var, bool>>& out, SampleStats* stats) {
  std::vector<std::uint32_t> comp;
  LocalFormula lf;
  BigInt t0, t1;
  for (Var v : s_sorted) {
    bool value;
    if (!component_counts(idx, v, component_cap, work, lim, comp, lf, t0, t1, stats)) {
      value = rng.next_bool();
    } else {
      const BigInt total = t0 + t1;
      if (total == 0) throw UnsatisfiableResidual();
      BigInt t;
      if (total <= BigInt(UINT64_MAX))
        t = rng.next_below(static_cast<std::uint64_t>(total));
      else
        t = uniform_bigint(rng, total);
      value = !(t < t0);
    }
    idx.pin(v, value);
    out.emplace_back(v, value);
  }
}

PartialAssignment sample_marginals(const Formula& f, const PartialAssignment& lam,
                                   const std::vector<Var>& S, std::size_t component_cap,
                                   Rng& rng, SampleStats* stats, const CountLimits& lim) {
  for (Var v : S)
    if (lam.contains(v)) throw DomainError("sample_marginals: S intersects dom(lam)");
  ResidualIndex idx(f, lam);
  if (idx.has_empty_clause()) throw UnsatisfiableResidual();
  std::vector<Var> sorted(S);
  std::sort(sorted.begin(), sorted.end());
  CountScratch scratch;
  std::vector<std::pair<Var, bool>> out;
  out.reserve(sorted.size());
  sample_on_index(idx, sorted, component_cap, rng, scratch.get(), lim, out, stats);
  PartialAssignment result(f.num_vars());
  for (auto [v, value] : out) result.set(v, value);
  return result;
}

namespace {

void law_recurse(ResidualIndex& idx, const std::vector<Var>& vars, std::size_t i,
                 std::size_t cap, CountWork& work, const CountLimits& lim, std::uint64_t mask,
                 const BigRat& prob, std::vector<std::pair<std::uint64_t, BigRat>>& atoms) {
  if (i == vars.size()) {
    atoms.emplace_back(mask, prob);
    return;
  }
  const Var v = vars[i];
  std::vector<std::uint32_t> comp;
  LocalFormula lf;
  BigInt t0, t1;
  if (!component_counts(idx, v, cap, work, lim, comp, lf, t0, t1, nullptr)) {
    t0 = 1;
    t1 = 1;
  }
  const BigInt total = t0 + t1;
  if (total == 0) throw UnsatisfiableResidual();
  for (int value = 0; value < 2; ++value) {
    const BigInt& tv = value ? t1 : t0;
    if (tv == 0) continue;
    idx.pin(v, value != 0);
    law_recurse(idx, vars, i + 1, cap, work, lim, mask | (value ? (1ull << i) : 0),
                prob * BigRat(tv, total), atoms);
    idx.unpin(v);
  }
}

}  // namespace

BlockLaw block_law(const Formula& f, const PartialAssignment& lam, const std::vector<Var>& S,
                   std::size_t component_cap, const CountLimits& lim) {
  if (S.size() > 62) throw TooLarge("block law over more than 62 variables");
  for (Var v : S)
    if (lam.contains(v)) throw DomainError("block_law: S intersects dom(lam)");
  BlockLaw law;
  law.vars = S;
  std::sort(law.vars.begin(), law.vars.end());
  ResidualIndex idx(f, lam);
  if (idx.has_empty_clause()) throw UnsatisfiableResidual();
  CountScratch scratch;
  law_recurse(idx, law.vars, 0, component_cap, scratch.get(), lim, 0, BigRat(1), law.atoms);
  std::sort(law.atoms.begin(), law.atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return law;
}

BigRat exact_marginal_true(ResidualIndex& idx, Var v, std::size_t component_cap, CountWork& work,
                           const CountLimits& lim, SampleStats* stats) {
  std::vector<std::uint32_t> comp;
  LocalFormula lf;
  BigInt t0, t1;
  if (!component_counts(idx, v, component_cap, work, lim, comp, lf, t0, t1, stats))
    return BigRat(1, 2);
  const BigInt total = t0 + t1;
  if (total == 0) throw UnsatisfiableResidual();
  return BigRat(t1, total);
}

}  // namespace ksat
