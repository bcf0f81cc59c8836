#include "ksat/counting.hpp"

#include <algorithm>
#include <cmath>

#include "ksat/errors.hpp"

namespace ksat {

SimplifiedFormula simplify(const Formula& f, const PartialAssignment& lam) {
  SimplifiedFormula sf;
  sf.n = f.num_vars();
  sf.k = f.width();
  sf.num_unpinned = f.num_vars() - lam.domain_size();
  for (std::size_t c = 0; c < f.num_clauses(); ++c) {
    bool satisfied = false;
    for (Lit l : f.literals(c))
      if (lam.contains(l.var()) && lam.value(l.var()) != l.negated()) {
        satisfied = true;
        break;
      }
    if (satisfied) continue;
    const std::size_t begin = sf.res_lits.size();
    for (Lit l : f.literals(c))
      if (!lam.contains(l.var())) sf.res_lits.push_back(l);
    if (sf.res_lits.size() == begin) sf.empty_clause_present = true;
    sf.res_off.push_back(static_cast<std::uint32_t>(sf.res_lits.size()));
    sf.orig_clause.push_back(static_cast<std::uint32_t>(c));
  }
  return sf;
}

std::uint64_t default_cycle_cap(unsigned k, double alpha, double b) {
  const double c = std::max(1.0, 2.0 * b * std::log(std::exp(1.0) * k * k * alpha));
  return static_cast<std::uint64_t>(std::ceil(k * (c + 1.0)));
}

namespace {

constexpr std::uint64_t kNoBadMask = UINT64_MAX;

// Residual clauses with their unpinned entries, over local variable ids.
struct Rep {
  std::vector<std::uint32_t> off;
  std::vector<std::uint32_t> var;
  std::vector<std::uint8_t> pol;
  std::vector<std::uint64_t> bad_mask;  // the unique falsifying assignment, kNoBadMask if none
  std::vector<std::uint32_t> v2c_off;
  std::vector<std::uint32_t> v2c;
  std::uint32_t appearing = 0;  // number of distinct variables present

  std::size_t num_clauses() const { return off.size() - 1; }
  std::uint32_t width(std::size_t c) const { return off[c + 1] - off[c]; }

  void clear() {
    off.assign(1, 0);
    var.clear();
    pol.clear();
    bad_mask.clear();
    appearing = 0;
  }
};

// Component of a rep: clauses in BFS discovery order, spanning tree parents
// (as positions into `clauses`), non-tree edges and cycle-breaking variables.
struct CompInfo {
  std::vector<std::uint32_t> clauses;
  std::vector<std::uint32_t> vars;
  std::vector<std::int32_t> parent_pos;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> nontree;  // positions into `clauses`
  std::vector<std::uint32_t> cycle_vars;
  std::uint32_t edges = 0;

  std::uint32_t excess() const {
    return edges - (static_cast<std::uint32_t>(clauses.size()) - 1);
  }
};

}  // namespace

struct CountWork {
  std::vector<std::int8_t> pin;
  Rep rep1, rep2;

  // stamped scratch; tokens are never reused
  std::vector<std::uint64_t> cstamp, neigh, vstamp, cyc_stamp;
  std::vector<std::uint32_t> disc, cursor;
  std::vector<std::int32_t> parent;
  std::vector<std::uint32_t> queue;
  std::vector<std::uint32_t> pos;  // var -> entry position scratch
  std::uint64_t token = 0;

  std::vector<CompInfo> comps1, comps2;

  void ensure_vars(std::size_t n) {
    if (vstamp.size() < n) {
      vstamp.resize(n, 0);
      cyc_stamp.resize(n, 0);
      pos.resize(n, 0);
    }
  }
  void ensure_clauses(std::size_t m) {
    if (cstamp.size() < m) {
      cstamp.resize(m, 0);
      neigh.resize(m, 0);
      disc.resize(m, 0);
      parent.resize(m, -1);
    }
  }
};

CountWork* new_count_work() { return new CountWork(); }
void free_count_work(CountWork* w) { delete w; }

namespace {

// View over either a LocalFormula or a Rep.
struct ClauseSource {
  const std::uint32_t* off;
  const std::uint32_t* var;
  const std::uint8_t* pol;
  std::size_t n_clauses;
};

ClauseSource source_of(const LocalFormula& lf) {
  return {lf.cl_off.data(), lf.entry_var.data(), lf.entry_pol.data(), lf.num_clauses()};
}

ClauseSource source_of(const Rep& rep) {
  return {rep.off.data(), rep.var.data(), rep.pol.data(), rep.num_clauses()};
}

// Scan clauses (a subset, or all of them) under the pin array: clauses with a
// satisfying pinned variable are dropped, pinned entries are deleted. Returns
// false when some clause loses all entries unsatisfied (count is zero).
bool build_rep(const ClauseSource& src, const std::vector<std::uint32_t>* subset,
               std::uint32_t n_local_vars, CountWork& w, Rep& rep) {
  rep.clear();
  w.ensure_vars(n_local_vars);
  const std::uint64_t token = ++w.token;
  bool ok = true;
  const std::size_t count = subset ? subset->size() : src.n_clauses;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t c = subset ? (*subset)[i] : i;
    bool satisfied = false;
    for (std::uint32_t e = src.off[c]; e < src.off[c + 1]; ++e) {
      const std::uint32_t v = src.var[e];
      if (w.pin[v] == -1) continue;
      const bool value = w.pin[v] == 1;
      if (value ? (src.pol[e] & kPolPos) : (src.pol[e] & kPolNeg)) {
        satisfied = true;
        break;
      }
    }
    if (satisfied) continue;
    const std::size_t begin = rep.var.size();
    std::uint64_t bad = 0;
    bool taut = false;
    for (std::uint32_t e = src.off[c]; e < src.off[c + 1]; ++e) {
      const std::uint32_t v = src.var[e];
      if (w.pin[v] != -1) continue;
      const std::size_t idx = rep.var.size() - begin;
      if (src.pol[e] == (kPolPos | kPolNeg)) taut = true;
      if (src.pol[e] == kPolNeg && idx < 64) bad |= 1ull << idx;
      rep.var.push_back(v);
      rep.pol.push_back(src.pol[e]);
      if (w.vstamp[v] != token) {
        w.vstamp[v] = token;
        rep.appearing++;
      }
    }
    if (rep.var.size() == begin) ok = false;  // empty clause
    rep.off.push_back(static_cast<std::uint32_t>(rep.var.size()));
    rep.bad_mask.push_back(taut ? kNoBadMask : bad);
  }
  rep.v2c_off.assign(n_local_vars + 1, 0);
  for (std::uint32_t v : rep.var) rep.v2c_off[v + 1]++;
  for (std::uint32_t v = 0; v < n_local_vars; ++v) rep.v2c_off[v + 1] += rep.v2c_off[v];
  rep.v2c.resize(rep.var.size());
  w.cursor.assign(rep.v2c_off.begin(), rep.v2c_off.end() - 1);
  for (std::size_t c = 0; c < rep.num_clauses(); ++c)
    for (std::uint32_t e = rep.off[c]; e < rep.off[c + 1]; ++e)
      rep.v2c[w.cursor[rep.var[e]]++] = static_cast<std::uint32_t>(c);
  return ok;
}

// Connected components with spanning forest, edge count, non-tree edges and
// cycle-breaking variables. All outputs are self-contained (no aliasing into
// the shared scratch), so nested analyses may reuse the same CountWork.
void analyze(const Rep& rep, std::uint32_t n_local_vars, CountWork& w,
             std::vector<CompInfo>& comps) {
  comps.clear();
  const std::size_t m = rep.num_clauses();
  w.ensure_clauses(m);
  w.ensure_vars(n_local_vars);
  const std::uint64_t ctoken = ++w.token;
  const std::uint64_t vtoken = ++w.token;

  for (std::size_t c0 = 0; c0 < m; ++c0) {
    if (w.cstamp[c0] == ctoken) continue;
    comps.emplace_back();
    CompInfo& comp = comps.back();
    w.queue.clear();
    w.queue.push_back(static_cast<std::uint32_t>(c0));
    w.cstamp[c0] = ctoken;
    w.parent[c0] = -1;
    std::size_t head = 0;
    while (head < w.queue.size()) {
      const std::uint32_t c = w.queue[head++];
      w.disc[c] = static_cast<std::uint32_t>(comp.clauses.size());
      comp.clauses.push_back(c);
      for (std::uint32_t e = rep.off[c]; e < rep.off[c + 1]; ++e) {
        const std::uint32_t v = rep.var[e];
        if (w.vstamp[v] == vtoken) continue;
        w.vstamp[v] = vtoken;
        comp.vars.push_back(v);
        for (std::uint32_t i = rep.v2c_off[v]; i < rep.v2c_off[v + 1]; ++i) {
          const std::uint32_t c2 = rep.v2c[i];
          if (w.cstamp[c2] == ctoken) continue;
          w.cstamp[c2] = ctoken;
          w.parent[c2] = static_cast<std::int32_t>(c);
          w.queue.push_back(c2);
        }
      }
    }
    comp.parent_pos.assign(comp.clauses.size(), -1);
    for (std::size_t i = 1; i < comp.clauses.size(); ++i)
      comp.parent_pos[i] = static_cast<std::int32_t>(
          w.disc[static_cast<std::uint32_t>(w.parent[comp.clauses[i]])]);

    // Distinct adjacent pairs, classified tree vs non-tree.
    for (std::uint32_t c : comp.clauses) {
      const std::uint64_t ntoken = ++w.token;
      for (std::uint32_t e = rep.off[c]; e < rep.off[c + 1]; ++e) {
        const std::uint32_t v = rep.var[e];
        for (std::uint32_t i = rep.v2c_off[v]; i < rep.v2c_off[v + 1]; ++i) {
          const std::uint32_t c2 = rep.v2c[i];
          if (c2 == c || w.neigh[c2] == ntoken) continue;
          w.neigh[c2] = ntoken;
          if (w.disc[c2] < w.disc[c]) {
            comp.edges++;
            if (w.parent[c] != static_cast<std::int32_t>(c2) &&
                w.parent[c2] != static_cast<std::int32_t>(c))
              comp.nontree.emplace_back(w.disc[c2], w.disc[c]);
          }
        }
      }
    }

    // Variables shared by the endpoints of each non-tree edge.
    const std::uint64_t cyctoken = ++w.token;
    for (auto [pa, pb] : comp.nontree) {
      const std::uint32_t a = comp.clauses[pa];
      const std::uint32_t b = comp.clauses[pb];
      const std::uint64_t abtoken = ++w.token;
      for (std::uint32_t e = rep.off[a]; e < rep.off[a + 1]; ++e) w.vstamp[rep.var[e]] = abtoken;
      for (std::uint32_t e = rep.off[b]; e < rep.off[b + 1]; ++e) {
        const std::uint32_t v = rep.var[e];
        if (w.vstamp[v] == abtoken && w.cyc_stamp[v] != cyctoken) {
          w.cyc_stamp[v] = cyctoken;
          comp.cycle_vars.push_back(v);
        }
      }
    }
  }
}

// Rooted-tree dynamic program over one tree component. table[c][sigma] is
// the number of satisfying assignments of the subtree formula below c that
// extend the assignment sigma of c's variables; children are folded into the
// parent through the sum over agreeing assignments of the shared variables.
template <typename Int>
Int dp_tree(const Rep& rep, const CompInfo& comp, CountWork& w) {
  const std::size_t size = comp.clauses.size();
  std::vector<std::vector<Int>> tables(size);
  std::vector<std::vector<std::pair<std::uint8_t, std::uint8_t>>> shared(size);

  w.ensure_vars(rep.v2c_off.size());
  for (std::size_t i = 1; i < size; ++i) {
    const std::uint32_t c = comp.clauses[i];
    const std::uint32_t p = comp.clauses[static_cast<std::size_t>(comp.parent_pos[i])];
    const std::uint64_t ptoken = ++w.token;
    for (std::uint32_t e = rep.off[p]; e < rep.off[p + 1]; ++e) {
      w.vstamp[rep.var[e]] = ptoken;
      w.pos[rep.var[e]] = e - rep.off[p];
    }
    for (std::uint32_t e = rep.off[c]; e < rep.off[c + 1]; ++e)
      if (w.vstamp[rep.var[e]] == ptoken)
        shared[i].emplace_back(static_cast<std::uint8_t>(e - rep.off[c]),
                               static_cast<std::uint8_t>(w.pos[rep.var[e]]));
  }

  for (std::size_t i = size; i-- > 0;) {
    const std::uint32_t c = comp.clauses[i];
    const std::uint32_t width = rep.width(c);
    if (width > 26) throw TooLarge("residual clause width " + std::to_string(width));
    std::vector<Int>& table = tables[i];
    table.assign(std::size_t{1} << width, Int(1));
    if (rep.bad_mask[c] != kNoBadMask) table[rep.bad_mask[c]] = Int(0);
    for (std::size_t j = i + 1; j < size; ++j) {
      if (comp.parent_pos[j] != static_cast<std::int32_t>(i)) continue;
      std::vector<Int>& child = tables[j];
      const std::size_t s = shared[j].size();
      std::vector<Int> msg(std::size_t{1} << s, Int(0));
      for (std::size_t t = 0; t < child.size(); ++t) {
        std::size_t key = 0;
        for (std::size_t b = 0; b < s; ++b) key |= ((t >> shared[j][b].first) & 1u) << b;
        msg[key] += child[t];
      }
      for (std::size_t sigma = 0; sigma < table.size(); ++sigma) {
        std::size_t key = 0;
        for (std::size_t b = 0; b < s; ++b) key |= ((sigma >> shared[j][b].second) & 1u) << b;
        table[sigma] *= msg[key];
      }
      child.clear();
      child.shrink_to_fit();
    }
  }
  Int total(0);
  for (const Int& x : tables[0]) total += x;
  return total;
}

// Count a forest-shaped rep: product of tree DPs times 2^free_vars.
template <typename Int>
Int count_forest_rep(const Rep& rep, std::uint32_t n_local_vars, CountWork& w,
                     std::uint32_t free_vars) {
  analyze(rep, n_local_vars, w, w.comps2);
  Int total = Int(1) << free_vars;
  for (const CompInfo& comp : w.comps2) {
    if (comp.excess() != 0)
      throw NotAForest("tree-excess " + std::to_string(comp.excess()) +
                       " after pinning all cycle variables");
    total *= dp_tree<Int>(rep, comp, w);
  }
  return total;
}

// Sum over all assignments of the component's cycle-breaking variables of the
// forest count of the re-simplified component.
template <typename Int>
Int count_component_cycles(const Rep& rep1, const CompInfo& comp, std::uint32_t n_local_vars,
                           CountWork& w) {
  const std::size_t t = comp.cycle_vars.size();
  const ClauseSource src = source_of(rep1);
  Int sum(0);
  for (std::uint64_t mask = 0; mask < (1ull << t); ++mask) {
    for (std::size_t i = 0; i < t; ++i) w.pin[comp.cycle_vars[i]] = (mask >> i) & 1 ? 1 : 0;
    const bool ok = build_rep(src, &comp.clauses, n_local_vars, w, w.rep2);
    if (ok) {
      const std::uint32_t free_vars =
          static_cast<std::uint32_t>(comp.vars.size() - t) - w.rep2.appearing;
      sum += count_forest_rep<Int>(w.rep2, n_local_vars, w, free_vars);
    }
    for (std::size_t i = 0; i < t; ++i) w.pin[comp.cycle_vars[i]] = -1;
  }
  return sum;
}

BigInt count_with_pins(const LocalFormula& lf, CountWork& w, const CountLimits& lim,
                       std::uint32_t pin_var, int pin_value, bool forbid_cycles) {
  const std::uint32_t n = lf.num_vars();
  w.pin.assign(n, -1);
  std::uint32_t pinned = 0;
  if (pin_value >= 0) {
    w.pin[pin_var] = static_cast<std::int8_t>(pin_value);
    pinned = 1;
  }

  if (!build_rep(source_of(lf), nullptr, n, w, w.rep1)) return BigInt(0);
  const std::uint32_t unused = n - pinned - w.rep1.appearing;
  analyze(w.rep1, n, w, w.comps1);

  BigInt total = BigInt(1) << unused;
  for (const CompInfo& comp : w.comps1) {
    const bool small = comp.vars.size() <= 62;
    if (comp.excess() == 0) {
      if (small)
        total *= dp_tree<std::uint64_t>(w.rep1, comp, w);
      else
        total *= dp_tree<BigInt>(w.rep1, comp, w);
      continue;
    }
    if (forbid_cycles) throw NotAForest("tree-excess " + std::to_string(comp.excess()));
    if (comp.cycle_vars.size() > lim.max_cycle_vars || comp.cycle_vars.size() > 62)
      throw ExcessBudgetExceeded(std::to_string(comp.cycle_vars.size()) +
                                 " cycle variables, cap " + std::to_string(lim.max_cycle_vars));
    if (small)
      total *= count_component_cycles<std::uint64_t>(w.rep1, comp, n, w);
    else
      total *= count_component_cycles<BigInt>(w.rep1, comp, n, w);
  }
  return total;
}

}  // namespace

BigInt count_local(const LocalFormula& lf, CountWork& work, const CountLimits& lim) {
  return count_with_pins(lf, work, lim, 0, -1, false);
}

BigInt count_local_pinned(const LocalFormula& lf, std::uint32_t local_var, bool value,
                          CountWork& work, const CountLimits& lim) {
  return count_with_pins(lf, work, lim, local_var, value ? 1 : 0, false);
}

BigInt count_tree(const LocalFormula& lf, CountWork& work) {
  return count_with_pins(lf, work, CountLimits{}, 0, -1, true);
}

ComponentDecomposition decompose(const Formula& f, const SimplifiedFormula& sf) {
  if (sf.empty_clause_present) throw EmptyClause();
  CountScratch scratch;
  CountWork& w = scratch.get();

  // Deduplicate the residual literal slots into a local formula.
  LocalFormula lf;
  std::vector<std::uint32_t> local_of(f.num_vars(), UINT32_MAX);
  lf.cl_off.assign(1, 0);
  for (std::size_t i = 0; i < sf.num_residual(); ++i) {
    const auto lits = sf.literals(i);
    const std::size_t begin = lf.entry_var.size();
    for (Lit l : lits) {
      if (local_of[l.var()] == UINT32_MAX) {
        local_of[l.var()] = lf.num_vars();
        lf.global_var.push_back(l.var());
      }
      const std::uint32_t lv = local_of[l.var()];
      std::size_t hit = begin;
      while (hit < lf.entry_var.size() && lf.entry_var[hit] != lv) ++hit;
      const std::uint8_t pol = l.negated() ? kPolNeg : kPolPos;
      if (hit == lf.entry_var.size()) {
        lf.entry_var.push_back(lv);
        lf.entry_pol.push_back(pol);
      } else {
        lf.entry_pol[hit] |= pol;
      }
    }
    lf.cl_off.push_back(static_cast<std::uint32_t>(lf.entry_var.size()));
    lf.orig_clause.push_back(static_cast<std::uint32_t>(i));
  }

  w.pin.assign(lf.num_vars(), -1);
  Rep rep;
  build_rep(source_of(lf), nullptr, lf.num_vars(), w, rep);
  std::vector<CompInfo> comps;
  analyze(rep, lf.num_vars(), w, comps);

  ComponentDecomposition dec;
  std::size_t covered_vars = 0;
  for (const CompInfo& ci : comps) {
    Component comp;
    comp.clauses = ci.clauses;
    comp.vars.reserve(ci.vars.size());
    for (std::uint32_t v : ci.vars) comp.vars.push_back(lf.global_var[v]);
    comp.parent = ci.parent_pos;
    comp.nontree_edges = ci.nontree;
    for (std::uint32_t v : ci.cycle_vars) comp.cycle_vars.push_back(lf.global_var[v]);
    comp.tree_excess = ci.excess();
    covered_vars += ci.vars.size();
    dec.components.push_back(std::move(comp));
  }
  dec.num_isolated_vars = sf.num_unpinned - covered_vars;
  return dec;
}

CountResult count_formula(const Formula& f, const PartialAssignment& lam, const CountLimits& lim,
                          std::size_t component_cap) {
  ResidualIndex idx(f, lam);
  if (idx.has_empty_clause()) return {BigInt(0)};
  CountScratch scratch;
  LocalFormula lf;
  BigInt total(1);
  std::size_t covered = 0;
  idx.for_each_component(component_cap, [&](const std::vector<std::uint32_t>& clauses) {
    idx.extract(clauses, lf);
    covered += lf.num_vars();
    total *= count_local(lf, scratch.get(), lim);
  });
  const std::size_t isolated = (f.num_vars() - lam.domain_size()) - covered;
  total <<= isolated;
  return {std::move(total)};
}

}  // namespace ksat
