#include "ksat/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ksat/errors.hpp"
#include "ksat/residual.hpp"
#include "ksat/sampling.hpp"

namespace ksat {

namespace {

// Sample (X(v), Y(v)) from the monotone coupling of two exact Bernoulli
// marginals pX = numX/denX and pY = numY/denY: one uniform draw t over
// [0, denX*denY), X true iff t < numX*denY, Y true iff t < numY*denX.
std::pair<bool, bool> monotone_pair(const BigRat& pX, const BigRat& pY, Rng& rng) {
  const BigInt numX = boost::multiprecision::numerator(pX);
  const BigInt denX = boost::multiprecision::denominator(pX);
  const BigInt numY = boost::multiprecision::numerator(pY);
  const BigInt denY = boost::multiprecision::denominator(pY);
  const BigInt total = denX * denY;
  BigInt t;
  if (total <= BigInt(UINT64_MAX))
    t = rng.next_below(static_cast<std::uint64_t>(total));
  else
    t = uniform_bigint(rng, total);
  return {t < numX * denY, t < numY * denX};
}

struct CouplingEngine {
  const Formula& f;
  const Classification& cls;
  const Marking& marking;
  const CouplingConfig& cfg;
  ResidualIndex idxX, idxY;
  CountScratch scratch;

  std::vector<std::uint8_t> in_crem, in_fu, in_fd, touched;
  std::vector<std::uint8_t> activated;
  std::set<std::uint32_t> active;  // C_rem clauses touching V_d or var(F_u)
  std::vector<Var> v_set, v_d;
  std::vector<std::uint32_t> f_u, f_d;
  std::vector<std::pair<Var, std::pair<bool, bool>>> trace;

  CouplingEngine(const Formula& f_, const Classification& cls_, const Marking& marking_,
                 const CouplingConfig& cfg_)
      : f(f_), cls(cls_), marking(marking_), cfg(cfg_), idxX(f_), idxY(f_) {
    in_crem.assign(f.num_clauses(), 1);
    in_fu.assign(f.num_clauses(), 0);
    in_fd.assign(f.num_clauses(), 0);
    activated.assign(f.num_clauses(), 0);
    touched.assign(f.num_vars(), 0);
  }

  void touch_var(Var v) {
    if (touched[v]) return;
    touched[v] = 1;
    for (std::uint32_t c : f.clauses_of(v))
      if (in_crem[c] && !activated[c]) {
        activated[c] = 1;
        active.insert(c);
      }
  }

  void add_failed(std::uint32_t c) {
    in_fu[c] = 1;
    f_u.push_back(c);
    for (Var v : f.vars(c)) touch_var(v);
  }

  void add_discrepancy(Var v) {
    v_d.push_back(v);
    for (std::uint32_t c : f.clauses_of(v))
      if (!in_fd[c]) {
        in_fd[c] = 1;
        f_d.push_back(c);
      }
    touch_var(v);
  }

  void drop_from_rem(std::uint32_t c) {
    in_crem[c] = 0;
    if (activated[c]) active.erase(c);
  }

  void init(Var u, const PartialAssignment& lam) {
    for (Var v = 0; v < f.num_vars(); ++v)
      if (lam.contains(v)) {
        idxX.pin(v, lam.value(v));
        idxY.pin(v, lam.value(v));
        v_set.push_back(v);
      }
    idxX.pin(u, true);
    idxY.pin(u, false);
    v_set.push_back(u);
    add_discrepancy(u);
  }

  // Extends X and Y to v by the monotone coupling of the exact marginals.
  std::pair<bool, bool> couple_var(Var v, Rng& rng) {
    const BigRat pX = exact_marginal_true(idxX, v, cfg.component_cap, scratch.get(),
                                          cfg.count_limits);
    const BigRat pY = exact_marginal_true(idxY, v, cfg.component_cap, scratch.get(),
                                          cfg.count_limits);
    const auto [xv, yv] = monotone_pair(pX, pY, rng);
    idxX.pin(v, xv);
    idxY.pin(v, yv);
    return {xv, yv};
  }

  void run(Rng& rng) {
    while (!active.empty()) {
      const std::uint32_t c = *active.begin();
      if (cls.is_bad_clause(c)) {
        drop_from_rem(c);
        add_failed(c);
        continue;
      }
      // lowest-index unset auxiliary variable of c, if any
      Var v = UINT32_MAX;
      for (Var w : f.vars(c))
        if (marking.is_auxiliary(w) && !idxX.pinned(w)) v = std::min(v, w);
      if (v == UINT32_MAX) {
        drop_from_rem(c);
        if (idxX.clause_residual(c) || idxY.clause_residual(c)) add_failed(c);
        continue;
      }
      const auto pair = couple_var(v, rng);
      v_set.push_back(v);
      trace.emplace_back(v, pair);
      if (pair.first != pair.second) add_discrepancy(v);
    }
  }

  CouplingRun result() const {
    CouplingRun out;
    out.X = PartialAssignment(f.num_vars());
    out.Y = PartialAssignment(f.num_vars());
    for (Var v : v_set) {
      out.X.set(v, idxX.pin_value(v));
      out.Y.set(v, idxY.pin_value(v));
    }
    out.v_set = v_set;
    out.v_d = v_d;
    out.f_d = f_d;
    out.f_u = f_u;
    for (std::uint32_t c = 0; c < f.num_clauses(); ++c)
      if (in_crem[c]) out.c_rem.push_back(c);
    out.trace = trace;
    return out;
  }
};

}  // namespace

CouplingRun run_coupling(const Formula& f, const Classification& cls, const Marking& marking,
                         Var u, const PartialAssignment& lam, Rng& rng,
                         const CouplingConfig& cfg) {
  if (!marking.is_marked(u)) throw DomainError("coupling root u must be marked");
  if (lam.contains(u)) throw DomainError("u must not be pinned by lam");
  for (Var v = 0; v < f.num_vars(); ++v)
    if (lam.contains(v) && !marking.is_marked(v))
      throw DomainError("lam must pin marked variables only");
  CouplingEngine engine(f, cls, marking, cfg);
  engine.init(u, lam);
  engine.run(rng);
  return engine.result();
}

double influence_exact(const Formula& f, Var u, Var v, const PartialAssignment& lam,
                       const CouplingConfig& cfg) {
  if (v == u) return 1.0;
  if (lam.contains(u)) throw UndefinedConditional("u is pinned");
  if (lam.contains(v)) throw UndefinedConditional("v is pinned");
  ResidualIndex idx(f, lam);
  if (idx.has_empty_clause()) throw UndefinedConditional("lam falsifies a clause");
  CountScratch scratch;
  const BigRat pu = exact_marginal_true(idx, u, SIZE_MAX, scratch.get(), cfg.count_limits);
  if (pu == 0 || pu == 1) throw UndefinedConditional("degenerate marginal of u");
  BigRat marginals[2];
  for (int value = 0; value < 2; ++value) {
    idx.pin(u, value != 0);
    try {
      marginals[value] =
          exact_marginal_true(idx, v, cfg.component_cap, scratch.get(), cfg.count_limits);
    } catch (const UnsatisfiableResidual&) {
      idx.unpin(u);
      throw UndefinedConditional("conditioning empties the solution set");
    }
    idx.unpin(u);
  }
  return static_cast<double>(marginals[1] - marginals[0]);
}

InfluenceSumReport influence_sum_estimate(const Formula& f, const Classification& cls,
                                          const Marking& marking, Var u,
                                          const PartialAssignment& lam, std::uint64_t runs,
                                          std::uint64_t seed, const CouplingConfig& cfg) {
  InfluenceSumReport rep;
  std::vector<Var> targets;  // marked, unpinned, != u
  for (Var v : marking.marked)
    if (v != u && !lam.contains(v)) targets.push_back(v);
  std::vector<std::uint64_t> disagree(targets.size(), 0);
  std::vector<std::uint32_t> target_pos(f.num_vars(), UINT32_MAX);
  for (std::size_t i = 0; i < targets.size(); ++i) target_pos[targets[i]] = static_cast<std::uint32_t>(i);

  double sum_fu = 0;
  double sum_d = 0, sum_d2 = 0;  // per-run total disagreements among targets
  std::uint64_t ok_runs = 0;
  Rng root(seed);
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng rng = root.split(r);
    CouplingEngine engine(f, cls, marking, cfg);
    engine.init(u, lam);
    try {
      engine.run(rng);
      // Extend to the remaining marked and auxiliary variables in ascending
      // variable order.
      std::uint64_t d = 0;
      for (Var v = 0; v < f.num_vars(); ++v) {
        if (engine.idxX.pinned(v) || marking.is_control(v)) continue;
        const auto pair = engine.couple_var(v, rng);
        if (pair.first != pair.second && target_pos[v] != UINT32_MAX) {
          disagree[target_pos[v]]++;
          ++d;
        }
      }
      sum_fu += static_cast<double>(engine.f_u.size());
      sum_d += static_cast<double>(d);
      sum_d2 += static_cast<double>(d) * static_cast<double>(d);
      ++ok_runs;
    } catch (const ComponentTooLarge&) {
      // aborted run, recorded by omission
    }
  }
  rep.runs = ok_runs;
  if (ok_runs == 0) return rep;
  const double n = static_cast<double>(ok_runs);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    InfluenceEstimate e;
    e.v = targets[i];
    e.estimate = static_cast<double>(disagree[i]) / n;
    e.std_error = std::sqrt(std::max(0.0, e.estimate * (1 - e.estimate)) / n);
    e.samples = ok_runs;
    rep.per_var.push_back(e);
    rep.sum_disagreement += e.estimate;
  }
  const double mean_d = sum_d / n;
  const double var_d = std::max(0.0, sum_d2 / n - mean_d * mean_d);
  rep.sum_std_error = std::sqrt(var_d / n);
  rep.mean_failed_clauses = sum_fu / n;
  return rep;
}

}  // namespace ksat
