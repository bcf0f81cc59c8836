#include "ksat/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "ksat/errors.hpp"
#include "ksat/glauber.hpp"
#include "ksat/parallel.hpp"
#include "ksat/residual.hpp"

namespace ksat {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Largest pairwise variable intersection and the width-deficiency count of
// one formula; stops early once some pair shares `stop_at` variables.
struct LinearityScan {
  std::uint32_t max_shared = 0;
  std::size_t deficient_clauses = 0;  // |var(c)| <= k - 2
};

LinearityScan scan_linearity(const Formula& f, std::uint32_t stop_at) {
  LinearityScan out;
  const std::size_t m = f.num_clauses();
  std::vector<std::uint32_t> shared(m, 0);
  std::vector<std::uint32_t> touchlist;
  for (std::size_t c = 0; c < m; ++c) {
    if (f.vars(c).size() + 2 <= f.width()) out.deficient_clauses++;
    touchlist.clear();
    for (Var v : f.vars(c))
      for (std::uint32_t c2 : f.clauses_of(v)) {
        if (c2 <= c) continue;
        if (shared[c2]++ == 0) touchlist.push_back(c2);
      }
    for (std::uint32_t c2 : touchlist) {
      out.max_shared = std::max(out.max_shared, shared[c2]);
      shared[c2] = 0;
    }
    if (out.max_shared >= stop_at && out.deficient_clauses > 0) break;
  }
  return out;
}

struct DeskPipeline {
  Formula f;
  Classification cls;
  Marking marking;
};

DeskPipeline desk_pipeline(Var n, const ExperimentParams& p, std::uint64_t seed) {
  ClassifierParams cp;
  cp.override_Delta = p.delta_override;
  MarkingParams mp;
  mp.r = p.marking_r;
  mp.beta_marked = p.beta_marked;
  mp.beta_aux = p.beta_aux;
  mp.seed = seed * 2 + 1;
  Formula f = generate_random(p.k, n, p.alpha, seed);
  Classification cls = classify(f, cp);
  Marking marking = compute_marking(f, cls, mp);
  return {std::move(f), std::move(cls), std::move(marking)};
}

// Pins pin_vars with independent fair coins: the Glauber chain marginal at
// step 0. Positive chain_steps run the desk chain first and restrict its
// state.
void default_pinning_law(const Formula& f, const Classification& cls, const Marking& marking,
                         std::uint32_t chain_steps, Rng& rng, const std::vector<Var>& pin_vars,
                         PartialAssignment& lam) {
  if (chain_steps == 0) {
    for (Var v : pin_vars) lam.set(v, rng.next_bool());
    return;
  }
  GlauberConfig cfg;
  cfg.mode = GlauberConfig::Mode::Desk;
  cfg.steps_override = chain_steps;
  cfg.cap_override = SIZE_MAX;
  cfg.verify_r.reset();
  GlauberChain chain(f, marking, cfg);
  chain.init(rng);
  for (std::uint32_t t = 0; t < chain_steps; ++t) chain.step(rng);
  const PartialAssignment state = chain.marked_state();
  for (Var v : pin_vars) lam.set(v, state.value(v));
  (void)cls;
}

}  // namespace

Json linearity_experiment(const std::vector<Var>& ns, const ExperimentParams& p) {
  Json per_n = Json::array();
  for (Var n : ns) {
    std::vector<std::uint8_t> violated(p.num_seeds, 0), deficient(p.num_seeds, 0);
    std::vector<std::uint32_t> max_shared(p.num_seeds, 0);
    parallel_for(p.num_seeds, [&](std::size_t i) {
      const Formula f = generate_random(p.k, n, p.alpha, p.seed0 + i);
      const LinearityScan scan = scan_linearity(f, 3);
      violated[i] = scan.max_shared >= 3;
      deficient[i] = scan.deficient_clauses > 0;
      max_shared[i] = scan.max_shared;
    });
    const double freq =
        std::accumulate(violated.begin(), violated.end(), 0.0) / static_cast<double>(p.num_seeds);
    const double wfreq =
        std::accumulate(deficient.begin(), deficient.end(), 0.0) / static_cast<double>(p.num_seeds);
    per_n.push_back({{"n", n},
                     {"seeds", p.num_seeds},
                     {"share3_frequency", freq},
                     {"width_deficiency_frequency", wfreq},
                     {"max_shared", *std::max_element(max_shared.begin(), max_shared.end())}});
  }
  return Json{{"schema", "ksat/linearity/1"},
              {"k", p.k},
              {"alpha", p.alpha},
              {"target", "share3_frequency decreasing in n; limit 0 (|var(c) ^ var(c')| <= 2 w.h.p.)"},
              {"per_n", per_n}};
}

Json tree_excess_experiment(Var n, const ExperimentParams& p) {
  Json per_seed = Json::array();
  std::mutex mu;
  parallel_for(p.num_seeds, [&](std::size_t i) {
    DeskPipeline pipe = desk_pipeline(n, p, p.seed0 + i);
    Rng rng(p.seed0 * 1000003 + i);
    //

    // Lambda: uniform rho-subset left free, the rest of the marked variables
    // pinned from the chain law.
    const std::size_t vm = pipe.marking.marked.size();
    const std::size_t rho =
        vm == 0 ? 0
                : std::max<std::size_t>(
                      1, static_cast<std::size_t>(std::ceil(std::exp2(-(double)p.k - 1.0) * vm)));
    std::vector<Var> perm = pipe.marking.marked;
    const std::size_t take = std::min(rho, perm.size());
    for (std::size_t j = 0; j < take; ++j)
      std::swap(perm[j], perm[j + rng.next_below(perm.size() - j)]);
    std::vector<Var> pinned(perm.begin() + take, perm.end());
    PartialAssignment lam(pipe.f.num_vars());
    default_pinning_law(pipe.f, pipe.cls, pipe.marking, p.chain_steps, rng, pinned, lam);

    const SimplifiedFormula sf = simplify(pipe.f, lam);
    Json row;
    row["seed"] = p.seed0 + i;
    row["residual_clauses"] = sf.num_residual();
    if (sf.empty_clause_present) {
      row["empty_clause"] = true;
    } else {
      const ComponentDecomposition dec = decompose(pipe.f, sf);
      std::uint32_t max_excess = 0;
      std::size_t max_size = 0;
      std::map<std::size_t, std::size_t> hist;
      for (const Component& comp : dec.components) {
        max_excess = std::max(max_excess, comp.tree_excess);
        max_size = std::max(max_size, comp.clauses.size());
        hist[comp.clauses.size()]++;
      }
      Json jhist = Json::object();
      for (auto [size, cnt] : hist) jhist[std::to_string(size)] = cnt;
      row["components"] = dec.components.size();
      row["max_tree_excess"] = max_excess;
      row["max_component_size"] = max_size;
      row["component_size_histogram"] = jhist;
    }
    std::lock_guard<std::mutex> lock(mu);
    per_seed.push_back(std::move(row));
  });
  const double b_desk = 5.0;
  const double c_desk =
      std::max(1.0, 2.0 * b_desk * std::log(std::exp(1.0) * p.k * p.k * p.alpha));
  return Json{{"schema", "ksat/tree-excess/1"},
              {"k", p.k},
              {"n", n},
              {"alpha", p.alpha},
              {"target",
               "components of size <= b ln n have tree-excess <= max{1, 2 b ln(e k^2 alpha)} w.h.p."},
              {"c_for_b_5", c_desk},
              {"per_seed", per_seed}};
}

Json bad_fraction_experiment(Var n, const ExperimentParams& p,
                             std::optional<std::size_t> L_override) {
  const double k4 = std::pow(static_cast<double>(p.k), 4.0);
  const std::size_t L = L_override.value_or(
      static_cast<std::size_t>(std::ceil(2.0 * k4 * std::log(static_cast<double>(n)))));
  Json per_seed = Json::array();
  std::mutex mu;
  parallel_for(p.num_seeds, [&](std::size_t i) {
    ClassifierParams cp;
    cp.override_Delta = p.delta_override;
    const Formula f = generate_random(p.k, n, p.alpha, p.seed0 + i);
    const Classification cls = classify(f, cp);
    Rng rng(p.seed0 * 7 + i);

    // Grow BFS balls in G_Phi from random seed clauses until |var(Y)| >= L.
    double max_ratio = 0.0;
    std::size_t qualifying = 0;
    const std::size_t draws = 32;
    std::vector<std::uint8_t> in_y(f.num_clauses(), 0);
    std::vector<std::uint8_t> in_vars(f.num_vars(), 0);
    for (std::size_t d = 0; d < draws && f.num_clauses() > 0; ++d) {
      std::fill(in_y.begin(), in_y.end(), 0);
      std::fill(in_vars.begin(), in_vars.end(), 0);
      std::vector<std::uint32_t> queue{
          static_cast<std::uint32_t>(rng.next_below(f.num_clauses()))};
      in_y[queue[0]] = 1;
      std::size_t bad = cls.is_bad_clause(queue[0]) ? 1 : 0;
      std::size_t nvars = 0;
      std::size_t head = 0;
      while (head < queue.size() && nvars < L) {
        const std::uint32_t c = queue[head++];
        for (Var v : f.vars(c)) {
          if (!in_vars[v]) {
            in_vars[v] = 1;
            ++nvars;
          }
          for (std::uint32_t c2 : f.clauses_of(v))
            if (!in_y[c2]) {
              in_y[c2] = 1;
              bad += cls.is_bad_clause(c2) ? 1 : 0;
              queue.push_back(c2);
            }
        }
      }
      if (nvars >= L) {
        ++qualifying;
        max_ratio = std::max(max_ratio,
                             static_cast<double>(bad) / static_cast<double>(queue.size()));
      }
    }
    Json row{{"seed", p.seed0 + i},
             {"bad_clauses", cls.num_bad_clauses},
             {"bad_vars", cls.num_bad_vars},
             {"qualifying_sets", qualifying},
             {"max_bad_fraction", max_ratio}};
    std::lock_guard<std::mutex> lock(mu);
    per_seed.push_back(std::move(row));
  });
  return Json{{"schema", "ksat/bad-fraction/1"},
              {"k", p.k},
              {"n", n},
              {"alpha", p.alpha},
              {"L", L},
              {"target", "|Y ^ C_bad| <= |Y|/k for connected Y with |var(Y)| >= 2 k^4 ln n, w.h.p."},
              {"target_fraction", 1.0 / p.k},
              {"per_seed", per_seed}};
}

Json pinning_experiment(const Formula& f, const std::vector<Var>& V, std::uint64_t rho,
                        std::uint64_t num_draws, std::uint64_t seed,
                        std::optional<std::size_t> L_override, const PinningLaw& law) {
  const unsigned k = f.width();
  const double k4 = std::pow(static_cast<double>(k), 4.0);
  const double delta = 0.00001;
  const std::size_t L = L_override.value_or(static_cast<std::size_t>(
      std::ceil(2.0 * k4 * 2.0 * std::log(static_cast<double>(f.num_vars())))));
  if (rho > V.size()) throw DomainError("rho exceeds |V|");

  std::vector<std::size_t> largest(num_draws, 0);
  parallel_for(num_draws, [&](std::size_t d) {
    Rng rng = Rng(seed).split(d);
    std::vector<Var> perm = V;
    for (std::size_t j = 0; j < rho; ++j)
      std::swap(perm[j], perm[j + rng.next_below(perm.size() - j)]);
    std::vector<Var> pinned(perm.begin() + rho, perm.end());
    std::sort(pinned.begin(), pinned.end());
    PartialAssignment lam(f.num_vars());
    if (law)
      law(rng, pinned, lam);
    else
      for (Var v : pinned) lam.set(v, rng.next_bool());

    // Largest connected-in-G_Phi set of clauses unsatisfied by lam.
    std::vector<std::uint8_t> unsat(f.num_clauses(), 0);
    for (std::size_t c = 0; c < f.num_clauses(); ++c) {
      bool sat = false;
      for (Lit l : f.literals(c))
        if (lam.contains(l.var()) && lam.value(l.var()) != l.negated()) {
          sat = true;
          break;
        }
      unsat[c] = !sat;
    }
    std::vector<std::uint8_t> seen(f.num_clauses(), 0);
    std::vector<std::uint64_t> vseen(f.num_vars(), 0);
    std::uint64_t vtoken = 0;
    std::size_t best = 0;
    std::vector<std::uint32_t> queue;
    for (std::size_t c0 = 0; c0 < f.num_clauses(); ++c0) {
      if (!unsat[c0] || seen[c0]) continue;
      ++vtoken;
      queue.clear();
      queue.push_back(static_cast<std::uint32_t>(c0));
      seen[c0] = 1;
      std::size_t head = 0;
      while (head < queue.size()) {
        const std::uint32_t c = queue[head++];
        for (Var v : f.vars(c)) {
          if (vseen[v] == vtoken) continue;
          vseen[v] = vtoken;
          for (std::uint32_t c2 : f.clauses_of(v))
            if (unsat[c2] && !seen[c2]) {
              seen[c2] = 1;
              queue.push_back(c2);
            }
        }
      }
      best = std::max(best, queue.size());
    }
    largest[d] = best;
  });

  std::size_t exceed = 0;
  std::size_t max_largest = 0;
  for (std::size_t x : largest) {
    if (x >= L) ++exceed;
    max_largest = std::max(max_largest, x);
  }
  return Json{{"schema", "ksat/pinning/1"},
              {"k", k},
              {"n", f.num_vars()},
              {"rho", rho},
              {"L", L},
              {"draws", num_draws},
              {"exceed_frequency", static_cast<double>(exceed) / static_cast<double>(num_draws)},
              {"max_largest_unsat_component", max_largest},
              {"target_probability", std::exp2(-delta * k * static_cast<double>(L))},
              {"target",
               "Pr(exists connected unsatisfied Y with |Y| >= L) <= 2^(-delta k L), w.h.p."}};
}

CountResult count_bad_formula(const Formula& f, const Classification& cls) {
  // Phi_bad over the bad variables only.
  std::vector<std::uint32_t> bad_index(f.num_vars(), UINT32_MAX);
  std::uint32_t nb = 0;
  for (Var v = 0; v < f.num_vars(); ++v)
    if (cls.is_bad_var(v)) bad_index[v] = nb++;
  std::vector<Lit> slots;
  for (std::size_t c = 0; c < f.num_clauses(); ++c) {
    if (!cls.is_bad_clause(c)) continue;
    for (Lit l : f.literals(c)) slots.push_back(Lit::make(bad_index[l.var()], l.negated()));
  }
  const Formula bad(nb, f.width(), std::move(slots));
  return count_formula(bad, PartialAssignment(nb));
}

Json scaling_bench(const std::vector<Var>& ns, const ExperimentParams& p, double theta,
                   std::uint64_t runs_per_n) {
  Json per_n = Json::array();
  std::vector<double> log_n, log_t;
  for (Var n : ns) {
    std::vector<double> totals;
    Json row;
    for (std::uint64_t r = 0; r < runs_per_n; ++r) {
      const double t0 = now_ms();
      DeskPipeline pipe = desk_pipeline(n, p, p.seed0 + r);
      const double t1 = now_ms();

      const std::uint64_t steps = static_cast<std::uint64_t>(
          std::ceil(std::pow(static_cast<double>(n), theta) * std::log(static_cast<double>(n))));
      GlauberConfig cfg;
      cfg.mode = GlauberConfig::Mode::Desk;
      cfg.steps_override = steps;
      cfg.xi = 1;
      cfg.verify_r.reset();
      GlauberChain chain(pipe.f, pipe.marking, cfg);
      Rng rng(p.seed0 + 17 * r);
      chain.init(rng);
      std::uint64_t errors = 0;
      for (std::uint64_t t = 0; t < steps; ++t) {
        try {
          chain.step(rng);
        } catch (const ComponentTooLarge&) {
          ++errors;
        }
      }
      const double t2 = now_ms();
      totals.push_back(t2 - t0);
      if (r == 0)
        row = Json{{"n", n},
                   {"setup_ms", t1 - t0},
                   {"chain_ms", t2 - t1},
                   {"steps", steps},
                   {"rho", chain.params().rho},
                   {"cap", chain.params().component_cap},
                   {"marked", pipe.marking.marked.size()},
                   {"step_errors", errors}};
    }
    std::sort(totals.begin(), totals.end());
    const double median = totals[totals.size() / 2];
    row["total_ms_median"] = median;
    per_n.push_back(row);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_t.push_back(std::log(std::max(median, 1e-3)));
  }
  // least-squares slope of log t against log n
  const std::size_t s = log_n.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < s; ++i) {
    mx += log_n[i];
    my += log_t[i];
  }
  mx /= s;
  my /= s;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < s; ++i) {
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
    sxy += (log_n[i] - mx) * (log_t[i] - my);
  }
  const double exponent = sxx > 0 ? sxy / sxx : 0.0;
  return Json{{"schema", "ksat/scaling/1"},
              {"k", p.k},
              {"alpha", p.alpha},
              {"theta", theta},
              {"fitted_exponent", exponent},
              {"per_n", per_n}};
}

}  // namespace ksat
