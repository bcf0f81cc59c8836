#ifndef KSAT_COUPLING_HPP
#define KSAT_COUPLING_HPP

#include <cstdint>
#include <vector>

#include "ksat/assignment.hpp"
#include "ksat/classify.hpp"
#include "ksat/counting.hpp"
#include "ksat/formula.hpp"
#include "ksat/marking.hpp"
#include "ksat/rng.hpp"

namespace ksat {

// Outcome of the coupling process on auxiliary variables started from a
// discrepancy at u under the pinning lam of marked variables.
struct CouplingRun {
  PartialAssignment X, Y;              // assignments of V_set
  std::vector<Var> v_set;              // variables assigned by the coupling
  std::vector<Var> v_d;                // discrepancies
  std::vector<std::uint32_t> f_d;      // clauses containing a discrepancy
  std::vector<std::uint32_t> f_u;      // failed clauses (bad or unsatisfied)
  std::vector<std::uint32_t> c_rem;    // clauses never fully explored
  std::vector<std::pair<Var, std::pair<bool, bool>>> trace;  // sampled (X,Y) pairs in order
};

struct CouplingConfig {
  std::size_t component_cap = SIZE_MAX;
  CountLimits count_limits{};
};

// Algorithm: repeatedly take the lowest-index remaining clause that touches a
// discrepancy or a failed clause; bad clauses fail immediately; good clauses
// with all auxiliary variables set are removed (failing when unsatisfied);
// otherwise the lowest unset auxiliary variable of the clause is extended by
// the monotone coupling of its two exact conditional marginals.
CouplingRun run_coupling(const Formula& f, const Classification& cls, const Marking& marking,
                         Var u, const PartialAssignment& lam, Rng& rng,
                         const CouplingConfig& cfg = {});

// I^Lambda(u -> v) = Pr(v->T | u->T, lam) - Pr(v->T | u->F, lam), computed
// exactly from component counts. Throws UndefinedConditional when u is
// pinned, u's conditional is degenerate, or v is pinned (for v != u).
double influence_exact(const Formula& f, Var u, Var v, const PartialAssignment& lam,
                       const CouplingConfig& cfg = {});

struct InfluenceEstimate {
  Var v;
  double estimate = 0;   // empirical Pr(X(v) != Y(v))
  double std_error = 0;
  std::uint64_t samples = 0;
};

struct InfluenceSumReport {
  std::vector<InfluenceEstimate> per_var;  // marked v not in dom(lam), v != u
  double sum_disagreement = 0;             // sum_v Pr(X(v) != Y(v)), Monte Carlo
  double sum_std_error = 0;                // standard error of the sum
  double mean_failed_clauses = 0;          // E |F_u|
  std::uint64_t runs = 0;
};

// Monte Carlo over coupling runs, each extended to all marked and auxiliary
// variables in ascending variable order by the monotone coupling of exact
// marginals. Reports per-variable disagreement frequencies, their sum (an
// upper bound on the exact influence sum), and the mean number of failed
// clauses.
InfluenceSumReport influence_sum_estimate(const Formula& f, const Classification& cls,
                                          const Marking& marking, Var u,
                                          const PartialAssignment& lam, std::uint64_t runs,
                                          std::uint64_t seed, const CouplingConfig& cfg = {});

}  // namespace ksat

#endif
