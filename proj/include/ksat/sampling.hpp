#ifndef KSAT_SAMPLING_HPP
#define KSAT_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "ksat/assignment.hpp"
#include "ksat/bigint.hpp"
#include "ksat/counting.hpp"
#include "ksat/formula.hpp"
#include "ksat/residual.hpp"
#include "ksat/rng.hpp"

namespace ksat {

struct SampleStats {
  std::size_t max_component = 0;
  std::size_t components_counted = 0;
};

// Sequential exact sampler: visits S in ascending variable order; for each v
// it counts the satisfying assignments of v's residual component with v->F
// (t0) and v->T (t1), draws t uniform in [0, t0+t1) and sets v->F iff t < t0.
// Variables in no residual clause are fair coins. The index is mutated: every
// sampled variable ends up pinned. Values are appended to `out` in the order
// the variables were visited (ascending).
//
// Throws ComponentTooLarge when a component exceeds `component_cap` and
// UnsatisfiableResidual when t0 + t1 = 0.
void sample_on_index(ResidualIndex& idx, std::vector<Var>& s_sorted, std::size_t component_cap,
                     Rng& rng, CountWork& work, const CountLimits& lim,
                     std::vector<std::pair<Var, bool>>& out, SampleStats* stats = nullptr);

// One-shot wrapper over a fresh index: exact sample from the restriction of
// mu_{Omega^lam} to S. Requires S disjoint from dom(lam).
PartialAssignment sample_marginals(const Formula& f, const PartialAssignment& lam,
                                   const std::vector<Var>& S, std::size_t component_cap,
                                   Rng& rng, SampleStats* stats = nullptr,
                                   const CountLimits& lim = {});

// The exact output law of sample_marginals over S: every random branch is
// enumerated with rational probabilities. Entry masks set bit i to the value
// of the i-th variable of S in ascending order. Zero-probability branches are
// omitted.
struct BlockLaw {
  std::vector<Var> vars;  // S in ascending order
  std::vector<std::pair<std::uint64_t, BigRat>> atoms;
};
BlockLaw block_law(const Formula& f, const PartialAssignment& lam, const std::vector<Var>& S,
                   std::size_t component_cap, const CountLimits& lim = {});

// Conditional marginal Pr(v -> T | pinning of idx) as an exact rational,
// computed from the two component counts. Throws UnsatisfiableResidual when
// both counts vanish.
BigRat exact_marginal_true(ResidualIndex& idx, Var v, std::size_t component_cap, CountWork& work,
                           const CountLimits& lim, SampleStats* stats = nullptr);

}  // namespace ksat

#endif
