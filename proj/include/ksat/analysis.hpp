#ifndef KSAT_ANALYSIS_HPP
#define KSAT_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "ksat/classify.hpp"
#include "ksat/counting.hpp"
#include "ksat/formula.hpp"
#include "ksat/marking.hpp"
#include "ksat/rng.hpp"

namespace ksat {

using Json = nlohmann::json;

// Shared knobs for the structural experiments. Desk-scale runs lower the
// degree threshold and the marking constant so the machinery is exercised at
// small k and n.
struct ExperimentParams {
  unsigned k = 10;
  double alpha = 1.0;
  std::uint64_t num_seeds = 20;
  std::uint64_t seed0 = 1;
  std::optional<std::uint32_t> delta_override;
  double marking_r = 0.1178;
  double beta_marked = 0.2855135;
  double beta_aux = 0.2855135;
  std::uint32_t chain_steps = 0;  // pinning law: chain marginal after this many steps
};

// Clause-pair variable intersections and per-clause distinct-variable counts
// across random instances; the target is at most 2 shared variables and at
// least k-1 distinct variables per clause.
Json linearity_experiment(const std::vector<Var>& ns, const ExperimentParams& p);

// Tree-excess and component-size statistics of G_{Phi^Lambda} where Lambda
// pins the marked variables off a uniform rho-subset from the chain law.
Json tree_excess_experiment(Var n, const ExperimentParams& p);

// Fraction of bad clauses in sampled connected clause sets Y with
// |var(Y)| >= L (default L = ceil(2 k^4 ln n)).
Json bad_fraction_experiment(Var n, const ExperimentParams& p,
                             std::optional<std::size_t> L_override = {});

// The pinning experiment: draw S (uniform rho-subset of V), draw Lambda on
// V \ S from the supplied law, record the largest connected (in G_Phi) set
// of clauses unsatisfied by Lambda. The default law is the Glauber chain
// marginal after p.chain_steps steps (step 0 = uniform coins).
using PinningLaw =
    std::function<void(Rng&, const std::vector<Var>& pin_vars, PartialAssignment&)>;
Json pinning_experiment(const Formula& f, const std::vector<Var>& V, std::uint64_t rho,
                        std::uint64_t num_draws, std::uint64_t seed,
                        std::optional<std::size_t> L_override = {},
                        const PinningLaw& law = {});

// Z(0): the number of assignments of the bad variables satisfying all bad
// clauses, counted exactly on Phi_bad = (V_bad, C_bad).
CountResult count_bad_formula(const Formula& f, const Classification& cls);

// Wall-clock of generate/classify/mark plus T(n) desk block updates with
// T = ceil(n^theta ln n), and the fitted log-log exponent of the total.
Json scaling_bench(const std::vector<Var>& ns, const ExperimentParams& p, double theta,
                   std::uint64_t runs_per_n = 1);

}  // namespace ksat

#endif
