#ifndef KSAT_GLAUBER_HPP
#define KSAT_GLAUBER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksat/classify.hpp"
#include "ksat/counting.hpp"
#include "ksat/formula.hpp"
#include "ksat/marking.hpp"
#include "ksat/residual.hpp"
#include "ksat/sampling.hpp"

namespace ksat {

// rho = ceil(2^{-k-1} |V_m|), T = ceil(2^{2k+3} n^theta ln(2n/eps^2)),
// cap = ceil(2 k^4 (1+xi) ln n).
struct MixingParams {
  std::uint64_t rho = 0;
  std::uint64_t steps = 0;
  std::uint64_t component_cap = 0;
};
MixingParams mixing_params(unsigned k, Var n, std::size_t marked_count, double theta,
                           std::uint32_t xi, double epsilon);

struct GlauberConfig {
  double theta = 0.5;
  std::uint32_t xi = 1;
  std::optional<double> epsilon;  // default n^-xi

  enum class Mode { Theory, Desk };
  Mode mode = Mode::Theory;
  // Desk-scale overrides; ignored in theory mode.
  std::optional<std::uint64_t> rho_override;
  std::optional<std::uint64_t> steps_override;
  std::optional<std::uint64_t> cap_override;
  // Desk mode may retry a failed block update with a fresh block this many
  // times; a deviation from the abort-on-error contract, flagged in the report.
  std::uint32_t desk_retries = 0;

  std::uint64_t seed = 0;
  bool record_steps = false;
  // Verification threshold for the marking before running; skipped when unset.
  std::optional<double> verify_r = 0.117841;
  std::uint32_t max_cycle_vars = 26;
};

struct RunReport {
  std::uint64_t steps_executed = 0;
  std::size_t max_component = 0;
  std::vector<std::uint32_t> per_step_max_component;  // filled when record_steps
  std::string status = "ok";                          // "ok" or "error"
  std::string error;
  std::uint32_t retries_used = 0;
  double wall_ms = 0;
  std::uint64_t seed = 0;
  MixingParams params;
};

// Driver for the rho-uniform-block dynamics on the marked variables of one
// formula. The chain state is the pinning of the marked variables inside the
// residual index; block updates unpin the block and resample it exactly.
class GlauberChain {
 public:
  GlauberChain(const Formula& f, const Marking& marking, const GlauberConfig& cfg);

  const MixingParams& params() const { return params_; }
  std::uint64_t step_count() const { return t_; }

  // X_0: independent fair coins on the marked variables.
  void init(Rng& rng);

  // One block update; throws ComponentTooLarge in theory mode (desk mode
  // retries up to cfg.desk_retries fresh blocks first).
  void step(Rng& rng, RunReport* report = nullptr);

  // Extends X_T to all variables by exact sampling on V_a and V_c.
  PartialAssignment extend_to_full(Rng& rng, RunReport* report = nullptr);

  // Current marked assignment.
  PartialAssignment marked_state() const;

 private:
  const Formula& f_;
  const Marking& marking_;
  GlauberConfig cfg_;
  MixingParams params_;
  ResidualIndex idx_;
  CountScratch scratch_;
  CountLimits lim_;
  std::vector<Var> perm_;  // marked variables, partially shuffled per step
  std::vector<Var> block_;
  std::vector<std::pair<Var, bool>> sampled_;
  std::uint64_t t_ = 0;
};

// Algorithm entry point: classify-verified marking assumed; T block updates
// from a uniform start, then extension to a full assignment. On error the
// assignment is absent and the report carries status = "error".
struct RunOutput {
  std::optional<PartialAssignment> assignment;
  RunReport report;
};
RunOutput run_sampler(const Formula& f, const Classification& cls, const Marking& marking,
                      const GlauberConfig& cfg);

}  // namespace ksat

#endif
