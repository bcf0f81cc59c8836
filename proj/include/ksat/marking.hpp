#ifndef KSAT_MARKING_HPP
#define KSAT_MARKING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ksat/classify.hpp"
#include "ksat/formula.hpp"

namespace ksat {

enum class MarkType : char { Marked = 'M', Auxiliary = 'A', Control = 'C' };

// Per-type probabilities for the randomized marking experiment. The defaults
// were obtained by maximizing the minimum margin of the two KL feasibility
// conditions over a symmetric sweep at r = 0.117841; both margins are
// positive but tiny (~1.4e-6), so desk-scale runs usually lower r.
struct MarkingParams {
  double beta_marked = 0.2855135;
  double beta_aux = 0.2855135;
  double r = 0.117841;
  std::uint64_t max_resample_rounds = 1u << 22;
  std::uint64_t seed = 0;
};

struct FeasibilityReport {
  bool marked_ok = false;
  bool aux_ok = false;
  bool control_ok = false;
  double marked_margin = 0;   // D(r, beta_marked) - r ln 2
  double aux_margin = 0;      // D(r, beta_aux) - r ln 2
  double control_margin = 0;  // D(2r, 1 - beta_marked - beta_aux) - r ln 2

  bool all_ok() const { return marked_ok && aux_ok && control_ok; }
};

// Partition of the variables into marked / auxiliary / control; all bad
// variables are control.
struct Marking {
  std::vector<char> type;  // 'M', 'A' or 'C' per variable
  std::vector<Var> marked;
  std::vector<Var> auxiliary;
  std::vector<Var> control;
  std::uint64_t resample_rounds = 0;

  bool is_marked(Var v) const { return type[v] == 'M'; }
  bool is_auxiliary(Var v) const { return type[v] == 'A'; }
  bool is_control(Var v) const { return type[v] == 'C'; }

  static Marking from_types(const std::vector<char>& types);
};

struct MarkingViolation {
  std::size_t clause;
  char bound;  // 'M', 'A' or 'C': which lower bound failed
  std::uint32_t count;
  double required;
};

struct MarkingCheck {
  bool ok = true;
  std::vector<MarkingViolation> violations;
};

// Kullback-Leibler divergence D(x,y) between Bernoulli(x) and Bernoulli(y),
// natural log. Domain: x, y in (0,1).
double kl_divergence(double x, double y);

// Evaluates the two Chernoff/LLL feasibility conditions D(r, beta) >= r ln 2
// (marked and auxiliary tails) and D(2r, control) >= r ln 2 (control tail).
// A condition also fails when the tail is degenerate (r >= beta).
FeasibilityReport check_feasibility(const MarkingParams& p, unsigned k);

// Randomized marking plus Moser-Tardos resampling of violated good clauses
// (lowest clause index first). Throws ResampleBudgetExceeded when the round
// budget runs out; never returns an invalid marking. When there are no good
// clauses the result is (empty, empty, V).
Marking compute_marking(const Formula& f, const Classification& cls, const MarkingParams& p);

// Exhaustive check of the three per-good-clause lower bounds (>= r(k-3)
// marked, >= r(k-3) auxiliary, >= 2r(k-3) good control) plus partition
// well-formedness and bad-variable containment.
MarkingCheck verify_marking(const Formula& f, const Classification& cls, const Marking& m, double r);

// DIMACS comment serialization: `c mark v <idx> <M|A|C>` per variable.
std::string marking_comment_lines(const Marking& m);
Marking marking_from_comment_tags(const std::vector<char>& tags);

}  // namespace ksat

#endif
