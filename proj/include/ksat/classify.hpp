#ifndef KSAT_CLASSIFY_HPP
#define KSAT_CLASSIFY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ksat/formula.hpp"

namespace ksat {

// Default constants for high-degree classification. The degree threshold is
// Delta = ceil(2^((r0 - 2*delta) * k)) and the reference density cap is
// alpha0 = 2^((r0 - 2*delta) * k) / k^3.
struct ClassifierParams {
  double r0 = 0.117841;
  double delta = 0.00001;
  double r = 0.1178;
  // Desk-scale override for the degree threshold; the theory value is
  // impractically small at small k (it makes nearly every variable bad).
  std::optional<std::uint32_t> override_Delta;

  std::uint32_t degree_threshold(unsigned k) const;
  double alpha0(unsigned k) const;
};

// Bad/good partition of variables and clauses: the least fixpoint containing
// all high-degree variables and closed under "a clause with >= 3 bad
// variables makes all its variables bad". Clauses with >= 3 bad variables
// are bad.
struct Classification {
  std::vector<std::uint32_t> degree;  // literal occurrences, counting repetitions
  std::vector<std::uint8_t> var_bad;
  std::vector<std::uint8_t> clause_bad;
  std::uint32_t Delta = 0;
  std::size_t num_bad_vars = 0;
  std::size_t num_bad_clauses = 0;

  bool is_bad_var(Var v) const { return var_bad[v] != 0; }
  bool is_bad_clause(std::size_t c) const { return clause_bad[c] != 0; }
};

std::vector<std::uint32_t> degree_table(const Formula& f);

// Stack-and-counter implementation, O(n + m k).
Classification classify(const Formula& f, const ClassifierParams& params = {});

}  // namespace ksat

#endif
