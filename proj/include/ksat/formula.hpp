#ifndef KSAT_FORMULA_HPP
#define KSAT_FORMULA_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ksat/rng.hpp"

namespace ksat {

using Var = std::uint32_t;

// A literal packed as (var << 1) | negated.
struct Lit {
  std::uint32_t code = 0;

  static Lit make(Var v, bool negated) { return Lit{(v << 1) | (negated ? 1u : 0u)}; }
  Var var() const { return code >> 1; }
  bool negated() const { return (code & 1u) != 0; }
  bool operator==(const Lit&) const = default;
};

// Polarity flags of a variable within one clause.
inline constexpr std::uint8_t kPolPos = 1;
inline constexpr std::uint8_t kPolNeg = 2;

// Immutable k-CNF instance. Every clause has exactly k literal slots
// (repetitions allowed); var(c) is the deduplicated variable set.
class Formula {
 public:
  Formula(Var n, unsigned k, std::vector<Lit> slots);

  Var num_vars() const { return n_; }
  unsigned width() const { return k_; }
  std::size_t num_clauses() const { return slots_.size() / k_; }
  double density() const { return n_ == 0 ? 0.0 : static_cast<double>(num_clauses()) / n_; }

  // The k literal slots of clause c, in input order.
  std::span<const Lit> literals(std::size_t c) const { return {slots_.data() + c * k_, k_}; }

  // Distinct variables of clause c.
  std::span<const Var> vars(std::size_t c) const {
    return {dvars_.data() + dvar_off_[c], dvar_off_[c + 1] - dvar_off_[c]};
  }
  // Polarity flags parallel to vars(c); kPolPos|kPolNeg when both signs occur.
  std::span<const std::uint8_t> polarities(std::size_t c) const {
    return {dpol_.data() + dvar_off_[c], dvar_off_[c + 1] - dvar_off_[c]};
  }

  // Clauses whose var() set contains v (each clause listed once).
  std::span<const std::uint32_t> clauses_of(Var v) const {
    return {inc_.data() + inc_off_[v], inc_off_[v + 1] - inc_off_[v]};
  }
  // Polarity of v within the corresponding clause, parallel to clauses_of(v).
  std::span<const std::uint8_t> clause_polarities_of(Var v) const {
    return {inc_pol_.data() + inc_off_[v], inc_off_[v + 1] - inc_off_[v]};
  }

  bool operator==(const Formula& o) const {
    return n_ == o.n_ && k_ == o.k_ && slots_ == o.slots_;
  }

 private:
  Var n_;
  unsigned k_;
  std::vector<Lit> slots_;
  // Per-clause distinct variables with polarity flags (CSR layout).
  std::vector<std::uint32_t> dvar_off_;
  std::vector<Var> dvars_;
  std::vector<std::uint8_t> dpol_;
  // Variable -> clause incidence over distinct variables (CSR layout).
  std::vector<std::uint32_t> inc_off_;
  std::vector<std::uint32_t> inc_;
  std::vector<std::uint8_t> inc_pol_;
};

// Clause dependency graph G: vertices are clauses, edges join clauses whose
// variable sets intersect.
struct DependencyGraph {
  std::vector<std::uint32_t> off;
  std::vector<std::uint32_t> adj;

  std::span<const std::uint32_t> neighbors(std::size_t c) const {
    return {adj.data() + off[c], off[c + 1] - off[c]};
  }
  std::size_t num_edges() const { return adj.size() / 2; }
};

// Random instance with m = floor(alpha * n) clauses; each literal slot is
// drawn i.i.d. (variable uniform over n, sign fair). Deterministic per seed.
Formula generate_random(unsigned k, Var n, double alpha, std::uint64_t seed);

DependencyGraph build_dependency_graph(const Formula& f);

// DIMACS CNF. Reading enforces uniform clause width and in-range variables.
// When marks_out is non-null, `c mark v <idx> <M|A|C>` comment lines are
// collected into it ('\0' entries for unmarked variables).
Formula read_dimacs(std::istream& in, std::vector<char>* marks_out = nullptr);
Formula read_dimacs_string(const std::string& text, std::vector<char>* marks_out = nullptr);
void write_dimacs(const Formula& f, std::ostream& out);
std::string write_dimacs_string(const Formula& f);

}  // namespace ksat

#endif
