#ifndef KSAT_RESIDUAL_HPP
#define KSAT_RESIDUAL_HPP

#include <cassert>
#include <cstdint>
#include <vector>

#include "ksat/assignment.hpp"
#include "ksat/formula.hpp"

namespace ksat {

// Compact residual subformula over a local variable universe, extracted from
// one or more connected components of G_{Phi^Lambda}. Entries are distinct
// variables with their polarity flags; pinned variables never appear.
struct LocalFormula {
  std::vector<std::uint32_t> cl_off;     // clause boundaries, size C+1
  std::vector<std::uint32_t> entry_var;  // local variable id per entry
  std::vector<std::uint8_t> entry_pol;   // kPolPos / kPolNeg / both
  std::vector<Var> global_var;           // local id -> global variable
  std::vector<std::uint32_t> orig_clause;

  std::size_t num_clauses() const { return cl_off.empty() ? 0 : cl_off.size() - 1; }
  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(global_var.size()); }
  void clear() {
    cl_off.clear();
    entry_var.clear();
    entry_pol.clear();
    global_var.clear();
    orig_clause.clear();
  }
};

// Dynamic incidence index over a formula under a mutable pinning. Tracks per
// clause how many distinct variables are pinned and whether a pinned value
// already satisfies the clause, so residual clauses and connected components
// of G_{Phi^Lambda} can be queried without re-simplifying.
class ResidualIndex {
 public:
  explicit ResidualIndex(const Formula& f);
  ResidualIndex(const Formula& f, const PartialAssignment& lam);

  const Formula& formula() const { return *f_; }

  bool pinned(Var v) const { return pin_[v] != -1; }
  bool pin_value(Var v) const { return pin_[v] == 1; }
  std::size_t num_pinned() const { return num_pinned_; }

  void pin(Var v, bool value);
  void unpin(Var v);

  // Clause is residual iff no pinned literal satisfies it.
  bool clause_residual(std::size_t c) const { return sat_cnt_[c] == 0; }
  bool clause_empty(std::size_t c) const {
    return sat_cnt_[c] == 0 && pin_cnt_[c] == dwidth(c);
  }
  bool has_empty_clause() const { return empty_clauses_ > 0; }

  PartialAssignment to_assignment() const;

  // BFS over residual clauses reachable from v through unpinned variables.
  // Output is the list of residual clause ids; empty when v occurs in no
  // residual clause. Throws ComponentTooLarge when more than `cap` clauses
  // are reached.
  void component_of(Var v, std::size_t cap, std::vector<std::uint32_t>& out_clauses);

  // All components of G_{Phi^Lambda}: calls sink(clause_ids) per component.
  // The sink may use the index (extract, counting) between calls.
  template <typename Sink>
  void for_each_component(std::size_t cap, Sink&& sink) {
    std::vector<std::uint32_t> comp;
    std::vector<std::uint8_t> done(f_->num_clauses(), 0);
    for (std::size_t c = 0; c < f_->num_clauses(); ++c) {
      if (!clause_residual(c) || done[c]) continue;
      comp.clear();
      grow_component(static_cast<std::uint32_t>(c), cap, comp);
      for (std::uint32_t cc : comp) done[cc] = 1;
      sink(comp);
    }
  }

  // Builds the residual subformula induced by the given clauses. The clause
  // set does not have to be a single component.
  void extract(const std::vector<std::uint32_t>& clauses, LocalFormula& out);

 private:
  std::uint32_t dwidth(std::size_t c) const {
    return static_cast<std::uint32_t>(f_->vars(c).size());
  }
  // Fresh traversal token; tokens are never reused so stale stamps can't
  // collide even when operations interleave.
  std::uint64_t bump_stamp() { return ++stamp_; }
  void grow_component(std::uint32_t seed_clause, std::size_t cap, std::vector<std::uint32_t>& out);

  const Formula* f_;
  std::vector<std::int8_t> pin_;
  std::vector<std::uint16_t> sat_cnt_;
  std::vector<std::uint16_t> pin_cnt_;
  std::size_t num_pinned_ = 0;
  std::size_t empty_clauses_ = 0;

  // Reusable stamped scratch for traversals.
  std::uint64_t stamp_ = 0;
  std::vector<std::uint64_t> clause_stamp_;
  std::vector<std::uint64_t> var_stamp_;
  std::vector<std::uint32_t> queue_;
  std::vector<std::uint32_t> var_map_;  // global var -> local id during extract
};

}  // namespace ksat

#endif
