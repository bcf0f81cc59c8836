#ifndef KSAT_COUNTING_HPP
#define KSAT_COUNTING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ksat/assignment.hpp"
#include "ksat/bigint.hpp"
#include "ksat/formula.hpp"
#include "ksat/residual.hpp"

namespace ksat {

// Phi^Lambda: clauses satisfied by lam removed, false literals deleted.
// Residual clauses keep their surviving literal slots in input order.
struct SimplifiedFormula {
  Var n = 0;
  unsigned k = 0;
  std::vector<std::uint32_t> res_off{0};
  std::vector<Lit> res_lits;
  std::vector<std::uint32_t> orig_clause;
  std::size_t num_unpinned = 0;
  bool empty_clause_present = false;

  std::size_t num_residual() const { return orig_clause.size(); }
  std::span<const Lit> literals(std::size_t i) const {
    return {res_lits.data() + res_off[i], res_off[i + 1] - res_off[i]};
  }
};

SimplifiedFormula simplify(const Formula& f, const PartialAssignment& lam);

// One connected component of G_{Phi^Lambda} with its spanning forest and the
// variables whose pinning breaks every non-tree edge.
struct Component {
  std::vector<std::uint32_t> clauses;  // positions into the residual clause list
  std::vector<Var> vars;               // residual variables of the component
  std::vector<std::int32_t> parent;    // spanning tree parent per position, -1 at root
  std::vector<std::pair<std::uint32_t, std::uint32_t>> nontree_edges;
  std::vector<Var> cycle_vars;
  std::uint32_t tree_excess = 0;
};

struct ComponentDecomposition {
  std::vector<Component> components;
  std::size_t num_isolated_vars = 0;  // unpinned variables in no residual clause
};

// Throws EmptyClause when sf.empty_clause_present.
ComponentDecomposition decompose(const Formula& f, const SimplifiedFormula& sf);

struct CountResult {
  BigInt count;
};

struct CountLimits {
  // Abort threshold for the number of cycle-breaking variables of one
  // component (the enumeration is 2^|cycle_vars|).
  std::uint32_t max_cycle_vars = 26;
};

// k * (c + 1) with c = max{1, 2 b ln(e k^2 alpha)}, the tree-excess constant.
std::uint64_t default_cycle_cap(unsigned k, double alpha, double b);

// Reusable scratch for the counting routines; one per thread.
struct CountWork;
CountWork* new_count_work();
void free_count_work(CountWork*);

class CountScratch {
 public:
  CountScratch() : w_(new_count_work()) {}
  ~CountScratch() { free_count_work(w_); }
  CountScratch(const CountScratch&) = delete;
  CountScratch& operator=(const CountScratch&) = delete;
  CountWork& get() { return *w_; }

 private:
  CountWork* w_;
};

// Exact number of satisfying assignments of the local residual formula over
// its full local variable universe. Spanning-forest dynamic programming per
// component, enumerating assignments of the cycle-breaking variables.
BigInt count_local(const LocalFormula& lf, CountWork& work, const CountLimits& lim = {});

// Same, with one local variable pre-pinned (the t0/t1 counts of the
// marginal sampler). The pinned variable is excluded from the universe.
BigInt count_local_pinned(const LocalFormula& lf, std::uint32_t local_var, bool value,
                          CountWork& work, const CountLimits& lim = {});

// Rooted-tree DP on an acyclic local formula; throws NotAForest when the
// residual graph has a cycle.
BigInt count_tree(const LocalFormula& lf, CountWork& work);

// Exact model count of Phi^Lambda over all unpinned variables (isolated
// variables contribute a factor 2 each).
CountResult count_formula(const Formula& f, const PartialAssignment& lam,
                          const CountLimits& lim = {}, std::size_t component_cap = SIZE_MAX);

}  // namespace ksat

#endif
