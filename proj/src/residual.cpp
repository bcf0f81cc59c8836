#include "ksat/residual.hpp"

#include "ksat/errors.hpp"

namespace ksat {

namespace {

bool value_satisfies(std::uint8_t pol, bool value) {
  return value ? (pol & kPolPos) != 0 : (pol & kPolNeg) != 0;
}

}  // namespace

ResidualIndex::ResidualIndex(const Formula& f)
    : f_(&f),
      pin_(f.num_vars(), -1),
      sat_cnt_(f.num_clauses(), 0),
      pin_cnt_(f.num_clauses(), 0),
      clause_stamp_(f.num_clauses(), 0),
      var_stamp_(f.num_vars(), 0),
      var_map_(f.num_vars(), 0) {}

ResidualIndex::ResidualIndex(const Formula& f, const PartialAssignment& lam) : ResidualIndex(f) {
  for (Var v = 0; v < f.num_vars(); ++v)
    if (lam.contains(v)) pin(v, lam.value(v));
}

void ResidualIndex::pin(Var v, bool value) {
  assert(pin_[v] == -1);
  pin_[v] = value ? 1 : 0;
  ++num_pinned_;
  const auto clauses = f_->clauses_of(v);
  const auto pols = f_->clause_polarities_of(v);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const std::uint32_t c = clauses[i];
    ++pin_cnt_[c];
    if (value_satisfies(pols[i], value)) ++sat_cnt_[c];
    if (sat_cnt_[c] == 0 && pin_cnt_[c] == dwidth(c)) ++empty_clauses_;
  }
}

void ResidualIndex::unpin(Var v) {
  assert(pin_[v] != -1);
  const bool value = pin_[v] == 1;
  pin_[v] = -1;
  --num_pinned_;
  const auto clauses = f_->clauses_of(v);
  const auto pols = f_->clause_polarities_of(v);
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const std::uint32_t c = clauses[i];
    if (sat_cnt_[c] == 0 && pin_cnt_[c] == dwidth(c)) --empty_clauses_;
    --pin_cnt_[c];
    if (value_satisfies(pols[i], value)) --sat_cnt_[c];
  }
}

PartialAssignment ResidualIndex::to_assignment() const {
  PartialAssignment a(f_->num_vars());
  for (Var v = 0; v < f_->num_vars(); ++v)
    if (pin_[v] != -1) a.set(v, pin_[v] == 1);
  return a;
}

void ResidualIndex::grow_component(std::uint32_t seed_clause, std::size_t cap,
                                   std::vector<std::uint32_t>& out) {
  const std::uint64_t stamp = bump_stamp();
  queue_.clear();
  clause_stamp_[seed_clause] = stamp;
  queue_.push_back(seed_clause);
  out.push_back(seed_clause);
  std::size_t head = 0;
  while (head < queue_.size()) {
    const std::uint32_t c = queue_[head++];
    for (Var w : f_->vars(c)) {
      if (pin_[w] != -1 || var_stamp_[w] == stamp) continue;
      var_stamp_[w] = stamp;
      for (std::uint32_t c2 : f_->clauses_of(w)) {
        if (clause_stamp_[c2] == stamp || !clause_residual(c2)) continue;
        clause_stamp_[c2] = stamp;
        queue_.push_back(c2);
        out.push_back(c2);
        if (out.size() > cap) throw ComponentTooLarge(out.size(), cap);
      }
    }
  }
}

void ResidualIndex::component_of(Var v, std::size_t cap, std::vector<std::uint32_t>& out_clauses) {
  out_clauses.clear();
  for (std::uint32_t c : f_->clauses_of(v)) {
    if (!clause_residual(c)) continue;
    // All residual clauses containing v lie in one component (they connect
    // through v itself), so one grow from the first covers every one.
    grow_component(c, cap, out_clauses);
    break;
  }
}

void ResidualIndex::extract(const std::vector<std::uint32_t>& clauses, LocalFormula& out) {
  out.clear();
  const std::uint64_t stamp = bump_stamp();
  out.cl_off.push_back(0);
  for (std::uint32_t c : clauses) {
    const auto vars = f_->vars(c);
    const auto pols = f_->polarities(c);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const Var v = vars[i];
      if (pin_[v] != -1) continue;
      if (var_stamp_[v] != stamp) {
        var_stamp_[v] = stamp;
        var_map_[v] = out.num_vars();
        out.global_var.push_back(v);
      }
      out.entry_var.push_back(var_map_[v]);
      out.entry_pol.push_back(pols[i]);
    }
    out.cl_off.push_back(static_cast<std::uint32_t>(out.entry_var.size()));
    out.orig_clause.push_back(c);
  }
}

}  // namespace ksat
