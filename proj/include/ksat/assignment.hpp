#ifndef KSAT_ASSIGNMENT_HPP
#define KSAT_ASSIGNMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ksat/formula.hpp"

namespace ksat {

// Partial truth assignment over a fixed variable universe [0, n).
// Unset variables carry the sentinel value kUnset.
class PartialAssignment {
 public:
  static constexpr std::int8_t kUnset = -1;

  PartialAssignment() = default;
  explicit PartialAssignment(Var n) : val_(n, kUnset) {}

  Var num_vars() const { return static_cast<Var>(val_.size()); }
  std::size_t domain_size() const { return assigned_; }
  bool contains(Var v) const { return val_[v] != kUnset; }
  bool value(Var v) const { return val_[v] == 1; }

  void set(Var v, bool value) {
    if (val_[v] == kUnset) ++assigned_;
    val_[v] = value ? 1 : 0;
  }
  void unset(Var v) {
    if (val_[v] != kUnset) --assigned_;
    val_[v] = kUnset;
  }

  std::vector<Var> domain() const {
    std::vector<Var> d;
    d.reserve(assigned_);
    for (Var v = 0; v < num_vars(); ++v)
      if (val_[v] != kUnset) d.push_back(v);
    return d;
  }

  bool operator==(const PartialAssignment&) const = default;

 private:
  std::vector<std::int8_t> val_;
  std::size_t assigned_ = 0;
};

// True when the total information in `a` satisfies clause c of f; requires at
// least one literal true. Unset variables never satisfy a literal.
bool clause_satisfied(const Formula& f, std::size_t c, const PartialAssignment& a);

// True when `a` assigns every variable of f and satisfies every clause.
bool satisfies(const Formula& f, const PartialAssignment& a);

// Text format: one `v <idx> <0|1>` line per assigned variable (0-based).
PartialAssignment read_partial(std::istream& in, Var n);
PartialAssignment read_partial_string(const std::string& text, Var n);
void write_partial(const PartialAssignment& a, std::ostream& out);

}  // namespace ksat

#endif
