#include "ksat/assignment.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "ksat/errors.hpp"

namespace ksat {

bool clause_satisfied(const Formula& f, std::size_t c, const PartialAssignment& a) {
  for (Lit l : f.literals(c))
    if (a.contains(l.var()) && a.value(l.var()) != l.negated()) return true;
  return false;
}

bool satisfies(const Formula& f, const PartialAssignment& a) {
  if (a.domain_size() != f.num_vars()) return false;
  for (std::size_t c = 0; c < f.num_clauses(); ++c)
    if (!clause_satisfied(f, c, a)) return false;
  return true;
}

PartialAssignment read_partial(std::istream& in, Var n) {
  PartialAssignment a(n);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string tag;
    long long idx, value;
    if (!(ls >> tag >> idx >> value) || tag != "v" || (value != 0 && value != 1))
      throw MalformedInput("expected 'v <idx> <0|1>', got: " + line);
    if (idx < 0 || idx >= static_cast<long long>(n))
      throw MalformedInput("assignment index out of range: " + std::to_string(idx));
    a.set(static_cast<Var>(idx), value == 1);
  }
  return a;
}

PartialAssignment read_partial_string(const std::string& text, Var n) {
  std::istringstream in(text);
  return read_partial(in, n);
}

void write_partial(const PartialAssignment& a, std::ostream& out) {
  for (Var v = 0; v < a.num_vars(); ++v)
    if (a.contains(v)) out << "v " << v << ' ' << (a.value(v) ? 1 : 0) << '\n';
}

}  // namespace ksat
