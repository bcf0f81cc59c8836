#include "ksat/classify.hpp"

#include <cmath>

namespace ksat {

std::uint32_t ClassifierParams::degree_threshold(unsigned k) const {
  if (override_Delta) return *override_Delta;
  const double exponent = (r0 - 2.0 * delta) * k;
  return static_cast<std::uint32_t>(std::ceil(std::exp2(exponent) - 1e-12));
}

double ClassifierParams::alpha0(unsigned k) const {
  return std::exp2((r0 - 2.0 * delta) * k) / (static_cast<double>(k) * k * k);
}

std::vector<std::uint32_t> degree_table(const Formula& f) {
  std::vector<std::uint32_t> deg(f.num_vars(), 0);
  for (std::size_t c = 0; c < f.num_clauses(); ++c)
    for (Lit l : f.literals(c)) deg[l.var()]++;
  return deg;
}

Classification classify(const Formula& f, const ClassifierParams& params) {
  Classification cls;
  cls.degree = degree_table(f);
  cls.Delta = params.degree_threshold(f.width());
  const std::size_t m = f.num_clauses();
  cls.var_bad.assign(f.num_vars(), 0);
  cls.clause_bad.assign(m, 0);

  std::vector<std::uint32_t> bad_count(m, 0);  // bad variables per clause, over var(c)
  std::vector<Var> stack;
  for (Var v = 0; v < f.num_vars(); ++v)
    if (cls.degree[v] >= cls.Delta) {
      cls.var_bad[v] = 1;
      stack.push_back(v);
    }

  while (!stack.empty()) {
    const Var v = stack.back();
    stack.pop_back();
    for (std::uint32_t c : f.clauses_of(v)) {
      if (++bad_count[c] >= 3 && !cls.clause_bad[c]) {
        cls.clause_bad[c] = 1;
        for (Var w : f.vars(c))
          if (!cls.var_bad[w]) {
            cls.var_bad[w] = 1;
            stack.push_back(w);
          }
      }
    }
  }

  for (auto b : cls.var_bad) cls.num_bad_vars += b;
  for (auto b : cls.clause_bad) cls.num_bad_clauses += b;
  return cls;
}

}  // namespace ksat
