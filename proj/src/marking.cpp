#include "ksat/marking.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ksat/errors.hpp"
#include "ksat/rng.hpp"

namespace ksat {

double kl_divergence(double x, double y) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0))
    throw DomainError("kl_divergence arguments must lie in (0,1)");
  return x * std::log(x / y) + (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
}

FeasibilityReport check_feasibility(const MarkingParams& p, unsigned k) {
  (void)k;  // the conditions are the k -> infinity exponents; k enters via r(k-3) elsewhere
  FeasibilityReport rep;
  const double target = p.r * std::log(2.0);
  const double control = 1.0 - p.beta_marked - p.beta_aux;

  auto tail = [&](double s, double prob, bool& ok, double& margin) {
    if (s <= 0.0 || s >= 1.0 || prob <= 0.0 || prob >= 1.0 || s >= prob) {
      ok = false;
      margin = (s > 0.0 && s < 1.0 && prob > 0.0 && prob < 1.0) ? kl_divergence(s, prob) - target
                                                                : -target;
      return;
    }
    margin = kl_divergence(s, prob) - target;
    ok = margin >= 0.0;
  };

  tail(p.r, p.beta_marked, rep.marked_ok, rep.marked_margin);
  tail(p.r, p.beta_aux, rep.aux_ok, rep.aux_margin);
  tail(2.0 * p.r, control, rep.control_ok, rep.control_margin);
  return rep;
}

Marking Marking::from_types(const std::vector<char>& types) {
  Marking m;
  m.type = types;
  for (Var v = 0; v < types.size(); ++v) {
    switch (types[v]) {
      case 'M': m.marked.push_back(v); break;
      case 'A': m.auxiliary.push_back(v); break;
      case 'C': m.control.push_back(v); break;
      default: throw DomainError("unknown mark tag");
    }
  }
  return m;
}

namespace {

struct ClauseTally {
  std::uint32_t marked = 0;
  std::uint32_t aux = 0;
  std::uint32_t good_control = 0;
};

// Distinct good variables of clause c (bad ones are control by fiat and do
// not count toward any bound).
ClauseTally tally_clause(const Formula& f, const Classification& cls, const std::vector<char>& type,
                         std::size_t c) {
  ClauseTally t;
  for (Var v : f.vars(c)) {
    if (cls.is_bad_var(v)) continue;
    switch (type[v]) {
      case 'M': t.marked++; break;
      case 'A': t.aux++; break;
      case 'C': t.good_control++; break;
      default: break;
    }
  }
  return t;
}

bool clause_violated(const ClauseTally& t, double need_single, double need_control) {
  return t.marked < need_single || t.aux < need_single || t.good_control < need_control;
}

}  // namespace

Marking compute_marking(const Formula& f, const Classification& cls, const MarkingParams& p) {
  if (!(p.beta_marked > 0.0) || !(p.beta_aux > 0.0) || p.beta_marked + p.beta_aux >= 1.0)
    throw DomainError("marking probabilities must be positive with beta_marked + beta_aux < 1");
  const unsigned k = f.width();
  const double need_single = p.r * (static_cast<double>(k) - 3.0);
  const double need_control = 2.0 * need_single;

  Rng rng(p.seed);
  std::vector<char> type(f.num_vars(), 'C');
  auto flip = [&](Var v) {
    const double u = rng.next_double();
    type[v] = u < p.beta_marked ? 'M' : (u < p.beta_marked + p.beta_aux ? 'A' : 'C');
  };
  for (Var v = 0; v < f.num_vars(); ++v)
    if (!cls.is_bad_var(v)) flip(v);

  // Violated good clauses, resampled in ascending clause order.
  std::vector<ClauseTally> tally(f.num_clauses());
  std::set<std::uint32_t> violated;
  for (std::size_t c = 0; c < f.num_clauses(); ++c) {
    if (cls.is_bad_clause(c)) continue;
    tally[c] = tally_clause(f, cls, type, c);
    if (clause_violated(tally[c], need_single, need_control)) violated.insert(static_cast<std::uint32_t>(c));
  }

  std::uint64_t rounds = 0;
  while (!violated.empty()) {
    if (++rounds > p.max_resample_rounds)
      throw ResampleBudgetExceeded(std::to_string(p.max_resample_rounds) + " rounds");
    const std::uint32_t c = *violated.begin();
    for (Var v : f.vars(c))
      if (!cls.is_bad_var(v)) flip(v);
    // Refresh every clause that shares a good variable with c.
    for (Var v : f.vars(c)) {
      if (cls.is_bad_var(v)) continue;
      for (std::uint32_t c2 : f.clauses_of(v)) {
        if (cls.is_bad_clause(c2)) continue;
        tally[c2] = tally_clause(f, cls, type, c2);
        if (clause_violated(tally[c2], need_single, need_control))
          violated.insert(c2);
        else
          violated.erase(c2);
      }
    }
    // c itself may contain no good variable of any other clause; recheck it.
    tally[c] = tally_clause(f, cls, type, c);
    if (!clause_violated(tally[c], need_single, need_control)) violated.erase(c);
  }

  Marking m = Marking::from_types(type);
  m.resample_rounds = rounds;
  return m;
}

MarkingCheck verify_marking(const Formula& f, const Classification& cls, const Marking& m, double r) {
  MarkingCheck check;
  if (m.type.size() != f.num_vars()) {
    check.ok = false;
    check.violations.push_back({SIZE_MAX, '?', 0, 0});
    return check;
  }
  for (Var v = 0; v < f.num_vars(); ++v) {
    if (cls.is_bad_var(v) && m.type[v] != 'C') {
      check.ok = false;
      check.violations.push_back({SIZE_MAX, 'B', v, 0});
    }
  }
  const double need_single = r * (static_cast<double>(f.width()) - 3.0);
  const double need_control = 2.0 * need_single;
  for (std::size_t c = 0; c < f.num_clauses(); ++c) {
    if (cls.is_bad_clause(c)) continue;
    const ClauseTally t = tally_clause(f, cls, m.type, c);
    if (t.marked < need_single)
      check.violations.push_back({c, 'M', t.marked, need_single});
    if (t.aux < need_single)
      check.violations.push_back({c, 'A', t.aux, need_single});
    if (t.good_control < need_control)
      check.violations.push_back({c, 'C', t.good_control, need_control});
  }
  check.ok = check.ok && check.violations.empty();
  return check;
}

std::string marking_comment_lines(const Marking& m) {
  std::ostringstream out;
  for (Var v = 0; v < m.type.size(); ++v) out << "c mark v " << v << ' ' << m.type[v] << '\n';
  return out.str();
}

Marking marking_from_comment_tags(const std::vector<char>& tags) {
  std::vector<char> type(tags.size());
  for (std::size_t v = 0; v < tags.size(); ++v) {
    if (tags[v] != 'M' && tags[v] != 'A' && tags[v] != 'C')
      throw MalformedInput("variable " + std::to_string(v) + " has no mark tag");
    type[v] = tags[v];
  }
  return Marking::from_types(type);
}

}  // namespace ksat
