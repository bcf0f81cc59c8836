#include "ksat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ksat/coupling.hpp"
#include "ksat/errors.hpp"
#include "ksat/residual.hpp"
#include "ksat/sampling.hpp"

namespace ksat {

namespace {

// Variables occurring in residual clauses, plus per-clause entry lists over
// positions into that list, for fast mask evaluation.
struct BruteView {
  std::vector<Var> active;                 // ascending
  std::vector<std::uint32_t> cl_off{0};
  std::vector<std::uint32_t> entry_pos;    // position into `active`
  std::vector<std::uint8_t> entry_pol;
  std::size_t free_vars = 0;               // unpinned, in no residual clause

  bool satisfied(std::uint64_t mask, std::size_t c) const {
    for (std::uint32_t e = cl_off[c]; e < cl_off[c + 1]; ++e) {
      const bool value = (mask >> entry_pos[e]) & 1;
      if (value ? (entry_pol[e] & kPolPos) : (entry_pol[e] & kPolNeg)) return true;
    }
    return false;
  }
  bool all_satisfied(std::uint64_t mask) const {
    for (std::size_t c = 0; c + 1 < cl_off.size(); ++c)
      if (!satisfied(mask, c)) return false;
    return true;
  }
};

BruteView brute_view(const Formula& f, const PartialAssignment& lam, bool* empty_clause) {
  const SimplifiedFormula sf = simplify(f, lam);
  if (empty_clause) *empty_clause = sf.empty_clause_present;
  BruteView view;
  std::vector<std::uint32_t> pos_of(f.num_vars(), UINT32_MAX);
  for (std::size_t i = 0; i < sf.num_residual(); ++i)
    for (Lit l : sf.literals(i)) pos_of[l.var()] = 0;
  for (Var v = 0; v < f.num_vars(); ++v)
    if (pos_of[v] != UINT32_MAX) {
      pos_of[v] = static_cast<std::uint32_t>(view.active.size());
      view.active.push_back(v);
    }
  view.free_vars = sf.num_unpinned - view.active.size();
  for (std::size_t i = 0; i < sf.num_residual(); ++i) {
    // deduplicated entries (a variable may repeat within the slots)
    const std::size_t begin = view.entry_pos.size();
    for (Lit l : sf.literals(i)) {
      const std::uint32_t p = pos_of[l.var()];
      std::size_t hit = begin;
      while (hit < view.entry_pos.size() && view.entry_pos[hit] != p) ++hit;
      const std::uint8_t pol = l.negated() ? kPolNeg : kPolPos;
      if (hit == view.entry_pos.size()) {
        view.entry_pos.push_back(p);
        view.entry_pol.push_back(pol);
      } else {
        view.entry_pol[hit] |= pol;
      }
    }
    view.cl_off.push_back(static_cast<std::uint32_t>(view.entry_pos.size()));
  }
  return view;
}

}  // namespace

BigInt brute_count(const Formula& f, const PartialAssignment& lam) {
  bool empty_clause = false;
  const BruteView view = brute_view(f, lam, &empty_clause);
  if (empty_clause) return BigInt(0);
  if (view.active.size() > 30) throw TooLarge("brute_count over " + std::to_string(view.active.size()) + " variables");
  std::uint64_t count = 0;
  const std::uint64_t end = 1ull << view.active.size();
  for (std::uint64_t mask = 0; mask < end; ++mask)
    if (view.all_satisfied(mask)) ++count;
  return BigInt(count) << view.free_vars;
}

std::vector<std::uint64_t> brute_enumerate(const Formula& f, const PartialAssignment& lam,
                                           std::vector<Var>& vars_out) {
  vars_out.clear();
  for (Var v = 0; v < f.num_vars(); ++v)
    if (!lam.contains(v)) vars_out.push_back(v);
  if (vars_out.size() > 30)
    throw TooLarge("brute_enumerate over " + std::to_string(vars_out.size()) + " variables");

  // Residual clause entries over positions into vars_out.
  const SimplifiedFormula sf = simplify(f, lam);
  if (sf.empty_clause_present) return {};
  std::vector<std::uint32_t> pos_of(f.num_vars(), UINT32_MAX);
  for (std::size_t i = 0; i < vars_out.size(); ++i) pos_of[vars_out[i]] = static_cast<std::uint32_t>(i);

  std::vector<std::uint64_t> sat;
  const std::uint64_t end = 1ull << vars_out.size();
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    bool ok = true;
    for (std::size_t c = 0; c < sf.num_residual() && ok; ++c) {
      bool clause_ok = false;
      for (Lit l : sf.literals(c)) {
        const bool value = (mask >> pos_of[l.var()]) & 1;
        if (value != l.negated()) {
          clause_ok = true;
          break;
        }
      }
      ok = clause_ok;
    }
    if (ok) sat.push_back(mask);
  }
  return sat;
}

ExactDistribution ExactDistribution::uniform_over(const std::vector<std::uint64_t>& support,
                                                  unsigned universe_bits) {
  ExactDistribution d;
  d.universe_bits = universe_bits;
  if (support.empty()) throw DomainError("uniform distribution over empty support");
  const BigRat mass(1, static_cast<std::uint64_t>(support.size()));
  d.atoms.reserve(support.size());
  for (std::uint64_t a : support) d.atoms.emplace_back(a, mass);
  d.sort_atoms();
  return d;
}

void ExactDistribution::sort_atoms() {
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

bool ExactDistribution::mass_is_one() const {
  BigRat total(0);
  for (const auto& [a, m] : atoms) total += m;
  return total == 1;
}

TVReport tv_exact(const ExactDistribution& p, const ExactDistribution& q) {
  if (p.universe_bits != q.universe_bits)
    throw SupportMismatch("distributions over different universes");
  BigRat acc(0);
  std::size_t i = 0, j = 0;
  while (i < p.atoms.size() || j < q.atoms.size()) {
    if (j == q.atoms.size() || (i < p.atoms.size() && p.atoms[i].first < q.atoms[j].first)) {
      acc += p.atoms[i].second;
      ++i;
    } else if (i == p.atoms.size() || q.atoms[j].first < p.atoms[i].first) {
      acc += q.atoms[j].second;
      ++j;
    } else {
      const BigRat d = p.atoms[i].second - q.atoms[j].second;
      acc += d < 0 ? BigRat(-d) : d;
      ++i;
      ++j;
    }
  }
  TVReport rep;
  rep.tv = static_cast<double>(acc) / 2.0;
  return rep;
}

TVReport tv_empirical(const ExactDistribution& p,
                      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& histogram,
                      double delta) {
  std::uint64_t n = 0;
  for (const auto& [atom, c] : histogram) n += c;
  if (n == 0) throw DomainError("empty histogram");
  std::map<std::uint64_t, double> emp;
  for (const auto& [atom, c] : histogram) emp[atom] += static_cast<double>(c) / static_cast<double>(n);
  double acc = 0;
  std::size_t support = p.atoms.size();
  for (const auto& [atom, mass] : p.atoms) {
    const double pm = static_cast<double>(mass);
    auto it = emp.find(atom);
    const double em = it == emp.end() ? 0.0 : it->second;
    acc += std::abs(pm - em);
    if (it != emp.end()) emp.erase(it);
  }
  for (const auto& [atom, em] : emp) acc += em;  // mass outside p's support
  TVReport rep;
  rep.tv = acc / 2.0;
  rep.samples = n;
  rep.radius = 0.5 * std::sqrt(static_cast<double>(support) / static_cast<double>(n)) +
               std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
  return rep;
}

double stationarity_check(const Formula& f, const Marking& marking, std::uint64_t rho) {
  const std::size_t M = marking.marked.size();
  if (M > 12) throw TooLarge("stationarity check needs |V_m| <= 12");
  if (f.num_vars() > 26) throw TooLarge("stationarity check needs <= 26 variables");
  if (rho < 1 || rho > M) throw DomainError("rho out of range");

  // Brute-force marked marginal.
  std::vector<Var> vars;
  PartialAssignment empty(f.num_vars());
  const std::vector<std::uint64_t> sat = brute_enumerate(f, empty, vars);
  if (sat.empty()) throw DomainError("unsatisfiable instance");
  std::vector<std::uint32_t> marked_pos;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (marking.is_marked(vars[i])) marked_pos.push_back(static_cast<std::uint32_t>(i));

  const std::size_t states = std::size_t{1} << M;
  std::vector<double> mu(states, 0.0);
  for (std::uint64_t mask : sat) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < M; ++i) key |= ((mask >> marked_pos[i]) & 1) << i;
    mu[key] += 1.0;
  }
  for (double& x : mu) x /= static_cast<double>(sat.size());

  // mu^T P accumulated over blocks S and off-block assignments, with the
  // block law coming from the engine's exact conditional sampler.
  std::vector<double> out(states, 0.0);
  std::vector<std::uint32_t> comb(rho);
  for (std::size_t i = 0; i < rho; ++i) comb[i] = static_cast<std::uint32_t>(i);
  std::uint64_t n_blocks = 0;
  for (bool more = true; more;) {
    ++n_blocks;
    std::uint64_t s_mask = 0;
    std::vector<Var> s_vars;
    for (std::uint32_t i : comb) {
      s_mask |= 1ull << i;
      s_vars.push_back(marking.marked[i]);
    }
    const std::uint64_t rest_mask = (states - 1) & ~s_mask;
    // iterate assignments of the off-block positions (submask enumeration)
    std::uint64_t rest = 0;
    for (;;) {
      double w = 0;
      std::uint64_t s_bits = 0;
      for (;;) {
        w += mu[rest | s_bits];
        s_bits = (s_bits - s_mask) & s_mask;
        if (s_bits == 0) break;
      }
      if (w > 0) {
        PartialAssignment lam(f.num_vars());
        for (std::size_t i = 0; i < M; ++i)
          if (!(s_mask >> i & 1)) lam.set(marking.marked[i], (rest >> i) & 1);
        const BlockLaw law = block_law(f, lam, s_vars, SIZE_MAX);
        for (const auto& [mask, prob] : law.atoms) {
          std::uint64_t y = rest;
          for (std::size_t i = 0; i < law.vars.size(); ++i)
            if ((mask >> i) & 1) y |= 1ull << comb[i];
          out[y] += w * static_cast<double>(prob);
        }
      }
      rest = (rest - rest_mask) & rest_mask;
      if (rest == 0) break;
    }
    // next combination
    more = false;
    for (std::size_t i = rho; i-- > 0;) {
      if (comb[i] + (rho - i) < M) {
        ++comb[i];
        for (std::size_t j = i + 1; j < rho; ++j) comb[j] = comb[j - 1] + 1;
        more = true;
        break;
      }
    }
  }
  double residual = 0;
  for (std::size_t y = 0; y < states; ++y)
    residual = std::max(residual, std::abs(out[y] / static_cast<double>(n_blocks) - mu[y]));
  return residual;
}

SpectralReport spectral_check(const Formula& f, const Marking& marking,
                              const PartialAssignment& lam) {
  std::vector<Var> un;
  for (Var v : marking.marked)
    if (!lam.contains(v)) un.push_back(v);
  if (un.size() > 24) throw TooLarge("influence matrix over more than 24 variables");

  SpectralReport rep;
  rep.dim = un.size();
  rep.matrix.assign(un.size() * un.size(), 0.0);
  for (std::size_t i = 0; i < un.size(); ++i)
    for (std::size_t j = 0; j < un.size(); ++j) {
      if (i == j) continue;
      rep.matrix[i * un.size() + j] = influence_exact(f, un[i], un[j], lam);
    }
  for (std::size_t i = 0; i < un.size(); ++i) {
    double row = 0;
    for (std::size_t j = 0; j < un.size(); ++j) row += std::abs(rep.matrix[i * un.size() + j]);
    rep.max_row_sum = std::max(rep.max_row_sum, row);
  }

  // Power iteration for the largest-magnitude eigenvalue. The influence
  // matrix is diagonally similar to a symmetric matrix, so the norm-growth
  // ratio converges.
  const std::size_t d = un.size();
  if (d == 0) return rep;
  std::vector<double> x(d), y(d);
  Rng rng(12345);
  for (double& xi : x) xi = rng.next_double() + 0.1;
  double norm = 0;
  for (double xi : x) norm += xi * xi;
  norm = std::sqrt(norm);
  for (double& xi : x) xi /= norm;
  double est = 0;
  for (std::size_t it = 0; it < 1000000; ++it) {
    double ynorm = 0;
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += rep.matrix[i * d + j] * x[j];
      y[i] = acc;
      ynorm += acc * acc;
    }
    ynorm = std::sqrt(ynorm);
    if (ynorm < 1e-300) {
      est = 0;
      break;
    }
    const double prev = est;
    est = ynorm;  // ||A x_t|| with ||x_t|| = 1
    for (std::size_t i = 0; i < d; ++i) x[i] = y[i] / ynorm;
    if (it > 10 && std::abs(est - prev) <= 1e-9 * std::max(1.0, est)) break;
  }
  rep.lambda1 = est;
  return rep;
}

}  // namespace ksat
