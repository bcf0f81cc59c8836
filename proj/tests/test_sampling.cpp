#include <doctest.h>

#include <cmath>
#include <map>

#include "ksat/errors.hpp"
#include "ksat/formula.hpp"
#include "ksat/oracle.hpp"
#include "ksat/sampling.hpp"

using namespace ksat;

namespace {

Formula make(Var n, unsigned k, std::initializer_list<std::initializer_list<int>> clauses) {
  std::vector<Lit> slots;
  for (auto& cl : clauses)
    for (int l : cl) slots.push_back(Lit::make(static_cast<Var>(std::abs(l) - 1), l < 0));
  return Formula(n, k, std::move(slots));
}

// mu_{Omega^lam} restricted to S, exactly, from brute-force enumeration.
std::map<std::uint64_t, BigRat> brute_restriction(const Formula& f, const PartialAssignment& lam,
                                                  const std::vector<Var>& s_sorted) {
  std::vector<Var> vars;
  const auto sols = brute_enumerate(f, lam, vars);
  std::map<std::uint64_t, std::uint64_t> counts;
  std::vector<std::uint32_t> pos;
  for (Var v : s_sorted)
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) pos.push_back(static_cast<std::uint32_t>(i));
  REQUIRE(pos.size() == s_sorted.size());
  for (std::uint64_t mask : sols) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) key |= ((mask >> pos[i]) & 1) << i;
    counts[key]++;
  }
  std::map<std::uint64_t, BigRat> out;
  for (auto [key, c] : counts) out[key] = BigRat(c, static_cast<std::uint64_t>(sols.size()));
  return out;
}

}  // namespace

TEST_CASE("free variable has marginal exactly 1/2") {
  const Formula f = make(3, 2, {{1, 2}});  // x2 in no clause
  const BlockLaw law = block_law(f, PartialAssignment(3), {2}, SIZE_MAX);
  REQUIRE(law.atoms.size() == 2);
  CHECK(law.atoms[0].second == BigRat(1, 2));
  CHECK(law.atoms[1].second == BigRat(1, 2));
}

TEST_CASE("single clause (x0 v x1): Pr(x0 -> T) = 2/3") {
  const Formula f = make(2, 2, {{1, 2}});
  const BlockLaw law = block_law(f, PartialAssignment(2), {0}, SIZE_MAX);
  REQUIRE(law.atoms.size() == 2);
  CHECK(law.atoms[0].second == BigRat(1, 3));  // x0 = F
  CHECK(law.atoms[1].second == BigRat(2, 3));  // x0 = T

  // empirical frequency over 1e5 draws within 3 sigma
  Rng rng(4);
  std::size_t t = 0;
  const std::size_t N = 100000;
  for (std::size_t i = 0; i < N; ++i) {
    const PartialAssignment out = sample_marginals(f, PartialAssignment(2), {0}, SIZE_MAX, rng);
    t += out.value(0) ? 1 : 0;
  }
  const double p = 2.0 / 3.0;
  const double sigma = std::sqrt(p * (1 - p) / N);
  CHECK(std::abs(static_cast<double>(t) / N - p) < 3 * sigma);
}

TEST_CASE("block law equals the brute-force restriction exactly (rational)") {
  Rng rng(11);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Var n = static_cast<Var>(6 + seed % 7);
    const unsigned k = 3 + seed % 2;
    const Formula f = generate_random(k, n, 1.0 + (seed % 4) * 0.6, seed + 300);
    PartialAssignment lam(n);
    // pin a few variables from a satisfying assignment so Omega^lam is nonempty
    std::vector<Var> vars;
    const auto sols = brute_enumerate(f, lam, vars);
    if (sols.empty()) continue;
    const std::uint64_t base = sols[rng.next_below(sols.size())];
    for (Var v = 0; v < n; ++v)
      if (rng.next_below(4) == 0) lam.set(v, (base >> v) & 1);

    std::vector<Var> S;
    for (Var v = 0; v < n; ++v)
      if (!lam.contains(v) && rng.next_below(2) == 0) S.push_back(v);
    if (S.empty()) continue;

    const BlockLaw law = block_law(f, lam, S, SIZE_MAX);
    const auto expected = brute_restriction(f, lam, law.vars);
    REQUIRE(law.atoms.size() == expected.size());
    BigRat total(0);
    for (const auto& [mask, prob] : law.atoms) {
      auto it = expected.find(mask);
      REQUIRE(it != expected.end());
      CHECK(prob == it->second);
      total += prob;
    }
    CHECK(total == 1);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("sampler determinism: same seed, same output") {
  const Formula f = generate_random(3, 14, 2.0, 5);
  std::vector<Var> vars;
  if (brute_enumerate(f, PartialAssignment(14), vars).empty()) return;
  std::vector<Var> S;
  for (Var v = 0; v < 14; ++v) S.push_back(v);
  Rng r1(123), r2(123);
  const auto a = sample_marginals(f, PartialAssignment(14), S, SIZE_MAX, r1);
  const auto b = sample_marginals(f, PartialAssignment(14), S, SIZE_MAX, r2);
  CHECK(a == b);
}

TEST_CASE("sampling all residual variables always yields satisfying assignments") {
  Rng rng(3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Var n = static_cast<Var>(8 + seed % 6);
    const Formula f = generate_random(3, n, 1.8, seed + 4000);
    std::vector<Var> vars;
    if (brute_enumerate(f, PartialAssignment(n), vars).empty()) continue;
    std::vector<Var> S;
    for (Var v = 0; v < n; ++v) S.push_back(v);
    for (int rep = 0; rep < 20; ++rep) {
      const PartialAssignment out = sample_marginals(f, PartialAssignment(n), S, SIZE_MAX, rng);
      CHECK(satisfies(f, out));
    }
  }
}

TEST_CASE("unsatisfiable residual raises") {
  const Formula f = make(1, 2, {{1, 1}, {-1, -1}});  // x0 and !x0
  CHECK_THROWS_AS(block_law(f, PartialAssignment(1), {0}, SIZE_MAX), UnsatisfiableResidual);
  Rng rng(1);
  CHECK_THROWS_AS(sample_marginals(f, PartialAssignment(1), {0}, SIZE_MAX, rng),
                  UnsatisfiableResidual);
}

TEST_CASE("component cap propagates as ComponentTooLarge") {
  const Formula f = make(4, 2, {{1, 2}, {2, 3}, {3, 4}});  // chain of 3 clauses
  Rng rng(1);
  CHECK_THROWS_AS(sample_marginals(f, PartialAssignment(4), {1}, 2, rng), ComponentTooLarge);
  const PartialAssignment out = sample_marginals(f, PartialAssignment(4), {1}, 3, rng);
  CHECK(out.domain_size() == 1);
}

TEST_CASE("S intersecting dom(lam) is rejected") {
  const Formula f = make(2, 2, {{1, 2}});
  PartialAssignment lam(2);
  lam.set(0, true);
  Rng rng(1);
  CHECK_THROWS_AS(sample_marginals(f, lam, {0}, SIZE_MAX, rng), DomainError);
}
