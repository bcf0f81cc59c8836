#include <doctest.h>

#include <cmath>
#include <map>

#include "desk_helpers.hpp"
#include "ksat/errors.hpp"
#include "ksat/glauber.hpp"
#include "ksat/oracle.hpp"

using namespace ksat;
using namespace ksat::testutil;

TEST_CASE("mixing_params match the formulas") {
  // rho = ceil(2^{-k-1} |V_m|)
  CHECK(mixing_params(3, 100, 16, 0.5, 1, 0.01).rho == 1);  // 16/16 = 1
  CHECK(mixing_params(3, 100, 33, 0.5, 1, 0.01).rho == 3);  // ceil(33/16)
  CHECK(mixing_params(4, 100, 1u << 5, 0.5, 1, 0.01).rho == 1);

  // T = ceil(2^{2k+3} n^theta ln(2n/eps^2)) at k=10, n=1e4, theta=0.5, eps=1e-4
  const MixingParams p = mixing_params(10, 10000, 5000, 0.5, 1, 1e-4);
  const double expect_t = std::ceil(std::exp2(23) * 100.0 * std::log(2e4 / 1e-8));
  CHECK(static_cast<double>(p.steps) == expect_t);

  // cap = ceil(2 k^4 (1+xi) ln n) at k=3, xi=1, n=1e3
  const MixingParams q = mixing_params(3, 1000, 100, 0.5, 1, 0.01);
  CHECK(q.component_cap == static_cast<std::uint64_t>(std::ceil(2.0 * 81.0 * 2.0 * std::log(1000.0))));
}

TEST_CASE("init_chain: fair coins per marked variable, deterministic per seed") {
  const Formula f = generate_random(3, 10, 0.01, 1);
  REQUIRE(f.num_clauses() == 0);
  std::vector<char> types(10, 'A');
  for (Var v = 0; v < 6; ++v) types[v] = 'M';
  const Marking marking = Marking::from_types(types);

  GlauberConfig cfg;
  cfg.mode = GlauberConfig::Mode::Desk;
  cfg.steps_override = 1;
  cfg.verify_r.reset();
  GlauberChain chain(f, marking, cfg);

  std::map<Var, std::size_t> trues;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(t) + 1000);
    chain.init(rng);
    const PartialAssignment st = chain.marked_state();
    CHECK(st.domain_size() == 6);
    for (Var v = 0; v < 6; ++v) trues[v] += st.value(v) ? 1 : 0;
  }
  const double sigma = std::sqrt(0.25 / trials);
  for (Var v = 0; v < 6; ++v)
    CHECK(std::abs(trues[v] / static_cast<double>(trials) - 0.5) < 4 * sigma);

  Rng r1(7), r2(7);
  chain.init(r1);
  const PartialAssignment a = chain.marked_state();
  chain.init(r2);
  CHECK(a == chain.marked_state());

  // empty marked set: empty assignment
  const Marking none = Marking::from_types(std::vector<char>(10, 'C'));
  GlauberChain empty_chain(f, none, cfg);
  Rng r3(1);
  empty_chain.init(r3);
  CHECK(empty_chain.marked_state().domain_size() == 0);
}

TEST_CASE("zero-clause formula: chain marginals stay uniform") {
  const Formula f = generate_random(3, 8, 0.01, 1);
  std::vector<char> types(8, 'C');
  for (Var v = 0; v < 5; ++v) types[v] = 'M';
  const Marking marking = Marking::from_types(types);
  GlauberConfig cfg;
  cfg.mode = GlauberConfig::Mode::Desk;
  cfg.steps_override = 5;
  cfg.rho_override = 2;
  cfg.verify_r.reset();
  GlauberChain chain(f, marking, cfg);
  std::size_t trues = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(t));
    chain.init(rng);
    for (int s = 0; s < 5; ++s) chain.step(rng);
    const PartialAssignment st = chain.marked_state();
    for (Var v = 0; v < 5; ++v) trues += st.value(v) ? 1 : 0;
  }
  const double p = static_cast<double>(trues) / (5.0 * trials);
  CHECK(std::abs(p - 0.5) < 4 * std::sqrt(0.25 / (5.0 * trials)));
}

TEST_CASE("rho = |V_m|: one step samples the marked marginal exactly") {
  DeskSpec spec;
  spec.max_marked = 6;
  const auto instances = desk_instances(spec, 1, 30);
  REQUIRE(instances.size() == 1);
  const DeskInstance& inst = instances[0];

  GlauberConfig cfg;
  cfg.mode = GlauberConfig::Mode::Desk;
  cfg.rho_override = inst.marking.marked.size();
  cfg.steps_override = 1;
  cfg.verify_r = inst.desk_r;

  // chi-square of the one-step state against the exact marked marginal
  const std::size_t states = std::size_t{1} << inst.marking.marked.size();
  std::vector<double> counts(states, 0.0);
  const int trials = 40000;
  GlauberChain chain(inst.f, inst.marking, cfg);
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(t) * 17 + 3);
    chain.init(rng);
    chain.step(rng);
    const PartialAssignment st = chain.marked_state();
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < inst.marking.marked.size(); ++i)
      key |= static_cast<std::uint64_t>(st.value(inst.marking.marked[i])) << i;
    counts[key] += 1.0;
  }
  double chi2 = 0;
  int dof = 0;
  for (std::size_t s = 0; s < states; ++s) {
    const double expect = inst.marked_marginal[s] * trials;
    REQUIRE(expect > 0);
    chi2 += (counts[s] - expect) * (counts[s] - expect) / expect;
    ++dof;
  }
  // 0.9999 chi-square quantile at dof-1 <= 63: generous bound 2*dof + 40
  CHECK(chi2 < 2.0 * dof + 40.0);
}

TEST_CASE("single-step kernel matches the exact block law (|V_m|=3, rho=1)") {
  DeskSpec spec;
  spec.min_marked = 3;
  spec.max_marked = 3;
  const auto instances = desk_instances(spec, 1, 200);
  REQUIRE(instances.size() == 1);
  const DeskInstance& inst = instances[0];
  const auto& marked = inst.marking.marked;

  // Exact kernel row via the engine's block law against the brute-force
  // conditional oracle, for every start state and update site.
  const std::size_t states = 8;
  for (std::uint64_t x = 0; x < states; ++x) {
    std::map<std::uint64_t, double> kernel;  // P(x -> y) = (1/3) sum_v law_{v,x}(y_v)
    for (std::size_t i = 0; i < 3; ++i) {
      PartialAssignment lam(inst.f.num_vars());
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) lam.set(marked[j], (x >> j) & 1);
      const BlockLaw law = block_law(inst.f, lam, {marked[i]}, SIZE_MAX);
      for (const auto& [mask, prob] : law.atoms) {
        std::uint64_t y = x & ~(1ull << i);
        if (mask & 1) y |= 1ull << i;
        kernel[y] += static_cast<double>(prob) / 3.0;
      }
    }
    // oracle kernel row from brute-force conditionals
    std::map<std::uint64_t, double> oracle;
    for (std::size_t i = 0; i < 3; ++i) {
      double denom = 0;
      for (int b = 0; b < 2; ++b) {
        const std::uint64_t y = (x & ~(1ull << i)) | (static_cast<std::uint64_t>(b) << i);
        denom += inst.marked_marginal[y];
      }
      REQUIRE(denom > 0);
      for (int b = 0; b < 2; ++b) {
        const std::uint64_t y = (x & ~(1ull << i)) | (static_cast<std::uint64_t>(b) << i);
        oracle[y] += inst.marked_marginal[y] / denom / 3.0;
      }
    }
    for (const auto& [y, p] : oracle) CHECK(kernel[y] == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("run: ok outputs satisfy the formula; seeds reproduce") {
  DeskSpec spec;
  const auto instances = desk_instances(spec, 2, 40);
  REQUIRE(instances.size() == 2);
  for (const auto& inst : instances) {
    GlauberConfig cfg;
    cfg.mode = GlauberConfig::Mode::Desk;
    cfg.steps_override = 12;
    cfg.rho_override = std::max<std::uint64_t>(1, inst.marking.marked.size() / 3);
    cfg.verify_r = inst.desk_r;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      cfg.seed = seed;
      const RunOutput out = run_sampler(inst.f, inst.cls, inst.marking, cfg);
      REQUIRE(out.report.status == "ok");
      REQUIRE(out.assignment.has_value());
      CHECK(out.assignment->domain_size() == inst.f.num_vars());
      CHECK(satisfies(inst.f, *out.assignment));
      const RunOutput again = run_sampler(inst.f, inst.cls, inst.marking, cfg);
      CHECK(*again.assignment == *out.assignment);
    }
  }
}

TEST_CASE("run rejects invalid markings and reports cap errors") {
  // k=5 clause over distinct vars; all-control marking fails r(k-3) = 0.8.
  std::vector<Lit> slots;
  for (Var v = 0; v < 5; ++v) slots.push_back(Lit::make(v, false));
  const Formula f(5, 5, std::move(slots));
  ClassifierParams cp;
  cp.override_Delta = 100;
  const Classification cls = classify(f, cp);
  const Marking broken = Marking::from_types(std::vector<char>(5, 'C'));
  GlauberConfig cfg;
  cfg.mode = GlauberConfig::Mode::Desk;
  cfg.steps_override = 3;
  cfg.verify_r = 0.4;
  const RunOutput out = run_sampler(f, cls, broken, cfg);
  CHECK(out.report.status == "error");
  CHECK(!out.assignment.has_value());

  // component cap 0 forces ComponentTooLarge -> error status, no assignment
  DeskSpec spec;
  const auto instances = desk_instances(spec, 1, 40);
  REQUIRE(instances.size() == 1);
  const DeskInstance& inst = instances[0];
  GlauberConfig tiny;
  tiny.mode = GlauberConfig::Mode::Desk;
  tiny.steps_override = 3;
  tiny.cap_override = 0;
  tiny.verify_r = inst.desk_r;
  const RunOutput err = run_sampler(inst.f, inst.cls, inst.marking, tiny);
  CHECK(err.report.status == "error");
  CHECK(!err.assignment.has_value());
}

TEST_CASE("empirical TV of full runs against uniform-over-solutions") {
  DeskSpec spec;
  spec.min_solutions = 6;
  spec.max_solutions = 60;
  const auto instances = desk_instances(spec, 1, 60);
  REQUIRE(instances.size() == 1);
  const DeskInstance& inst = instances[0];

  GlauberConfig cfg;
  cfg.mode = GlauberConfig::Mode::Desk;
  cfg.steps_override = 24;
  cfg.rho_override = std::max<std::uint64_t>(1, inst.marking.marked.size() / 3);
  cfg.verify_r = inst.desk_r;

  std::vector<Var> vars;
  PartialAssignment empty(inst.f.num_vars());
  const auto sols = brute_enumerate(inst.f, empty, vars);
  const auto exact = ExactDistribution::uniform_over(sols, static_cast<unsigned>(vars.size()));

  std::map<std::uint64_t, std::uint64_t> hist;
  const std::uint64_t runs = 20000;
  GlauberChain chain(inst.f, inst.marking, cfg);
  for (std::uint64_t rsee = 0; rsee < runs; ++rsee) {
    Rng rng(rsee * 1000003 + 5);
    chain.init(rng);
    for (std::uint64_t t = 0; t < 24; ++t) chain.step(rng);
    const PartialAssignment full = chain.extend_to_full(rng);
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (full.value(vars[i])) mask |= 1ull << i;
    hist[mask]++;
  }
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> hvec(hist.begin(), hist.end());
  const TVReport tv = tv_empirical(exact, hvec);
  CHECK(tv.tv < 0.05);
}
