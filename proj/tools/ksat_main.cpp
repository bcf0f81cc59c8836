// Command-line front end: generate / classify / mark / count / sample /
// couple / verify / analyze subcommands over DIMACS CNF files.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ksat/analysis.hpp"
#include "ksat/classify.hpp"
#include "ksat/counting.hpp"
#include "ksat/coupling.hpp"
#include "ksat/errors.hpp"
#include "ksat/formula.hpp"
#include "ksat/glauber.hpp"
#include "ksat/marking.hpp"
#include "ksat/oracle.hpp"
#include "ksat/sampling.hpp"

using json = nlohmann::json;

namespace {

ksat::Formula load_formula(const std::string& path, std::vector<char>* marks = nullptr) {
  std::ifstream in(path);
  if (!in) throw ksat::MalformedInput("cannot open " + path);
  return ksat::read_dimacs(in, marks);
}

ksat::PartialAssignment load_partial(const std::string& path, ksat::Var n) {
  std::ifstream in(path);
  if (!in) throw ksat::MalformedInput("cannot open " + path);
  return ksat::read_partial(in, n);
}

// Marking from `c mark` comments when present, otherwise computed fresh.
ksat::Marking marking_for(const ksat::Formula& f, const std::vector<char>& tags,
                          const ksat::Classification& cls, const ksat::MarkingParams& mp) {
  bool have_tags = !tags.empty();
  for (char t : tags)
    if (t == '\0') have_tags = false;
  if (have_tags) return ksat::marking_from_comment_tags(tags);
  return ksat::compute_marking(f, cls, mp);
}

json degree_histogram(const std::vector<std::uint32_t>& degree) {
  std::map<std::uint32_t, std::size_t> hist;
  for (std::uint32_t d : degree) hist[d]++;
  json out = json::object();
  for (auto [d, cnt] : hist) out[std::to_string(d)] = cnt;
  return out;
}

int cmd_generate(unsigned k, ksat::Var n, double alpha, std::uint64_t seed,
                 const std::string& out_path) {
  const ksat::Formula f = ksat::generate_random(k, n, alpha, seed);
  if (out_path.empty()) {
    ksat::write_dimacs(f, std::cout);
  } else {
    std::ofstream out(out_path);
    ksat::write_dimacs(f, out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random k-CNF sampling toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a random k-CNF instance");
  unsigned g_k = 3;
  ksat::Var g_n = 100;
  double g_alpha = 1.0;
  std::uint64_t g_seed = 0;
  std::string g_out;
  gen->add_option("--k", g_k, "clause width")->required();
  gen->add_option("--n", g_n, "variable count")->required();
  gen->add_option("--alpha", g_alpha, "density m/n")->required();
  gen->add_option("--seed", g_seed, "rng seed")->required();
  gen->add_option("--out", g_out, "output file (stdout when absent)");

  // classify
  auto* cla = app.add_subcommand("classify", "bad/good variables and clauses");
  std::string c_file;
  std::optional<std::uint32_t> c_delta;
  bool c_json = false;
  cla->add_option("file", c_file, "DIMACS CNF input")->required();
  cla->add_option("--delta-override", c_delta, "degree threshold override");
  cla->add_flag("--json", c_json, "JSON output");

  // mark
  auto* mrk = app.add_subcommand("mark", "compute an r-marking");
  std::string m_file, m_out;
  double m_r = 0.117841, m_bm = 0.2855135, m_ba = 0.2855135;
  std::uint64_t m_seed = 0;
  std::optional<std::uint32_t> m_delta;
  bool m_json = false;
  mrk->add_option("file", m_file)->required();
  mrk->add_option("--r", m_r, "distribution constant");
  mrk->add_option("--beta-marked", m_bm);
  mrk->add_option("--beta-aux", m_ba);
  mrk->add_option("--seed", m_seed);
  mrk->add_option("--delta-override", m_delta, "degree threshold override");
  mrk->add_option("--out", m_out, "write CNF with mark comments here");
  mrk->add_flag("--json", m_json);

  // count
  auto* cnt = app.add_subcommand("count", "exact model count of Phi^Lambda");
  std::string n_file, n_assign;
  bool n_json = false;
  cnt->add_option("file", n_file)->required();
  cnt->add_option("--assign", n_assign, "partial assignment file (v <idx> <0|1>)");
  cnt->add_flag("--json", n_json);

  // sample
  auto* smp = app.add_subcommand("sample", "block Glauber sampler");
  std::string s_file;
  double s_theta = 0.5;
  std::uint32_t s_xi = 1;
  std::uint64_t s_seed = 0, s_runs = 1;
  bool s_desk = false, s_json = false;
  std::optional<std::uint64_t> s_rho, s_steps, s_cap;
  double s_r = 0.117841, s_bm = 0.2855135, s_ba = 0.2855135;
  std::optional<std::uint32_t> s_delta;
  smp->add_option("file", s_file)->required();
  smp->add_option("--theta", s_theta);
  smp->add_option("--xi", s_xi);
  smp->add_option("--seed", s_seed);
  smp->add_option("--runs", s_runs);
  smp->add_flag("--mode-desk,--desk", s_desk, "desk mode (enables overrides)");
  smp->add_option("--rho", s_rho);
  smp->add_option("--steps", s_steps);
  smp->add_option("--cap", s_cap);
  smp->add_option("--r", s_r, "marking verification constant");
  smp->add_option("--beta-marked", s_bm);
  smp->add_option("--beta-aux", s_ba);
  smp->add_option("--delta-override", s_delta);
  smp->add_flag("--json", s_json);

  // couple
  auto* cpl = app.add_subcommand("couple", "coupling process on auxiliary variables");
  std::string p_file, p_pin;
  ksat::Var p_u = 0;
  std::uint64_t p_runs = 1, p_seed = 0;
  double p_r = 0.117841, p_bm = 0.2855135, p_ba = 0.2855135;
  std::optional<std::uint32_t> p_delta;
  bool p_json = false;
  cpl->add_option("file", p_file)->required();
  cpl->add_option("--u", p_u, "marked root variable")->required();
  cpl->add_option("--pin", p_pin, "pinning of marked variables");
  cpl->add_option("--runs", p_runs);
  cpl->add_option("--seed", p_seed);
  cpl->add_option("--r", p_r);
  cpl->add_option("--beta-marked", p_bm);
  cpl->add_option("--beta-aux", p_ba);
  cpl->add_option("--delta-override", p_delta);
  cpl->add_flag("--json", p_json);

  // verify
  auto* ver = app.add_subcommand("verify", "oracle suites");
  std::string v_file, v_suite = "count";
  std::uint64_t v_rho = 1, v_seed = 0;
  double v_r = 0.117841, v_bm = 0.2855135, v_ba = 0.2855135;
  std::optional<std::uint32_t> v_delta;
  bool v_json = false;
  ver->add_option("file", v_file)->required();
  ver->add_option("--suite", v_suite, "count|stationarity|tv|spectral")->required();
  ver->add_option("--rho", v_rho);
  ver->add_option("--seed", v_seed);
  ver->add_option("--r", v_r);
  ver->add_option("--beta-marked", v_bm);
  ver->add_option("--beta-aux", v_ba);
  ver->add_option("--delta-override", v_delta);
  ver->add_flag("--json", v_json);

  // analyze
  auto* ana = app.add_subcommand("analyze", "structural experiments");
  std::string a_exp;
  unsigned a_k = 10;
  std::vector<ksat::Var> a_ns{1000};
  double a_alpha = 1.0, a_theta = 0.2;
  std::uint64_t a_seeds = 20, a_seed0 = 1, a_rho = 0;
  std::optional<std::uint32_t> a_delta;
  double a_r = 0.1178;
  bool a_csv = false;
  ana->add_option("--experiment", a_exp, "tree-excess|linearity|bad-fraction|pinning|scaling|z0")
      ->required();
  ana->add_option("--k", a_k);
  ana->add_option("--n", a_ns, "one or more n values");
  ana->add_option("--alpha", a_alpha);
  ana->add_option("--theta", a_theta);
  ana->add_option("--seeds", a_seeds);
  ana->add_option("--seed0", a_seed0);
  ana->add_option("--rho", a_rho, "pinning experiment block size");
  ana->add_option("--delta-override", a_delta);
  ana->add_option("--r", a_r, "marking constant for desk pipelines");
  ana->add_flag("--csv", a_csv, "flat CSV instead of JSON where supported");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(g_k, g_n, g_alpha, g_seed, g_out);

    if (*cla) {
      const ksat::Formula f = load_formula(c_file);
      ksat::ClassifierParams params;
      params.override_Delta = c_delta;
      const ksat::Classification cls = ksat::classify(f, params);
      json out{{"schema", "ksat/classify/1"},
               {"n", f.num_vars()},
               {"m", f.num_clauses()},
               {"k", f.width()},
               {"Delta", cls.Delta},
               {"bad_var_count", cls.num_bad_vars},
               {"bad_clause_count", cls.num_bad_clauses},
               {"max_degree",
                cls.degree.empty() ? 0u : *std::max_element(cls.degree.begin(), cls.degree.end())},
               {"histogram", degree_histogram(cls.degree)}};
      std::cout << (c_json ? out.dump() : out.dump(2)) << '\n';
      return 0;
    }

    if (*mrk) {
      const ksat::Formula f = load_formula(m_file);
      ksat::ClassifierParams cp;
      cp.override_Delta = m_delta;
      const ksat::Classification cls = ksat::classify(f, cp);
      ksat::MarkingParams mp;
      mp.r = m_r;
      mp.beta_marked = m_bm;
      mp.beta_aux = m_ba;
      mp.seed = m_seed;
      const ksat::FeasibilityReport feas = ksat::check_feasibility(mp, f.width());
      const ksat::Marking marking = ksat::compute_marking(f, cls, mp);
      const ksat::MarkingCheck check = ksat::verify_marking(f, cls, marking, m_r);
      json out{{"schema", "ksat/mark/1"},
               {"marked", marking.marked.size()},
               {"auxiliary", marking.auxiliary.size()},
               {"control", marking.control.size()},
               {"resample_rounds", marking.resample_rounds},
               {"verified", check.ok},
               {"feasibility",
                {{"marked_ok", feas.marked_ok},
                 {"aux_ok", feas.aux_ok},
                 {"control_ok", feas.control_ok},
                 {"marked_margin", feas.marked_margin},
                 {"aux_margin", feas.aux_margin},
                 {"control_margin", feas.control_margin}}}};
      if (!m_out.empty()) {
        std::ofstream os(m_out);
        ksat::write_dimacs(f, os);
        os << ksat::marking_comment_lines(marking);
      }
      std::cout << (m_json ? out.dump() : out.dump(2)) << '\n';
      return 0;
    }

    if (*cnt) {
      const ksat::Formula f = load_formula(n_file);
      ksat::PartialAssignment lam(f.num_vars());
      if (!n_assign.empty()) lam = load_partial(n_assign, f.num_vars());
      const ksat::CountResult r = ksat::count_formula(f, lam);
      json out{{"schema", "ksat/count/1"},
               {"count", r.count.str()},
               {"pinned", lam.domain_size()},
               {"n", f.num_vars()}};
      std::cout << (n_json ? out.dump() : out.dump(2)) << '\n';
      return 0;
    }

    if (*smp) {
      std::vector<char> tags;
      const ksat::Formula f = load_formula(s_file, &tags);
      ksat::ClassifierParams cp;
      cp.override_Delta = s_delta;
      const ksat::Classification cls = ksat::classify(f, cp);
      ksat::MarkingParams mp;
      mp.r = s_r;
      mp.beta_marked = s_bm;
      mp.beta_aux = s_ba;
      mp.seed = s_seed + 0x517cc1b727220a95ull;
      const ksat::Marking marking = marking_for(f, tags, cls, mp);
      json runs = json::array();
      for (std::uint64_t r = 0; r < s_runs; ++r) {
        ksat::GlauberConfig cfg;
        cfg.theta = s_theta;
        cfg.xi = s_xi;
        cfg.seed = s_seed + r;
        cfg.mode = s_desk ? ksat::GlauberConfig::Mode::Desk : ksat::GlauberConfig::Mode::Theory;
        cfg.rho_override = s_rho;
        cfg.steps_override = s_steps;
        cfg.cap_override = s_cap;
        cfg.verify_r = s_r;
        const ksat::RunOutput out = ksat::run_sampler(f, cls, marking, cfg);
        json rep{{"status", out.report.status},
                 {"error", out.report.error},
                 {"steps", out.report.steps_executed},
                 {"rho", out.report.params.rho},
                 {"T", out.report.params.steps},
                 {"cap", out.report.params.component_cap},
                 {"max_component", out.report.max_component},
                 {"retries", out.report.retries_used},
                 {"wall_ms", out.report.wall_ms},
                 {"seed", out.report.seed}};
        if (out.assignment && out.report.status == "ok") {
          std::string lines;
          for (ksat::Var v = 0; v < f.num_vars(); ++v)
            lines += "v " + std::to_string(v) + ' ' +
                     std::to_string(out.assignment->value(v) ? 1 : 0) + '\n';
          rep["satisfies"] = ksat::satisfies(f, *out.assignment);
          if (!s_json) std::cout << lines;
        }
        runs.push_back(rep);
      }
      json out{{"schema", "ksat/sample/1"}, {"runs", runs}};
      std::cout << (s_json ? out.dump() : out.dump(2)) << '\n';
      return 0;
    }

    if (*cpl) {
      std::vector<char> tags;
      const ksat::Formula f = load_formula(p_file, &tags);
      ksat::ClassifierParams cp;
      cp.override_Delta = p_delta;
      const ksat::Classification cls = ksat::classify(f, cp);
      ksat::MarkingParams mp;
      mp.r = p_r;
      mp.beta_marked = p_bm;
      mp.beta_aux = p_ba;
      mp.seed = p_seed + 0x9e3779b97f4a7c15ull;
      const ksat::Marking marking = marking_for(f, tags, cls, mp);
      ksat::PartialAssignment lam(f.num_vars());
      if (!p_pin.empty()) lam = load_partial(p_pin, f.num_vars());
      const ksat::InfluenceSumReport rep =
          ksat::influence_sum_estimate(f, cls, marking, p_u, lam, p_runs, p_seed);
      json per_v = json::array();
      for (const auto& e : rep.per_var)
        per_v.push_back({{"v", e.v}, {"estimate", e.estimate}, {"std_error", e.std_error}});
      json out{{"schema", "ksat/couple/1"},
               {"u", p_u},
               {"runs", rep.runs},
               {"sum_disagreement", rep.sum_disagreement},
               {"sum_std_error", rep.sum_std_error},
               {"mean_failed_clauses", rep.mean_failed_clauses},
               {"per_v", per_v}};
      std::cout << (p_json ? out.dump() : out.dump(2)) << '\n';
      return 0;
    }

    if (*ver) {
      std::vector<char> tags;
      const ksat::Formula f = load_formula(v_file, &tags);
      ksat::ClassifierParams cp;
      cp.override_Delta = v_delta;
      const ksat::Classification cls = ksat::classify(f, cp);
      json out{{"schema", "ksat/verify/1"}, {"suite", v_suite}};
      if (v_suite == "count") {
        ksat::PartialAssignment lam(f.num_vars());
        out["engine_count"] = ksat::count_formula(f, lam).count.str();
        out["brute_count"] = ksat::brute_count(f, lam).str();
        out["match"] = out["engine_count"] == out["brute_count"];
      } else {
        ksat::MarkingParams mp;
        mp.r = v_r;
        mp.beta_marked = v_bm;
        mp.beta_aux = v_ba;
        mp.seed = v_seed + 1;
        const ksat::Marking marking = marking_for(f, tags, cls, mp);
        if (v_suite == "stationarity") {
          out["rho"] = v_rho;
          out["residual"] = ksat::stationarity_check(f, marking, v_rho);
          out["pass"] = double(out["residual"]) <= 1e-10;
        } else if (v_suite == "spectral") {
          const ksat::SpectralReport rep =
              ksat::spectral_check(f, marking, ksat::PartialAssignment(f.num_vars()));
          out["lambda1"] = rep.lambda1;
          out["max_row_sum"] = rep.max_row_sum;
          out["dim"] = rep.dim;
          out["pass"] = rep.lambda1 <= rep.max_row_sum + 1e-7;
          out["si_target"] = std::exp2(-0.117841 * f.width()) *
                             std::log(static_cast<double>(f.num_vars()));
        } else if (v_suite == "tv") {
          // empirical TV of full desk runs against uniform over solutions
          std::vector<ksat::Var> vars;
          const auto sols =
              ksat::brute_enumerate(f, ksat::PartialAssignment(f.num_vars()), vars);
          if (sols.empty()) throw ksat::DomainError("unsatisfiable instance");
          const auto exact = ksat::ExactDistribution::uniform_over(
              sols, static_cast<unsigned>(vars.size()));
          std::map<std::uint64_t, std::uint64_t> hist;
          const std::uint64_t runs = 20000;
          for (std::uint64_t r = 0; r < runs; ++r) {
            ksat::GlauberConfig cfg;
            cfg.mode = ksat::GlauberConfig::Mode::Desk;
            cfg.steps_override = 32;
            cfg.rho_override = std::max<std::uint64_t>(1, marking.marked.size() / 3);
            cfg.seed = v_seed * runs + r;
            cfg.verify_r = v_r;
            const ksat::RunOutput res = ksat::run_sampler(f, cls, marking, cfg);
            if (res.report.status != "ok") continue;
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < vars.size(); ++i)
              if (res.assignment->value(vars[i])) mask |= 1ull << i;
            hist[mask]++;
          }
          std::vector<std::pair<std::uint64_t, std::uint64_t>> hvec(hist.begin(), hist.end());
          const ksat::TVReport tv = ksat::tv_empirical(exact, hvec);
          out["tv"] = tv.tv;
          out["radius"] = tv.radius;
          out["samples"] = tv.samples;
          out["solutions"] = sols.size();
        } else {
          throw ksat::DomainError("unknown suite " + v_suite);
        }
      }
      std::cout << (v_json ? out.dump() : out.dump(2)) << '\n';
      return 0;
    }

    if (*ana) {
      ksat::ExperimentParams p;
      p.k = a_k;
      p.alpha = a_alpha;
      p.num_seeds = a_seeds;
      p.seed0 = a_seed0;
      p.delta_override = a_delta;
      p.marking_r = a_r;
      json out;
      if (a_exp == "linearity") {
        out = ksat::linearity_experiment(a_ns, p);
      } else if (a_exp == "tree-excess") {
        out = ksat::tree_excess_experiment(a_ns.at(0), p);
      } else if (a_exp == "bad-fraction") {
        out = ksat::bad_fraction_experiment(a_ns.at(0), p);
      } else if (a_exp == "pinning") {
        const ksat::Formula f = ksat::generate_random(a_k, a_ns.at(0), a_alpha, a_seed0);
        ksat::ClassifierParams cp;
        cp.override_Delta = a_delta;
        const ksat::Classification cls = ksat::classify(f, cp);
        ksat::MarkingParams mp;
        mp.r = a_r;
        mp.seed = a_seed0;
        const ksat::Marking marking = ksat::compute_marking(f, cls, mp);
        const std::uint64_t rho =
            a_rho > 0 ? a_rho
                      : std::max<std::uint64_t>(
                            1, static_cast<std::uint64_t>(marking.marked.size()) >> (a_k + 1));
        out = ksat::pinning_experiment(f, marking.marked, rho, a_seeds, a_seed0 + 99);
      } else if (a_exp == "scaling") {
        out = ksat::scaling_bench(a_ns, p, a_theta);
      } else if (a_exp == "z0") {
        const ksat::Formula f = ksat::generate_random(a_k, a_ns.at(0), a_alpha, a_seed0);
        ksat::ClassifierParams cp;
        cp.override_Delta = a_delta;
        const ksat::Classification cls = ksat::classify(f, cp);
        out = json{{"schema", "ksat/z0/1"},
                   {"bad_vars", cls.num_bad_vars},
                   {"bad_clauses", cls.num_bad_clauses},
                   {"z0", ksat::count_bad_formula(f, cls).count.str()}};
      } else {
        throw ksat::DomainError("unknown experiment " + a_exp);
      }
      if (a_csv && out.contains("per_n")) {
        for (const auto& row : out["per_n"]) {
          bool first = true;
          for (auto it = row.begin(); it != row.end(); ++it) {
            if (!first) std::cout << ',';
            std::cout << it.value();
            first = false;
          }
          std::cout << '\n';
        }
      } else {
        std::cout << out.dump(2) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
