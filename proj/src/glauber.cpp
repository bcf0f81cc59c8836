#include "ksat/glauber.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ksat/errors.hpp"

namespace ksat {

MixingParams mixing_params(unsigned k, Var n, std::size_t marked_count, double theta,
                           std::uint32_t xi, double epsilon) {
  MixingParams p;
  p.rho = static_cast<std::uint64_t>(
      std::ceil(std::exp2(-(static_cast<double>(k) + 1.0)) * static_cast<double>(marked_count)));
  if (marked_count > 0 && p.rho == 0) p.rho = 1;
  const long double t =
      std::ceil(std::exp2(2.0L * k + 3.0L) * std::pow(static_cast<long double>(n), static_cast<long double>(theta)) *
                std::log(2.0L * n / (static_cast<long double>(epsilon) * epsilon)));
  p.steps = static_cast<std::uint64_t>(t);
  const double k4 = static_cast<double>(k) * k * k * k;
  p.component_cap =
      static_cast<std::uint64_t>(std::ceil(2.0 * k4 * (1.0 + xi) * std::log(static_cast<double>(n))));
  return p;
}

GlauberChain::GlauberChain(const Formula& f, const Marking& marking, const GlauberConfig& cfg)
    : f_(f), marking_(marking), cfg_(cfg), idx_(f) {
  const double eps = cfg.epsilon ? *cfg.epsilon
                                 : std::pow(static_cast<double>(f.num_vars()),
                                            -static_cast<double>(cfg.xi));
  params_ = mixing_params(f.width(), f.num_vars(), marking.marked.size(), cfg.theta, cfg.xi, eps);
  if (cfg.mode == GlauberConfig::Mode::Desk) {
    if (cfg.rho_override) params_.rho = *cfg.rho_override;
    if (cfg.steps_override) params_.steps = *cfg.steps_override;
    if (cfg.cap_override) params_.component_cap = *cfg.cap_override;
  }
  if (!marking.marked.empty() &&
      (params_.rho < 1 || params_.rho > marking.marked.size()))
    throw DomainError("rho must satisfy 1 <= rho <= |V_m|");
  lim_.max_cycle_vars = cfg.max_cycle_vars;
  perm_ = marking.marked;
}

void GlauberChain::init(Rng& rng) {
  for (Var v : marking_.marked) {
    if (idx_.pinned(v)) idx_.unpin(v);
    idx_.pin(v, rng.next_bool());
  }
  t_ = 0;
}

void GlauberChain::step(Rng& rng, RunReport* report) {
  if (marking_.marked.empty()) {
    ++t_;
    return;
  }
  const std::size_t rho = static_cast<std::size_t>(params_.rho);
  std::uint32_t attempts_left = cfg_.mode == GlauberConfig::Mode::Desk ? cfg_.desk_retries : 0;
  std::vector<bool> old_values;
  for (;;) {
    // Uniform rho-subset via partial Fisher-Yates on the persistent array.
    for (std::size_t i = 0; i < rho; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.next_below(perm_.size() - i));
      std::swap(perm_[i], perm_[j]);
    }
    block_.assign(perm_.begin(), perm_.begin() + rho);
    std::sort(block_.begin(), block_.end());
    old_values.clear();
    for (Var v : block_) {
      old_values.push_back(idx_.pin_value(v));
      idx_.unpin(v);
    }

    sampled_.clear();
    SampleStats stats;
    try {
      sample_on_index(idx_, block_, params_.component_cap, rng, scratch_.get(), lim_, sampled_,
                      &stats);
    } catch (const ComponentTooLarge&) {
      // Restore X_{t-1} exactly, then either abort (theory contract) or
      // retry the step with a fresh block (desk deviation, flagged).
      for (auto [v, value] : sampled_) idx_.unpin(v);
      for (std::size_t i = 0; i < block_.size(); ++i) idx_.pin(block_[i], old_values[i]);
      if (attempts_left == 0) throw;
      --attempts_left;
      if (report) report->retries_used++;
      continue;
    }
    if (report) {
      report->max_component = std::max(report->max_component, stats.max_component);
      if (cfg_.record_steps)
        report->per_step_max_component.push_back(static_cast<std::uint32_t>(stats.max_component));
    }
    break;
  }
  ++t_;
}

PartialAssignment GlauberChain::extend_to_full(Rng& rng, RunReport* report) {
  std::vector<Var> rest;
  rest.reserve(marking_.auxiliary.size() + marking_.control.size());
  for (Var v = 0; v < f_.num_vars(); ++v)
    if (!marking_.is_marked(v)) rest.push_back(v);
  sampled_.clear();
  SampleStats stats;
  sample_on_index(idx_, rest, params_.component_cap, rng, scratch_.get(), lim_, sampled_, &stats);
  if (report) report->max_component = std::max(report->max_component, stats.max_component);
  PartialAssignment full = idx_.to_assignment();
  for (auto [v, value] : sampled_) idx_.unpin(v);  // keep the chain reusable
  return full;
}

PartialAssignment GlauberChain::marked_state() const {
  PartialAssignment a(f_.num_vars());
  for (Var v : marking_.marked) a.set(v, idx_.pin_value(v));
  return a;
}

RunOutput run_sampler(const Formula& f, const Classification& cls, const Marking& marking,
                      const GlauberConfig& cfg) {
  RunOutput out;
  out.report.seed = cfg.seed;
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    out.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    if (cfg.verify_r) {
      const MarkingCheck check = verify_marking(f, cls, marking, *cfg.verify_r);
      if (!check.ok)
        throw MarkingInvalid(std::to_string(check.violations.size()) + " violated constraints");
    }
    GlauberChain chain(f, marking, cfg);
    out.report.params = chain.params();
    Rng rng(cfg.seed);
    chain.init(rng);
    for (std::uint64_t t = 0; t < chain.params().steps; ++t) {
      chain.step(rng, &out.report);
      out.report.steps_executed = t + 1;
    }
    out.assignment = chain.extend_to_full(rng, &out.report);
  } catch (const std::exception& e) {
    out.report.status = "error";
    out.report.error = e.what();
    out.assignment.reset();
  }
  finish();
  return out;
}

}  // namespace ksat
