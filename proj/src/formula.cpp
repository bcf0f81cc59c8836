#include "ksat/formula.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ksat/errors.hpp"

namespace ksat {

Formula::Formula(Var n, unsigned k, std::vector<Lit> slots) : n_(n), k_(k), slots_(std::move(slots)) {
  if (k_ == 0) throw DomainError("clause width k must be >= 1");
  if (slots_.size() % k_ != 0) throw DomainError("literal count not a multiple of k");
  const std::size_t m = slots_.size() / k_;
  for (const Lit& l : slots_)
    if (l.var() >= n_) throw DomainError("literal variable out of range");

  // Distinct variables per clause, preserving first-occurrence order.
  dvar_off_.assign(m + 1, 0);
  dvars_.reserve(slots_.size());
  dpol_.reserve(slots_.size());
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t begin = dvars_.size();
    for (unsigned j = 0; j < k_; ++j) {
      const Lit l = slots_[c * k_ + j];
      std::size_t hit = begin;
      while (hit < dvars_.size() && dvars_[hit] != l.var()) ++hit;
      const std::uint8_t pol = l.negated() ? kPolNeg : kPolPos;
      if (hit == dvars_.size()) {
        dvars_.push_back(l.var());
        dpol_.push_back(pol);
      } else {
        dpol_[hit] |= pol;
      }
    }
    dvar_off_[c + 1] = static_cast<std::uint32_t>(dvars_.size());
  }

  inc_off_.assign(n_ + 1, 0);
  for (Var v : dvars_) inc_off_[v + 1]++;
  for (Var v = 0; v < n_; ++v) inc_off_[v + 1] += inc_off_[v];
  inc_.resize(dvars_.size());
  inc_pol_.resize(dvars_.size());
  std::vector<std::uint32_t> cursor(inc_off_.begin(), inc_off_.end() - 1);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::uint32_t i = dvar_off_[c]; i < dvar_off_[c + 1]; ++i) {
      const std::uint32_t slot = cursor[dvars_[i]]++;
      inc_[slot] = static_cast<std::uint32_t>(c);
      inc_pol_[slot] = dpol_[i];
    }
  }
}

Formula generate_random(unsigned k, Var n, double alpha, std::uint64_t seed) {
  if (k == 0) throw DomainError("k must be >= 1");
  if (n == 0) throw DomainError("n must be >= 1");
  if (!(alpha > 0)) throw DomainError("alpha must be > 0");
  const auto m = static_cast<std::size_t>(std::floor(static_cast<long double>(alpha) * n + 1e-9L));
  Rng rng(seed);
  std::vector<Lit> slots;
  slots.reserve(m * k);
  for (std::size_t c = 0; c < m; ++c)
    for (unsigned j = 0; j < k; ++j) {
      const Var v = static_cast<Var>(rng.next_below(n));
      slots.push_back(Lit::make(v, rng.next_bool()));
    }
  return Formula(n, k, std::move(slots));
}

DependencyGraph build_dependency_graph(const Formula& f) {
  const std::size_t m = f.num_clauses();
  DependencyGraph g;
  g.off.assign(m + 1, 0);
  std::vector<std::uint32_t> stamp(m, UINT32_MAX);
  // Two passes over the var->clause incidence index: count, then fill.
  auto scan = [&](auto&& emit) {
    for (std::size_t c = 0; c < m; ++c) {
      for (Var v : f.vars(c))
        for (std::uint32_t c2 : f.clauses_of(v)) {
          if (c2 == c || stamp[c2] == c) continue;
          stamp[c2] = static_cast<std::uint32_t>(c);
          emit(c, c2);
        }
      stamp[c] = static_cast<std::uint32_t>(c);  // reset guard for self
    }
  };
  scan([&](std::size_t c, std::uint32_t) { g.off[c + 1]++; });
  for (std::size_t c = 0; c < m; ++c) g.off[c + 1] += g.off[c];
  g.adj.resize(g.off[m]);
  std::vector<std::uint32_t> cursor(g.off.begin(), g.off.end() - 1);
  stamp.assign(m, UINT32_MAX);
  scan([&](std::size_t c, std::uint32_t c2) { g.adj[cursor[c]++] = c2; });
  return g;
}

namespace {

bool is_comment_or_blank(const std::string& line) {
  std::size_t i = line.find_first_not_of(" \t\r");
  return i == std::string::npos || line[i] == 'c';
}

}  // namespace

Formula read_dimacs(std::istream& in, std::vector<char>* marks_out) {
  std::string line;
  long long n = -1, m = -1;
  long long k_hint = 0;
  std::vector<std::pair<Var, char>> marks;

  // Header, skipping leading comments.
  auto scan_comment = [&](const std::string& text) {
    std::istringstream cs(text);
    std::string c, word;
    if (!(cs >> c >> word) || c != "c") return;
    if (word == "mark") {
      std::string v, tag;
      long long idx;
      if (cs >> v >> idx >> tag && v == "v" && tag.size() == 1 &&
          (tag[0] == 'M' || tag[0] == 'A' || tag[0] == 'C'))
        marks.emplace_back(static_cast<Var>(idx), tag[0]);
    } else if (word == "k") {
      cs >> k_hint;
    }
  };

  while (std::getline(in, line)) {
    if (is_comment_or_blank(line)) {
      scan_comment(line);
      continue;
    }
    std::istringstream hs(line);
    std::string p, cnf;
    if (!(hs >> p >> cnf >> n >> m) || p != "p" || cnf != "cnf" || n < 0 || m < 0)
      throw MalformedInput("expected header 'p cnf <n> <m>'");
    break;
  }
  if (n < 0) throw MalformedInput("missing DIMACS header");

  std::vector<Lit> slots;
  std::vector<Lit> current;
  unsigned k = 0;
  std::size_t clauses_read = 0;
  while (std::getline(in, line)) {
    if (is_comment_or_blank(line)) {
      scan_comment(line);
      continue;
    }
    std::istringstream ls(line);
    long long lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) throw MalformedInput("empty clause");
        if (k == 0)
          k = static_cast<unsigned>(current.size());
        else if (current.size() != k)
          throw NonUniformWidth("clause " + std::to_string(clauses_read) + " has width " +
                                std::to_string(current.size()) + ", expected " + std::to_string(k));
        slots.insert(slots.end(), current.begin(), current.end());
        current.clear();
        ++clauses_read;
      } else {
        const long long v = lit > 0 ? lit : -lit;
        if (v > n) throw MalformedInput("variable " + std::to_string(v) + " out of range");
        current.push_back(Lit::make(static_cast<Var>(v - 1), lit < 0));
      }
    }
    if (!ls.eof()) throw MalformedInput("unparsable token in clause line");
  }
  if (!current.empty()) throw MalformedInput("clause not terminated by 0");
  if (clauses_read != static_cast<std::size_t>(m))
    throw MalformedInput("header declares " + std::to_string(m) + " clauses, found " +
                         std::to_string(clauses_read));
  if (clauses_read == 0) {
    // Zero-clause formulas carry the width in a `c k <k>` comment.
    if (k_hint <= 0) throw MalformedInput("zero-clause formula without a 'c k <k>' width comment");
    k = static_cast<unsigned>(k_hint);
  }

  if (marks_out) {
    marks_out->assign(static_cast<std::size_t>(n), '\0');
    for (auto [v, t] : marks) {
      if (v >= static_cast<Var>(n)) throw MalformedInput("mark index out of range");
      (*marks_out)[v] = t;
    }
  }
  return Formula(static_cast<Var>(n), k, std::move(slots));
}

Formula read_dimacs_string(const std::string& text, std::vector<char>* marks_out) {
  std::istringstream in(text);
  return read_dimacs(in, marks_out);
}

void write_dimacs(const Formula& f, std::ostream& out) {
  if (f.num_clauses() == 0) out << "c k " << f.width() << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (std::size_t c = 0; c < f.num_clauses(); ++c) {
    for (Lit l : f.literals(c)) {
      const long long v = static_cast<long long>(l.var()) + 1;
      out << (l.negated() ? -v : v) << ' ';
    }
    out << "0\n";
  }
}

std::string write_dimacs_string(const Formula& f) {
  std::ostringstream out;
  write_dimacs(f, out);
  return out.str();
}

}  // namespace ksat
