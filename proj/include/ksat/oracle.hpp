#ifndef KSAT_ORACLE_HPP
#define KSAT_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "ksat/assignment.hpp"
#include "ksat/bigint.hpp"
#include "ksat/counting.hpp"
#include "ksat/formula.hpp"
#include "ksat/marking.hpp"

namespace ksat {

// Exhaustive model count of Phi^Lambda over all unpinned variables:
// enumeration over the variables that occur in residual clauses, times
// 2^(number of isolated unpinned variables). Guard: at most 30 enumerated.
BigInt brute_count(const Formula& f, const PartialAssignment& lam);

// All satisfying extensions of lam, as bit masks over the unpinned variables
// listed (ascending) in vars_out. Guard: at most 30 unpinned variables.
std::vector<std::uint64_t> brute_enumerate(const Formula& f, const PartialAssignment& lam,
                                           std::vector<Var>& vars_out);

// Finite distribution over bit-mask atoms with exact rational masses.
struct ExactDistribution {
  std::vector<std::pair<std::uint64_t, BigRat>> atoms;  // sorted by atom
  unsigned universe_bits = 0;

  static ExactDistribution uniform_over(const std::vector<std::uint64_t>& support,
                                        unsigned universe_bits);
  void sort_atoms();
  bool mass_is_one() const;
};

struct TVReport {
  double tv = 0;
  std::uint64_t samples = 0;
  double radius = 0;  // 0 for exact-exact comparisons
};

// Exact total variation distance (1/2) sum |p - q|.
TVReport tv_exact(const ExactDistribution& p, const ExactDistribution& q);

// Plug-in TV of an empirical histogram against an exact distribution, with a
// confidence radius: plug-in bias bound (1/2) sqrt(|support| / N) plus a
// bounded-differences deviation term sqrt(ln(2/delta) / (2N)).
TVReport tv_empirical(const ExactDistribution& p,
                      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& histogram,
                      double delta = 0.01);

// Exact stationarity residual || mu^T P - mu^T ||_inf of the rho-uniform-block
// kernel on the marked variables, where mu is the brute-force marked marginal
// and the block conditionals are the exact output law of the sampler.
// Guards: |V_m| <= 12 and at most 26 variables in total.
double stationarity_check(const Formula& f, const Marking& marking, std::uint64_t rho);

struct SpectralReport {
  std::size_t dim = 0;
  double lambda1 = 0;       // largest-magnitude eigenvalue of the influence matrix
  double max_row_sum = 0;   // max_u sum_v |I(u -> v)|
  std::vector<double> matrix;  // row-major, diagonal zero
};

// Influence matrix over unpinned marked variables under lam, its extreme
// eigenvalue by power iteration (tolerance 1e-9) and the row-sum bound.
// Guard: at most 24 unpinned marked variables.
SpectralReport spectral_check(const Formula& f, const Marking& marking,
                              const PartialAssignment& lam);

}  // namespace ksat

#endif
