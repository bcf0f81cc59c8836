#ifndef KSAT_BIGINT_HPP
#define KSAT_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include "ksat/rng.hpp"

namespace ksat {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Uniform draw in [0, bound) for arbitrary-precision bounds, by rejection
// over the minimal bit width.
inline BigInt uniform_bigint(Rng& rng, const BigInt& bound) {
  if (bound <= 1) return 0;
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
  for (;;) {
    BigInt r = 0;
    unsigned filled = 0;
    while (filled < bits) {
      r <<= 64;
      r |= rng.next_u64();
      filled += 64;
    }
    r >>= (filled - bits);
    if (r < bound) return r;
  }
}

}  // namespace ksat

#endif
