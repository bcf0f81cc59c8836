#include <doctest.h>

#include "ksat/bigint.hpp"
#include "ksat/rng.hpp"

using namespace ksat;

TEST_CASE("rng determinism and splitting") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c = Rng(42).split(1), d = Rng(42).split(2);
  CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("next_below is in range and roughly uniform") {
  Rng rng(7);
  int counts[10] = {0};
  for (int i = 0; i < 100000; ++i) {
    const std::uint64_t x = rng.next_below(10);
    REQUIRE(x < 10);
    counts[x]++;
  }
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
}

TEST_CASE("uniform_bigint respects the bound") {
  Rng rng(9);
  const BigInt bound = (BigInt(1) << 100) + 12345;
  for (int i = 0; i < 200; ++i) {
    const BigInt x = uniform_bigint(rng, bound);
    REQUIRE(x >= 0);
    REQUIRE(x < bound);
  }
  bool seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 200; ++i) seen[static_cast<int>(uniform_bigint(rng, BigInt(5)))] = true;
  for (bool s : seen) CHECK(s);
}
