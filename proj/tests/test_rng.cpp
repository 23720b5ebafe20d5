#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pav/rng.hpp"

using namespace pav;

TEST_CASE("identical (seed, stream) pairs give identical sequences") {
  RngStream a(123, 7), b(123, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams of one seed diverge immediately") {
  RngStream a(123, 0), b(123, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("uniform_below stays in range and hits every residue") {
  RngStream rng(5, 5);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 10000; ++i) {
    uint64_t v = rng.uniform_below(7);
    REQUIRE(v < 7);
    ++seen[v];
  }
  for (int c : seen) CHECK(c > 0);
  CHECK(rng.uniform_below(1) == 0);
}

TEST_CASE("uniform_below is unbiased across a power-of-two boundary") {
  // m = 3 over 10^5 draws: each residue should be near 1/3.
  RngStream rng(11, 0);
  std::vector<int> seen(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++seen[rng.uniform_below(3)];
  for (int c : seen) {
    CHECK(c > n / 3 - 4 * 150);  // sigma ~ sqrt(n * 2/9) ~ 149
    CHECK(c < n / 3 + 4 * 150);
  }
}

TEST_CASE("next_bit consumes buffered words and is roughly fair") {
  RngStream rng(3, 9);
  int ones = 0;
  const int n = 64000;
  for (int i = 0; i < n; ++i) ones += rng.next_bit() ? 1 : 0;
  CHECK(ones > n / 2 - 4 * 127);  // sigma = sqrt(n)/2 = 126.5
  CHECK(ones < n / 2 + 4 * 127);
}

TEST_CASE("substream matches a directly constructed stream") {
  RngStream direct(99, 1234);
  RngStream via = substream(99, 1234);
  for (int i = 0; i < 16; ++i) CHECK(direct.next_u64() == via.next_u64());
}

TEST_CASE("stream_for_trial packs base and trial without collisions") {
  CHECK(stream_for_trial(0, 0) == 0);
  CHECK(stream_for_trial(0, 5) == 5);
  CHECK(stream_for_trial(1, 0) == (uint64_t{1} << 32));
  CHECK(stream_for_trial(3, 7) == ((uint64_t{3} << 32) | 7));
}

TEST_CASE("LazyUniform reveals words on demand and caches them") {
  RngStream a(77, 0), b(77, 0);
  LazyUniform u(a);
  uint64_t w0 = u.word(0);
  CHECK(u.words() == 1);
  CHECK(u.word(0) == w0);  // cached, no extra consumption
  uint64_t w1 = u.word(1);
  CHECK(u.words() == 2);
  // The underlying stream saw exactly two draws.
  CHECK(b.next_u64() == w0);
  CHECK(b.next_u64() == w1);
}
