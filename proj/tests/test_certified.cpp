#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "pav/certified.hpp"
#include "pav/rng.hpp"

using namespace pav;

namespace {

// High-precision reference for G(m) = ln binom(2m, m) - m ln 4, computed the
// direct way (exact bigint, then 256-bit log), as a sandwich witness.
double g_reference(uint64_t m) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), 2 * m, m);
  mpfr_t x, l4;
  mpfr_init2(x, 256);
  mpfr_init2(l4, 256);
  mpfr_set_z(x, b.get_mpz_t(), MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  mpfr_set_ui(l4, 4, MPFR_RNDN);
  mpfr_log(l4, l4, MPFR_RNDN);
  mpfr_mul_ui(l4, l4, (unsigned long)m, MPFR_RNDN);
  mpfr_sub(x, x, l4, MPFR_RNDN);
  double d = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  mpfr_clear(l4);
  return d;
}

}  // namespace

TEST_CASE("g_central sandwiches the exact value tightly") {
  for (uint64_t m : {64, 65, 128, 1000, 5000}) {
    Interval iv = g_central(m);
    double ref = g_reference(m);
    CHECK(iv.lo <= ref);
    CHECK(ref <= iv.hi);
    CHECK(iv.hi - iv.lo < 1e-9);
  }
}

TEST_CASE("ln_split_ratio sandwiches the exact log ratio") {
  const uint64_t s = 9000;
  for (uint64_t j : {1, 2, 100, 4000, 8936}) {
    Interval iv = ln_split_ratio(s, j);
    // ln R(j) = ln C_{s-j} + j ln 4 - ln C_s, all exact pieces.
    mpz_class cs, csj;
    mpz_bin_uiui(cs.get_mpz_t(), 2 * s, s);
    cs /= (s + 1);
    mpz_bin_uiui(csj.get_mpz_t(), 2 * (s - j), s - j);
    csj /= (s - j + 1);
    mpfr_t x, t;
    mpfr_init2(x, 512);
    mpfr_init2(t, 512);
    mpfr_set_z(x, csj.get_mpz_t(), MPFR_RNDN);
    mpfr_log(x, x, MPFR_RNDN);
    mpfr_set_ui(t, 4, MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_mul_ui(t, t, (unsigned long)j, MPFR_RNDN);
    mpfr_add(x, x, t, MPFR_RNDN);
    mpfr_set_z(t, cs.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    mpfr_sub(x, x, t, MPFR_RNDN);
    double ref = mpfr_get_d(x, MPFR_RNDN);
    mpfr_clear(x);
    mpfr_clear(t);
    CHECK(iv.lo <= ref);
    CHECK(ref <= iv.hi);
    CHECK(iv.hi - iv.lo < 1e-8);
  }
}

TEST_CASE("ln_split_ratio is strictly increasing in j") {
  const uint64_t s = 9000;
  Interval prev = ln_split_ratio(s, 1);
  for (uint64_t j = 2; j <= 100; ++j) {
    Interval cur = ln_split_ratio(s, j);
    // Increments are ~1.5/(s-j), far above the interval slop.
    CHECK(prev.hi < cur.lo);
    prev = cur;
  }
}

TEST_CASE("survival_prob coarse interval contains the exact value") {
  for (uint64_t j : {64, 100, 1000}) {
    ProbExpr p = survival_prob(j);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), 2 * j, j);
    mpq_class exact(b, mpz_class(1) << (2 * j));
    exact.canonicalize();
    Interval iv = p.coarse();
    CHECK(iv.lo <= exact.get_d());
    CHECK(exact.get_d() <= iv.hi);
    CHECK(iv.lo > 0);
    CHECK(iv.hi < 1);
  }
}

TEST_CASE("certified_bernoulli tracks a pure rational probability") {
  ProbExpr half;
  half.a = mpq_class(1, 2);
  half.b = 0;
  RngStream rng(31, 0);
  int hits = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) hits += certified_bernoulli(rng, half) ? 1 : 0;
  // 4 sigma around n/2, sigma = sqrt(n)/2.
  CHECK(hits > n / 2 - 4 * 71);
  CHECK(hits < n / 2 + 4 * 71);
}

TEST_CASE("certified_bernoulli tracks the survival probability") {
  // Q_64 = binom(128,64)/4^64 ~ 0.070386.
  ProbExpr p = survival_prob(64);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), 128, 64);
  mpq_class exact(b, mpz_class(1) << 128);
  exact.canonicalize();
  double q = exact.get_d();
  RngStream rng(32, 0);
  int hits = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) hits += certified_bernoulli(rng, p) ? 1 : 0;
  double freq = double(hits) / n;
  double sigma = std::sqrt(q * (1 - q) / n);
  CHECK(freq > q - 4 * sigma);
  CHECK(freq < q + 4 * sigma);
}

TEST_CASE("lazy_less_than decides dyadic boundaries exactly") {
  // p = 3/4 with b = 0: the decision depends on at most a few leading bits
  // and must match the revealed prefix exactly.
  ProbExpr p;
  p.a = mpq_class(3, 4);
  p.b = 0;
  RngStream rng(33, 0);
  for (int i = 0; i < 2000; ++i) {
    RngStream probe = rng;  // same upcoming words
    LazyUniform u(rng);
    bool below = lazy_less_than(u, p);
    uint64_t w0 = probe.next_u64();
    CHECK(below == (w0 >> 62 != 3));  // top two bits 11 <=> U >= 3/4
  }
}
