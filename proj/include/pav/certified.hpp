#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "pav/rng.hpp"

namespace pav {

// Closed interval certified to contain the true real value.
struct Interval {
  double lo;
  double hi;
};

// G(m) = ln binom(2m, m) - m ln 4, computed without cancellation as
// -ln(pi m)/2 + mu(2m) - 2 mu(m), where mu is the Binet/Stirling tail with
// an enveloping remainder bound. Requires m >= 64. The returned interval
// carries generous rounding slop, so it always contains the true value.
Interval g_central(uint64_t m);

// ln of the ratio weight R(j) = C_{s-j} 4^j / C_s for a split of size s.
// R is strictly increasing in j. Requires s - j >= 64 and s >= 64.
Interval ln_split_ratio(uint64_t s, uint64_t j);

// A probability p = a + b * exp(L), with a, b exact rationals and
// L = sum_i c_i * G(m_i) + ln(factor), factor an exact positive rational.
// Every piece can be re-evaluated at arbitrary precision, so comparisons
// against lazily revealed uniforms are exact.
struct ProbExpr {
  mpq_class a = 0;
  mpq_class b = 1;
  std::vector<std::pair<int, uint64_t>> g_terms;  // (coefficient, m), m >= 64
  mpq_class factor = 1;                           // > 0

  Interval coarse() const;
};

// Survival probability Q_j = binom(2j, j) 4^{-j} = P(X >= j). Requires
// j >= 64 (smaller j are handled exactly by integer tables elsewhere).
ProbExpr survival_prob(uint64_t j);

// Exactly decides U < p, revealing more bits of U and raising the MPFR
// working precision until the comparison is certain. Almost surely
// terminates; the probability of reaching precision 2^k falls like 2^-2^k.
bool lazy_less_than(LazyUniform& u, const ProbExpr& p);

// Bernoulli(p) with a fresh lazily revealed uniform.
bool certified_bernoulli(RngStream& rng, const ProbExpr& p);

}  // namespace pav
