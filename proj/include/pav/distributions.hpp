#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>

#include "pav/rng.hpp"

namespace pav {

// Geometric on {1, 2, ...}: P(Y = n) = 2^-n.
uint64_t sample_Y(RngStream& rng);

enum class XMechanism { Walk, Inversion };

// P(X = n) = C_n / (2 * 4^n), n >= 0. Walk form: simulate a simple symmetric
// random walk to its first return to 0 and report (return time)/2 - 1. The
// first-return law makes this exactly the target pmf; termination is almost
// sure but the expected running time is infinite (the tail is ~ 0.56 n^-1/2).
uint64_t sample_X_walk(RngStream& rng);

// Same walk stopped after 2(cap+1) steps. X > cap if and only if the walk
// has not returned by then, so censoring is exact: nullopt means X > cap.
std::optional<uint64_t> sample_X_capped(RngStream& rng, uint64_t cap);

// Inversion against one lazily revealed uniform: X = max{j : U < Q_j} with
// Q_j = binom(2j, j) 4^-j = P(X >= j). Exact for all j: Q_j is compared as
// a scaled integer for j < 64 and through certified enclosures beyond.
// Expected cost is O(log X); use this form when sums of many draws are
// needed, since the walk's infinite mean step count makes batches of
// unbounded draws infeasible.
uint64_t sample_X_inversion(RngStream& rng);

uint64_t sample_X(RngStream& rng, XMechanism mech = XMechanism::Walk);

// Exact survival values P(X >= j) for j < 64, as dyadic rationals.
mpq_class x_survival_exact(uint64_t j);

// Uniform on [0, m) for arbitrary-precision m, by masked rejection.
mpz_class uniform_below_mpz(RngStream& rng, const mpz_class& m);

// Split position on [1, n]: P(j) = C_{j-1} C_{n-j} / C_n, exactly.
// n <= kSplitExactMax inverts a single bigint uniform through the folded
// cumulative weights; larger n uses the symmetry split plus a certified
// rejection sampler against the limit law, still exact.
inline constexpr uint64_t kSplitExactMax = 8192;
uint64_t sample_split_position(uint64_t n, RngStream& rng);

}  // namespace pav
