#pragma once

#include <cstdint>
#include <vector>

#include "pav/permutation.hpp"
#include "pav/rng.hpp"

namespace pav {

// Materialization guard: a sampled permutation of this size is ~0.5 GiB.
inline constexpr uint64_t kMaxSampleN = uint64_t{1} << 26;

// A Dyck word of semilength n as 2n steps, 1 = up, 0 = down. Every prefix has
// at least as many ups as downs and the totals match.
using DyckWord = std::vector<uint8_t>;

bool is_dyck_word(const DyckWord& w);

// Exactly uniform over the C_n Dyck words of semilength n. Draws a uniform
// arrangement of n ups and n+1 downs, then applies the unique cyclic rotation
// that makes it a down-terminated ballot sequence (cycle lemma) and drops the
// final down.
DyckWord sample_dyck_word(RngStream& rng, uint64_t n);

// Serial reference: recursive first-return decomposition with exact rational
// split draws. Requires n <= kSplitExactMax.
DyckWord ref_sample_dyck_word(RngStream& rng, uint64_t n);

// Stack decode: up pushes the next value in increasing order, down pops and
// emits. Bijection from Dyck words of semilength n onto 312-avoiders of [n],
// shifted to start at block_start.
Permutation decode_stack_312(const DyckWord& w, uint64_t block_start = 1);

// Pair decode: symbol pair t = (w[2t-2], w[2t-1]). t is an excedance value if
// the first symbol is down, an excedance position if the second is up.
// Excedance values sit at excedance positions in increasing order, remaining
// values fill remaining positions in increasing order. Bijection from Dyck
// words of semilength n onto 321-avoiders of [n]. Interior returns to height
// zero happen exactly at the pair boundaries where a prefix of the permutation
// closes, so first-return structure matches leading-block structure.
Permutation decode_pairs_321(const DyckWord& w, uint64_t block_start = 1);

// Position reversal and within-block value complement. Both are involutions
// and they commute.
Permutation reversed(const Permutation& p);
Permutation complemented(const Permutation& p);

// Pivot-position decomposition shared by the reference sampler and the lazy
// block generators. For the four patterns with a positional split law, an
// avoider of block [a, a+n-1] is (left block)(pivot)(right block) where the
// pivot is the block min (312, 213) or max (231, 132) at position j, and the
// value ranges below are forced by which side must hold the smaller values.
struct PivotSplit {
  uint64_t pivot;
  uint64_t left_lo, left_size;
  uint64_t right_lo, right_size;
};
PivotSplit pivot_split(Pattern pat, uint64_t n, uint64_t j,
                       uint64_t block_start);

// Exactly uniform over avoiders of pat on the block [block_start,
// block_start + n - 1]. One Dyck draw plus an O(n) decode; the classes other
// than 312 and 321 are reached through the symmetry maps above.
Permutation sample_avoider(RngStream& rng, uint64_t n, Pattern pat,
                           uint64_t block_start = 1);

// Uniform avoider on the value block [a, b]; b = a - 1 gives the empty
// permutation.
Permutation sample_avoider_image(RngStream& rng, uint64_t a, uint64_t b,
                                 Pattern pat);

// Serial reference sampler: recursive pivot-position decomposition with exact
// rational split draws (no Dyck words involved). Requires n <= kSplitExactMax.
Permutation ref_sample_avoider(RngStream& rng, uint64_t n, Pattern pat,
                               uint64_t block_start = 1);

// Uniform over block-irreducible 321-avoiders of size n >= 1. Direct: decodes
// up + (uniform Dyck word of semilength n-1) + down.
Permutation sample_birr_321(RngStream& rng, uint64_t n,
                            uint64_t block_start = 1);

// Same law by rejection: redraws a uniform 321-avoider until its first
// irreducible block is the whole permutation. Acceptance C_{n-1}/C_n >= 1/4.
Permutation sample_birr_321_rejection(RngStream& rng, uint64_t n,
                                      uint64_t block_start = 1);

// count independent draws from sample_avoider, trial t on substream
// stream_for_trial(stream_base, t). OpenMP-parallel; output is identical for
// any thread count because streams are per-trial.
std::vector<Permutation> sample_avoider_batch(uint64_t seed,
                                              uint64_t stream_base,
                                              uint64_t count, uint64_t n,
                                              Pattern pat);

}  // namespace pav
