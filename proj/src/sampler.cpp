#include "pav/sampler.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "pav/distributions.hpp"

namespace pav {

namespace {

void check_sample_size(uint64_t n, uint64_t block_start) {
  if (n > kMaxSampleN)
    throw std::length_error("sample size " + std::to_string(n) +
                            " exceeds materialization limit");
  if (n > 0 && block_start > std::numeric_limits<uint64_t>::max() - (n - 1))
    throw std::overflow_error("block values would overflow 64 bits");
}

}  // namespace

bool is_dyck_word(const DyckWord& w) {
  if (w.size() % 2 != 0) return false;
  int64_t h = 0;
  for (uint8_t s : w) {
    h += s ? 1 : -1;
    if (h < 0) return false;
  }
  return h == 0;
}

DyckWord sample_dyck_word(RngStream& rng, uint64_t n) {
  if (n == 0) return {};
  // Uniform arrangement of n ups and n+1 downs: P(next is up) = u / (u + d).
  std::vector<uint8_t> seq(2 * n + 1);
  uint64_t u = n, d = n + 1;
  for (uint64_t i = 0; i < 2 * n + 1; ++i) {
    if (rng.uniform_below(u + d) < u) {
      seq[i] = 1;
      --u;
    } else {
      seq[i] = 0;
      --d;
    }
  }
  // Cycle lemma: the rotation starting after the first prefix-sum minimum is
  // the unique one that stays nonnegative until the final down. Drop that
  // final down to get the Dyck word.
  int64_t h = 0, min_h = 0;
  uint64_t start = 0;
  for (uint64_t i = 0; i < 2 * n + 1; ++i) {
    h += seq[i] ? 1 : -1;
    if (h < min_h) {
      min_h = h;
      start = i + 1;
    }
  }
  DyckWord w(2 * n);
  for (uint64_t i = 0; i < 2 * n; ++i) w[i] = seq[(start + i) % (2 * n + 1)];
  return w;
}

DyckWord ref_sample_dyck_word(RngStream& rng, uint64_t n) {
  if (n > kSplitExactMax)
    throw std::length_error("reference Dyck sampler limited to n <= " +
                            std::to_string(kSplitExactMax));
  if (n == 0) return {};
  // First return at step 2j has probability C_{j-1} C_{n-j} / C_n.
  uint64_t j = sample_split_position(n, rng);
  DyckWord left = ref_sample_dyck_word(rng, j - 1);
  DyckWord right = ref_sample_dyck_word(rng, n - j);
  DyckWord w;
  w.reserve(2 * n);
  w.push_back(1);
  w.insert(w.end(), left.begin(), left.end());
  w.push_back(0);
  w.insert(w.end(), right.begin(), right.end());
  return w;
}

Permutation decode_stack_312(const DyckWord& w, uint64_t block_start) {
  if (!is_dyck_word(w)) throw std::invalid_argument("not a Dyck word");
  uint64_t n = w.size() / 2;
  check_sample_size(n, block_start);
  Permutation p;
  p.block_start = block_start;
  p.values.reserve(n);
  std::vector<uint64_t> stack;
  uint64_t next = block_start;
  for (uint8_t s : w) {
    if (s) {
      stack.push_back(next++);
    } else {
      p.values.push_back(stack.back());
      stack.pop_back();
    }
  }
  return p;
}

Permutation decode_pairs_321(const DyckWord& w, uint64_t block_start) {
  if (!is_dyck_word(w)) throw std::invalid_argument("not a Dyck word");
  uint64_t n = w.size() / 2;
  check_sample_size(n, block_start);
  std::vector<uint64_t> exc_pos, exc_val;
  for (uint64_t t = 1; t <= n; ++t) {
    if (!w[2 * t - 2]) exc_val.push_back(t);
    if (w[2 * t - 1]) exc_pos.push_back(t);
  }
  // Ups = (n - |exc_val|) + |exc_pos| = n, so the two lists have equal length.
  Permutation p;
  p.block_start = block_start;
  p.values.assign(n, 0);
  for (size_t i = 0; i < exc_pos.size(); ++i)
    p.values[exc_pos[i] - 1] = exc_val[i];
  uint64_t next = 1;
  size_t taken = 0;
  for (uint64_t i = 0; i < n; ++i) {
    if (p.values[i] != 0) continue;
    while (taken < exc_val.size() && exc_val[taken] == next) {
      ++taken;
      ++next;
    }
    p.values[i] = next++;
  }
  for (uint64_t& v : p.values) v += block_start - 1;
  return p;
}

Permutation reversed(const Permutation& p) {
  Permutation q = p;
  std::reverse(q.values.begin(), q.values.end());
  return q;
}

Permutation complemented(const Permutation& p) {
  Permutation q = p;
  if (q.values.empty()) return q;
  uint64_t lo = q.block_start, hi = q.block_start + q.size() - 1;
  for (uint64_t& v : q.values) v = lo + hi - v;
  return q;
}

Permutation sample_avoider(RngStream& rng, uint64_t n, Pattern pat,
                           uint64_t block_start) {
  check_sample_size(n, block_start);
  switch (pat) {
    case Pattern::p312:
      return decode_stack_312(sample_dyck_word(rng, n), block_start);
    case Pattern::p213:
      return reversed(decode_stack_312(sample_dyck_word(rng, n), block_start));
    case Pattern::p132:
      return complemented(
          decode_stack_312(sample_dyck_word(rng, n), block_start));
    case Pattern::p231:
      return reversed(complemented(
          decode_stack_312(sample_dyck_word(rng, n), block_start)));
    case Pattern::p321:
      return decode_pairs_321(sample_dyck_word(rng, n), block_start);
    case Pattern::p123:
      return reversed(decode_pairs_321(sample_dyck_word(rng, n), block_start));
  }
  throw std::logic_error("unreachable pattern");
}

Permutation sample_avoider_image(RngStream& rng, uint64_t a, uint64_t b,
                                 Pattern pat) {
  if (b + 1 < a)
    throw std::invalid_argument("image block upper end below a - 1");
  return sample_avoider(rng, b - a + 1, pat, a);
}

PivotSplit pivot_split(Pattern pat, uint64_t n, uint64_t j,
                       uint64_t block_start) {
  if (n == 0 || j == 0 || j > n)
    throw std::invalid_argument("pivot_split needs 1 <= j <= n");
  uint64_t a = block_start, b = block_start + n - 1;
  PivotSplit s{};
  s.left_size = j - 1;
  s.right_size = n - j;
  switch (pat) {
    case Pattern::p312:  // min at j, entries before it all smaller than after
      s.pivot = a, s.left_lo = a + 1, s.right_lo = a + j;
      break;
    case Pattern::p213:  // min at j, entries before it all larger than after
      s.pivot = a, s.left_lo = a + n - j + 1, s.right_lo = a + 1;
      break;
    case Pattern::p231:  // max at j, entries before it all smaller than after
      s.pivot = b, s.left_lo = a, s.right_lo = a + j - 1;
      break;
    case Pattern::p132:  // max at j, entries before it all larger than after
      s.pivot = b, s.left_lo = a + n - j, s.right_lo = a;
      break;
    default:
      throw std::invalid_argument(
          "pivot_split handles single-pivot patterns only");
  }
  return s;
}

namespace {

// The pivot sits at position j drawn from the exact split law; the j-1
// entries before it and the n-j after form independent uniform avoiders.
Permutation ref_rec(RngStream& rng, uint64_t n, Pattern pat,
                    uint64_t block_start) {
  Permutation p;
  p.block_start = block_start;
  if (n == 0) return p;
  uint64_t j = sample_split_position(n, rng);
  PivotSplit s = pivot_split(pat, n, j, block_start);
  Permutation left = ref_rec(rng, s.left_size, pat, s.left_lo);
  Permutation right = ref_rec(rng, s.right_size, pat, s.right_lo);
  p.values.reserve(n);
  p.values.insert(p.values.end(), left.values.begin(), left.values.end());
  p.values.push_back(s.pivot);
  p.values.insert(p.values.end(), right.values.begin(), right.values.end());
  return p;
}

}  // namespace

Permutation ref_sample_avoider(RngStream& rng, uint64_t n, Pattern pat,
                               uint64_t block_start) {
  if (n > kSplitExactMax)
    throw std::length_error("reference sampler limited to n <= " +
                            std::to_string(kSplitExactMax));
  check_sample_size(n, block_start);
  switch (pat) {
    case Pattern::p312:
    case Pattern::p213:
    case Pattern::p231:
    case Pattern::p132:
      return ref_rec(rng, n, pat, block_start);
    case Pattern::p321:
      return decode_pairs_321(ref_sample_dyck_word(rng, n), block_start);
    case Pattern::p123:
      return reversed(
          decode_pairs_321(ref_sample_dyck_word(rng, n), block_start));
  }
  throw std::logic_error("unreachable pattern");
}

Permutation sample_birr_321(RngStream& rng, uint64_t n, uint64_t block_start) {
  if (n == 0)
    throw std::invalid_argument("block-irreducible sampler needs n >= 1");
  check_sample_size(n, block_start);
  DyckWord w;
  w.reserve(2 * n);
  w.push_back(1);
  DyckWord inner = sample_dyck_word(rng, n - 1);
  w.insert(w.end(), inner.begin(), inner.end());
  w.push_back(0);
  return decode_pairs_321(w, block_start);
}

Permutation sample_birr_321_rejection(RngStream& rng, uint64_t n,
                                      uint64_t block_start) {
  if (n == 0)
    throw std::invalid_argument("block-irreducible sampler needs n >= 1");
  for (;;) {
    Permutation p = sample_avoider(rng, n, Pattern::p321, block_start);
    if (first_irreducible_block(p) == n) return p;
  }
}

std::vector<Permutation> sample_avoider_batch(uint64_t seed,
                                              uint64_t stream_base,
                                              uint64_t count, uint64_t n,
                                              Pattern pat) {
  if (count > (uint64_t{1} << 32))
    throw std::length_error("batch count exceeds trial-stream capacity");
  std::vector<Permutation> out(count);
#pragma omp parallel for schedule(dynamic, 64)
  for (int64_t t = 0; t < static_cast<int64_t>(count); ++t) {
    RngStream r = substream(seed, stream_for_trial(stream_base, t));
    out[t] = sample_avoider(r, n, pat);
  }
  return out;
}

}  // namespace pav
