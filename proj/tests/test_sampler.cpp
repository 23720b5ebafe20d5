#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "pav/catalan.hpp"
#include "pav/enumerate.hpp"
#include "pav/sampler.hpp"

using namespace pav;

namespace {

// All Dyck words of semilength n in lexicographic order.
void all_dyck_words(uint64_t n, const std::function<void(const DyckWord&)>& fn) {
  DyckWord w;
  auto rec = [&](auto&& self, uint64_t ups, uint64_t downs) -> void {
    if (w.size() == 2 * n) {
      fn(w);
      return;
    }
    if (ups < n) {
      w.push_back(1);
      self(self, ups + 1, downs);
      w.pop_back();
    }
    if (downs < ups) {
      w.push_back(0);
      self(self, ups, downs + 1);
      w.pop_back();
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

TEST_CASE("is_dyck_word accepts balanced words and rejects others") {
  CHECK(is_dyck_word({}));
  CHECK(is_dyck_word({1, 0}));
  CHECK(is_dyck_word({1, 1, 0, 0}));
  CHECK(!is_dyck_word({0, 1}));
  CHECK(!is_dyck_word({1, 0, 0, 1}));
  CHECK(!is_dyck_word({1}));
}

TEST_CASE("both Dyck samplers emit valid words of the right length") {
  RngStream rng(201, 0);
  for (uint64_t n : {0, 1, 2, 5, 40, 300}) {
    DyckWord w = sample_dyck_word(rng, n);
    REQUIRE(w.size() == 2 * n);
    CHECK(is_dyck_word(w));
    DyckWord r = ref_sample_dyck_word(rng, n);
    REQUIRE(r.size() == 2 * n);
    CHECK(is_dyck_word(r));
  }
}

TEST_CASE("fast Dyck sampler is uniform at n = 4") {
  // C_4 = 14 words; chi-square at 70000 draws against the uniform law.
  RngStream rng(202, 0);
  std::map<DyckWord, int> hist;
  const int trials = 70000;
  for (int i = 0; i < trials; ++i) ++hist[sample_dyck_word(rng, 4)];
  REQUIRE(hist.size() == 14);
  double e = trials / 14.0, chi2 = 0;
  for (const auto& [w, c] : hist) chi2 += (c - e) * (c - e) / e;
  CHECK(chi2 < 34.5);  // 99.9% quantile of chi-square(13)
}

TEST_CASE("reference Dyck sampler is uniform at n = 4") {
  RngStream rng(203, 0);
  std::map<DyckWord, int> hist;
  const int trials = 70000;
  for (int i = 0; i < trials; ++i) ++hist[ref_sample_dyck_word(rng, 4)];
  REQUIRE(hist.size() == 14);
  double e = trials / 14.0, chi2 = 0;
  for (const auto& [w, c] : hist) chi2 += (c - e) * (c - e) / e;
  CHECK(chi2 < 34.5);
}

TEST_CASE("stack decode is a bijection onto 312-avoiders") {
  for (uint64_t n = 0; n <= 8; ++n) {
    std::set<std::vector<uint64_t>> images;
    all_dyck_words(n, [&](const DyckWord& w) {
      Permutation p = decode_stack_312(w);
      REQUIRE(p.size() == n);
      CHECK(p.is_valid());
      CHECK(avoids(p, Pattern::p312));
      images.insert(p.values);
    });
    CHECK(images.size() == catalan(n).get_ui());
  }
}

TEST_CASE("pair decode is a bijection onto 321-avoiders") {
  for (uint64_t n = 0; n <= 8; ++n) {
    std::set<std::vector<uint64_t>> images;
    all_dyck_words(n, [&](const DyckWord& w) {
      Permutation p = decode_pairs_321(w);
      REQUIRE(p.size() == n);
      CHECK(p.is_valid());
      CHECK(avoids(p, Pattern::p321));
      images.insert(p.values);
    });
    CHECK(images.size() == catalan(n).get_ui());
  }
}

TEST_CASE("pair decode frozen examples at n = 3") {
  using V = std::vector<uint64_t>;
  CHECK(decode_pairs_321({1, 1, 1, 0, 0, 0}).values == V{3, 1, 2});
  CHECK(decode_pairs_321({1, 1, 0, 1, 0, 0}).values == V{2, 3, 1});
  CHECK(decode_pairs_321({1, 1, 0, 0, 1, 0}).values == V{2, 1, 3});
  CHECK(decode_pairs_321({1, 0, 1, 1, 0, 0}).values == V{1, 3, 2});
  CHECK(decode_pairs_321({1, 0, 1, 0, 1, 0}).values == V{1, 2, 3});
}

TEST_CASE("decode block starts shift values") {
  Permutation p = decode_stack_312({1, 1, 0, 0}, 4);
  CHECK(p.block_start == 4);
  CHECK(p.values == std::vector<uint64_t>{5, 4});
  Permutation q = decode_pairs_321({1, 1, 0, 0}, 7);
  CHECK(q.block_start == 7);
  CHECK(q.values == std::vector<uint64_t>{8, 7});
}

TEST_CASE("first-return structure of the pair decode matches leading blocks") {
  // Interior height-zero boundaries of the word correspond exactly to closed
  // prefixes of the permutation, so block-irreducible avoiders come from
  // words with no interior return.
  for (uint64_t n = 1; n <= 7; ++n)
    all_dyck_words(n, [&](const DyckWord& w) {
      bool interior_return = false;
      int h = 0;
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        h += w[i] ? 1 : -1;
        if (h == 0) interior_return = true;
      }
      CHECK(is_block_irreducible(decode_pairs_321(w)) == !interior_return);
    });
}

TEST_CASE("reverse and complement are commuting involutions") {
  RngStream rng(204, 0);
  for (int i = 0; i < 50; ++i) {
    Permutation p = sample_avoider(rng, 30, Pattern::p321, 5);
    CHECK(reversed(reversed(p)) == p);
    CHECK(complemented(complemented(p)) == p);
    CHECK(reversed(complemented(p)) == complemented(reversed(p)));
  }
}

TEST_CASE("sample_avoider draws avoid their pattern at several sizes") {
  RngStream rng(205, 0);
  for (Pattern pat : kAllPatterns)
    for (uint64_t n : {0, 1, 2, 7, 64, 500}) {
      Permutation p = sample_avoider(rng, n, pat);
      REQUIRE(p.size() == n);
      CHECK(p.is_valid());
      CHECK(avoids(p, pat));
    }
}

TEST_CASE("sample_avoider uniformity chi-square at n = 4 for every pattern") {
  const int trials = 70000;
  for (Pattern pat : kAllPatterns) {
    RngStream rng(206, uint64_t(pat));
    std::map<std::vector<uint64_t>, int> hist;
    for (int i = 0; i < trials; ++i)
      ++hist[sample_avoider(rng, 4, pat).values];
    REQUIRE(hist.size() == 14);
    double e = trials / 14.0, chi2 = 0;
    for (const auto& [v, c] : hist) chi2 += (c - e) * (c - e) / e;
    CHECK(chi2 < 34.5);  // 99.9% quantile of chi-square(13)
  }
}

TEST_CASE("reference sampler agrees with the fast law at n = 4") {
  const int trials = 70000;
  for (Pattern pat : kAllPatterns) {
    RngStream rng(207, uint64_t(pat));
    std::map<std::vector<uint64_t>, int> hist;
    for (int i = 0; i < trials; ++i) {
      Permutation p = ref_sample_avoider(rng, 4, pat);
      CHECK(avoids(p, pat));
      ++hist[p.values];
    }
    REQUIRE(hist.size() == 14);
    double e = trials / 14.0, chi2 = 0;
    for (const auto& [v, c] : hist) chi2 += (c - e) * (c - e) / e;
    CHECK(chi2 < 34.5);
  }
}

TEST_CASE("positional split law holds exactly in-sample at n = 50") {
  // The position of the block minimum under 312 must follow the split
  // weights; checked against the exact law at Monte-Carlo precision.
  RngStream rng(208, 0);
  const uint64_t n = 50;
  const int trials = 60000;
  std::vector<int> hist(n, 0);
  for (int i = 0; i < trials; ++i) {
    Permutation p = sample_avoider(rng, n, Pattern::p312);
    for (uint64_t j = 0; j < n; ++j)
      if (p.values[j] == 1) {
        ++hist[j];
        break;
      }
  }
  SplitLaw law = split_weights(n);
  for (uint64_t j = 0; j < 5; ++j) {
    double p = law.weights[j].get_d();
    double f = double(hist[j]) / trials;
    CHECK(std::abs(f - p) < 4 * std::sqrt(p * (1 - p) / trials));
  }
}

TEST_CASE("pivot_split orientation table") {
  // Block [a, a+n-1] = [10, 17], n = 8, pivot position j = 3.
  PivotSplit s = pivot_split(Pattern::p312, 8, 3, 10);
  CHECK(s.pivot == 10);
  CHECK(s.left_lo == 11);
  CHECK(s.left_size == 2);
  CHECK(s.right_lo == 13);
  CHECK(s.right_size == 5);
  s = pivot_split(Pattern::p213, 8, 3, 10);
  CHECK(s.pivot == 10);
  CHECK(s.left_lo == 16);
  CHECK(s.left_size == 2);
  CHECK(s.right_lo == 11);
  CHECK(s.right_size == 5);
  s = pivot_split(Pattern::p231, 8, 3, 10);
  CHECK(s.pivot == 17);
  CHECK(s.left_lo == 10);
  CHECK(s.left_size == 2);
  CHECK(s.right_lo == 12);
  CHECK(s.right_size == 5);
  s = pivot_split(Pattern::p132, 8, 3, 10);
  CHECK(s.pivot == 17);
  CHECK(s.left_lo == 15);
  CHECK(s.left_size == 2);
  CHECK(s.right_lo == 10);
  CHECK(s.right_size == 5);
}

TEST_CASE("pivot_split pieces are consistent with sampled avoiders") {
  // For each pattern with a split law, the sampled avoider restricted to the
  // left of the pivot position must occupy exactly the left value range.
  RngStream rng(209, 0);
  for (Pattern pat :
       {Pattern::p312, Pattern::p213, Pattern::p231, Pattern::p132}) {
    for (int rep = 0; rep < 200; ++rep) {
      const uint64_t n = 12;
      Permutation p = sample_avoider(rng, n, pat, 3);
      uint64_t target =
          (pat == Pattern::p312 || pat == Pattern::p213) ? 3 : 3 + n - 1;
      uint64_t j = 0;
      while (p.values[j] != target) ++j;
      ++j;  // 1-based pivot position
      PivotSplit s = pivot_split(pat, n, j, 3);
      std::multiset<uint64_t> left(p.values.begin(), p.values.begin() + j - 1);
      std::multiset<uint64_t> want;
      for (uint64_t v = s.left_lo; v < s.left_lo + s.left_size; ++v)
        want.insert(v);
      CHECK(left == want);
    }
  }
}

TEST_CASE("direct block-irreducible sampler matches the rejection law") {
  // n = 4: 5 block-irreducible 321-avoiders; both samplers must be uniform
  // over the same support.
  const int trials = 50000;
  std::map<std::vector<uint64_t>, int> hd, hr;
  RngStream rd(210, 0), rr(210, 1);
  for (int i = 0; i < trials; ++i) {
    Permutation d = sample_birr_321(rd, 4);
    CHECK(is_block_irreducible(d));
    CHECK(avoids(d, Pattern::p321));
    ++hd[d.values];
    Permutation r = sample_birr_321_rejection(rr, 4);
    CHECK(is_block_irreducible(r));
    CHECK(avoids(r, Pattern::p321));
    ++hr[r.values];
  }
  REQUIRE(hd.size() == 5);
  REQUIRE(hr.size() == 5);
  double e = trials / 5.0;
  double chi2d = 0, chi2r = 0;
  for (const auto& [v, c] : hd) chi2d += (c - e) * (c - e) / e;
  for (const auto& [v, c] : hr) chi2r += (c - e) * (c - e) / e;
  CHECK(chi2d < 18.5);  // 99.9% quantile of chi-square(4)
  CHECK(chi2r < 18.5);
}

TEST_CASE("batch sampling is independent of thread count and order") {
  auto a = sample_avoider_batch(211, 5, 300, 20, Pattern::p231);
  auto b = sample_avoider_batch(211, 5, 300, 20, Pattern::p231);
  REQUIRE(a.size() == 300);
  CHECK(a == b);
  // Each trial only depends on its own substream.
  RngStream rng = substream(211, stream_for_trial(5, 77));
  CHECK(a[77] == sample_avoider(rng, 20, Pattern::p231));
}

TEST_CASE("oversize requests throw instead of allocating") {
  RngStream rng(212, 0);
  CHECK_THROWS_AS(sample_avoider(rng, kMaxSampleN + 1, Pattern::p312),
                  std::length_error);
}

TEST_CASE("sample_avoider_image covers empty and shifted blocks") {
  RngStream rng(213, 0);
  Permutation e = sample_avoider_image(rng, 5, 4, Pattern::p312);
  CHECK(e.size() == 0);
  CHECK(e.block_start == 5);
  Permutation p = sample_avoider_image(rng, 5, 14, Pattern::p132);
  CHECK(p.size() == 10);
  CHECK(p.block_start == 5);
  CHECK(p.is_valid());
  CHECK(avoids(p, Pattern::p132));
}
