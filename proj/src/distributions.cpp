#include "pav/distributions.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "pav/catalan.hpp"
#include "pav/certified.hpp"

namespace pav {

uint64_t sample_Y(RngStream& rng) {
  uint64_t n = 1;
  while (!rng.next_bit()) ++n;
  return n;
}

uint64_t sample_X_walk(RngStream& rng) {
  uint64_t h = 1;
  uint64_t t = 1;
  while (h != 0) {
    h += rng.next_bit() ? 1 : -1;
    ++t;
  }
  return t / 2 - 1;
}

std::optional<uint64_t> sample_X_capped(RngStream& rng, uint64_t cap) {
  uint64_t max_t = 2 * (cap + 1);
  uint64_t h = 1;
  uint64_t t = 1;
  while (t < max_t) {
    h += rng.next_bit() ? 1 : -1;
    ++t;
    if (h == 0) return t / 2 - 1;
  }
  return std::nullopt;  // no return by 2(cap+1) steps, so X > cap
}

namespace {

// kCentral[j] = binom(2j, j); fits 128 bits for j <= 63.
const std::array<unsigned __int128, 64>& central_binomials() {
  static const std::array<unsigned __int128, 64> table = [] {
    std::array<unsigned __int128, 64> t{};
    mpz_class b = 1;
    for (uint64_t j = 0; j < 64; ++j) {
      mpz_class r = b & mpz_class(0xffffffffffffffffUL);
      mpz_class q = b >> 64;
      t[j] = ((unsigned __int128)q.get_ui() << 64) | r.get_ui();
      // binom(2(j+1), j+1) = binom(2j, j) * 2(2j+1) / (j+1)
      b *= 2 * (2 * j + 1);
      mpz_divexact_ui(b.get_mpz_t(), b.get_mpz_t(), (unsigned long)j + 1);
    }
    return t;
  }();
  return table;
}

// Decides U < Q_j for the survival values Q_j = binom(2j,j) 4^-j.
// For j <= 32, Q_j 2^64 is an integer, so one revealed word settles it;
// for j <= 63 the same holds at 128 bits. Larger j go through certified
// enclosures.
bool u_below_survival(LazyUniform& u, uint64_t j) {
  if (j == 0) return true;
  const auto& central = central_binomials();
  if (j <= 32) {
    unsigned __int128 m = central[j] << (64 - 2 * j);
    return u.word(0) < (uint64_t)m;
  }
  if (j <= 63) {
    unsigned __int128 m = central[j] << (128 - 2 * j);
    unsigned __int128 uu =
        ((unsigned __int128)u.word(0) << 64) | u.word(1);
    return uu < m;
  }
  return lazy_less_than(u, survival_prob(j));
}

}  // namespace

uint64_t sample_X_inversion(RngStream& rng) {
  LazyUniform u(rng);
  if (!u_below_survival(u, 1)) return 0;
  uint64_t lo = 1;  // invariant: U < Q_lo
  uint64_t hi = 2;
  while (u_below_survival(u, hi)) {
    lo = hi;
    if (hi > (1ULL << 62))
      throw std::overflow_error("sample_X_inversion: draw exceeds 2^62");
    hi *= 2;
  }
  while (hi - lo > 1) {
    uint64_t mid = lo + (hi - lo) / 2;
    if (u_below_survival(u, mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

uint64_t sample_X(RngStream& rng, XMechanism mech) {
  return mech == XMechanism::Walk ? sample_X_walk(rng)
                                  : sample_X_inversion(rng);
}

mpq_class x_survival_exact(uint64_t j) {
  if (j >= 64) throw std::invalid_argument("x_survival_exact: j < 64 only");
  if (j == 0) return 1;
  const auto& central = central_binomials();
  unsigned __int128 n = central[j];
  mpz_class num = (uint64_t)(n >> 64);
  num <<= 64;
  num += (uint64_t)n;
  mpq_class q(num, mpz_class(1) << (2 * j));
  q.canonicalize();
  return q;
}

mpz_class uniform_below_mpz(RngStream& rng, const mpz_class& m) {
  if (m <= 0) throw std::invalid_argument("uniform_below_mpz: m must be > 0");
  size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
  size_t words = (bits + 63) / 64;
  unsigned top_bits = (unsigned)(bits - 64 * (words - 1));
  uint64_t top_mask =
      top_bits >= 64 ? ~0ULL : ((uint64_t)1 << top_bits) - 1;
  for (;;) {
    mpz_class v = 0;
    for (size_t i = 0; i < words; ++i) {
      uint64_t w = rng.next_u64();
      if (i == 0) w &= top_mask;
      v <<= 64;
      v += w;
    }
    if (v < m) return v;
  }
}

namespace {

uint64_t sample_split_exact(uint64_t n, RngStream& rng) {
  auto& table = CatalanTable::instance();
  table.ensure(n);
  mpz_class v = uniform_below_mpz(rng, table.get(n));
  // Folded cumulative walk over symmetric pairs (j, n+1-j): the split law
  // puts half its mass within O(sqrt(n)) of each end, so this terminates
  // after O(sqrt(n)) bigint steps in expectation.
  mpz_class w = table.get(n - 1);  // W_1 = C_0 C_{n-1}
  mpz_class acc = 0;
  for (uint64_t j = 1; 2 * j < n + 1; ++j) {
    mpz_class pair_hi = acc + w;
    if (v < pair_hi) return j;
    pair_hi += w;
    if (v < pair_hi) return n + 1 - j;
    acc = std::move(pair_hi);
    // W_{j+1} = W_j * (C_j / C_{j-1}) * (C_{n-j-1} / C_{n-j})
    w *= (4 * j - 2) * (n - j + 1);
    mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(),
                    (unsigned long)((j + 1) * (4 * (n - j) - 2)));
  }
  if (n % 2 == 1) return (n + 1) / 2;
  throw std::logic_error("sample_split_exact: ran past total mass");
}

// P(j) proportional to C_{j-1} C_{s-j} on the low half [1, h], via rejection
// against the limit law nu(j) = C_{j-1} 4^-j. The acceptance ratio
// R(j) = C_{s-j} 4^j / C_s is increasing in j, so R(h) bounds it.
uint64_t sample_split_low_half(uint64_t s, uint64_t h, RngStream& rng) {
  Interval lr = ln_split_ratio(s, h);
  double up = std::exp(lr.hi) * (1 + 1e-12) + 1e-15;
  mpz_class num = (long)std::ceil(up * (double)(1 << 20));
  mpq_class mbar(num, 1 << 20);
  mbar.canonicalize();
  for (;;) {
    uint64_t x;
    do {
      x = sample_X_inversion(rng);
    } while (x > h - 1);
    uint64_t j = x + 1;
    ProbExpr accept;
    accept.g_terms = {{1, s - j}, {-1, s}};
    accept.factor = mpq_class(s + 1) / (mpq_class(s - j + 1) * mbar);
    accept.factor.canonicalize();
    if (certified_bernoulli(rng, accept)) return j;
  }
}

uint64_t sample_split_huge(uint64_t s, RngStream& rng) {
  bool low;
  uint64_t h;
  if (s % 2 == 1) {
    h = (s - 1) / 2;
    // Middle mass nu_s(h+1) = C_h^2 / C_s, then an even split of the rest.
    ProbExpr mid;
    mid.g_terms = {{2, h}, {-1, s}};
    mid.factor = mpq_class(s + 1) / (mpq_class(4) * (h + 1) * (h + 1));
    mid.factor.canonicalize();
    LazyUniform u(rng);
    if (lazy_less_than(u, mid)) return h + 1;
    ProbExpr threshold = mid;  // (1 + mid)/2
    threshold.a = mpq_class(1, 2);
    threshold.b = mpq_class(1, 2);
    low = lazy_less_than(u, threshold);
  } else {
    h = s / 2;
    low = rng.next_bit();
  }
  uint64_t j = sample_split_low_half(s, h, rng);
  return low ? j : s + 1 - j;
}

}  // namespace

uint64_t sample_split_position(uint64_t n, RngStream& rng) {
  if (n == 0)
    throw std::invalid_argument("sample_split_position: n must be >= 1");
  if (n == 1) return 1;
  if (n <= kSplitExactMax) return sample_split_exact(n, rng);
  return sample_split_huge(n, rng);
}

}  // namespace pav
