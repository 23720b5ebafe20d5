#include "pav/certified.hpp"

#include <mpfr.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pav {

namespace {

// Binet tail mu(z) = ln Gamma(z) - (z - 1/2) ln z + z - ln(2 pi)/2 with
// four series terms; the remainder is bounded by the first omitted term.
// Valid for z >= 64 where the remainder is below 6e-20.
Interval mu_tail(double z) {
  double z2 = z * z;
  double s = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) +
             1.0 / (1260.0 * z * z2 * z2) - 1.0 / (1680.0 * z * z2 * z2 * z2);
  double rem = 1.0 / (1188.0 * z2 * z2 * z2 * z2 * z);
  double slop = 1e-17;  // covers double rounding in the series itself
  return {s - rem - slop, s + rem + slop};
}

// Generous absolute slop for compositions of a handful of libm operations
// on values of magnitude below ~100.
constexpr double kSlop = 1e-12;

}  // namespace

Interval g_central(uint64_t m) {
  if (m < 64) throw std::logic_error("g_central: m must be >= 64");
  double md = (double)m;
  double lead = -0.5 * std::log(std::numbers::pi * md);
  Interval m2 = mu_tail(2.0 * md);
  Interval m1 = mu_tail(md);
  double lo = lead + m2.lo - 2.0 * m1.hi - kSlop;
  double hi = lead + m2.hi - 2.0 * m1.lo + kSlop;
  return {lo, hi};
}

Interval ln_split_ratio(uint64_t s, uint64_t j) {
  if (j < 1 || j > s || s - j < 64)
    throw std::logic_error("ln_split_ratio: needs 1 <= j and s - j >= 64");
  Interval gs = g_central(s);
  Interval gsj = g_central(s - j);
  // ln C_t = G(t) + t ln4 - ln(t+1); the t ln4 parts cancel exactly.
  double corr = std::log(((double)s + 1.0) / ((double)(s - j) + 1.0));
  double lo = gsj.lo - gs.hi + corr - kSlop;
  double hi = gsj.hi - gs.lo + corr + kSlop;
  return {lo, hi};
}

Interval ProbExpr::coarse() const {
  double llo = 0, lhi = 0;
  for (auto [c, m] : g_terms) {
    Interval g = g_central(m);
    if (c >= 0) {
      llo += c * g.lo;
      lhi += c * g.hi;
    } else {
      llo += c * g.hi;
      lhi += c * g.lo;
    }
  }
  double f = mpq_class(factor).get_d();  // truncated toward zero
  double lf = std::log(f);
  llo += lf - kSlop;
  lhi += lf + kSlop;
  double elo = std::exp(llo) * (1 - 1e-13);
  double ehi = std::exp(lhi) * (1 + 1e-13);
  double ad = mpq_class(a).get_d();
  double bd = mpq_class(b).get_d();
  // a and b are small exact rationals (0, 1, 1/2 in practice); their double
  // images are exact or near-exact, covered by the additive slop below.
  double lo = ad + bd * elo - kSlop;
  double hi = ad + bd * ehi + kSlop;
  return {lo, hi};
}

ProbExpr survival_prob(uint64_t j) {
  ProbExpr p;
  p.g_terms.push_back({1, j});
  return p;
}

namespace {

struct MpfrVal {
  mpfr_t v;
  explicit MpfrVal(mpfr_prec_t prec) { mpfr_init2(v, prec); }
  ~MpfrVal() { mpfr_clear(v); }
  MpfrVal(const MpfrVal&) = delete;
  MpfrVal& operator=(const MpfrVal&) = delete;
};

// G(m) with directed rounding. rnd = MPFR_RNDD gives a lower bound,
// MPFR_RNDU an upper bound.
void g_mpfr(mpfr_t out, uint64_t m, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  mpfr_rnd_t anti = (rnd == MPFR_RNDD) ? MPFR_RNDU : MPFR_RNDD;
  MpfrVal t(prec), a(prec), b(prec), c(prec);
  // a = lngamma(2m + 1), rounded toward the bound.
  mpfr_set_uj(t.v, m, MPFR_RNDN);  // exact, prec >= 64
  mpfr_mul_ui(t.v, t.v, 2, MPFR_RNDN);
  mpfr_add_ui(t.v, t.v, 1, MPFR_RNDN);
  mpfr_lngamma(a.v, t.v, rnd);
  // b = lngamma(m + 1), rounded against the bound (it is subtracted).
  mpfr_set_uj(t.v, m, MPFR_RNDN);
  mpfr_add_ui(t.v, t.v, 1, MPFR_RNDN);
  mpfr_lngamma(b.v, t.v, anti);
  // c = 2m ln 2, rounded against the bound.
  mpfr_const_log2(c.v, anti);
  mpfr_mul_ui(c.v, c.v, (unsigned long)m, anti);
  mpfr_mul_ui(c.v, c.v, 2, anti);
  mpfr_mul_ui(b.v, b.v, 2, anti);
  mpfr_sub(out, a.v, b.v, rnd);
  mpfr_sub(out, out, c.v, rnd);
}

void prob_mpfr(mpfr_t out, const ProbExpr& p, mpfr_prec_t prec,
               mpfr_rnd_t rnd) {
  mpfr_rnd_t anti = (rnd == MPFR_RNDD) ? MPFR_RNDU : MPFR_RNDD;
  MpfrVal l(prec), g(prec), q(prec);
  mpfr_set_zero(l.v, 1);
  for (auto [c, m] : p.g_terms) {
    mpfr_rnd_t dir = (c >= 0) ? rnd : anti;
    g_mpfr(g.v, m, prec, dir);
    mpfr_mul_si(g.v, g.v, c, dir);
    mpfr_add(l.v, l.v, g.v, rnd);
  }
  mpfr_set_q(q.v, p.factor.get_mpq_t(), rnd);
  mpfr_log(q.v, q.v, rnd);
  mpfr_add(l.v, l.v, q.v, rnd);
  mpfr_exp(l.v, l.v, rnd);
  mpfr_set_q(q.v, p.b.get_mpq_t(), rnd);
  mpfr_mul(l.v, l.v, q.v, rnd);
  mpfr_set_q(q.v, p.a.get_mpq_t(), rnd);
  mpfr_add(out, l.v, q.v, rnd);
}

}  // namespace

bool lazy_less_than(LazyUniform& u, const ProbExpr& p) {
  // Fast path: one revealed word against double bounds.
  Interval pi = p.coarse();
  uint64_t w0 = u.word(0);
  // (double)w0 rounds to 53 bits, so allow 2^-49 of slack on each side.
  double ulo = (double)w0 * 0x1p-64 - 0x1p-49;
  double uhi = (double)w0 * 0x1p-64 + 0x1p-49;
  if (uhi <= pi.lo) return true;
  if (ulo >= pi.hi) return false;

  // Exact path: MPFR enclosures against the dyadic enclosure of U.
  for (mpfr_prec_t prec = 192; prec <= (1 << 20); prec *= 2) {
    MpfrVal plo(prec), phi(prec);
    prob_mpfr(plo.v, p, prec, MPFR_RNDD);
    prob_mpfr(phi.v, p, prec, MPFR_RNDU);
    size_t want_words = (size_t)(prec / 64) + 2;
    mpz_class acc = 0;
    for (size_t i = 0; i < want_words; ++i) {
      acc <<= 64;
      acc += u.word(i);
    }
    long bits = (long)(64 * want_words);
    MpfrVal a(bits + 4), b(bits + 4);
    mpfr_set_z(a.v, acc.get_mpz_t(), MPFR_RNDN);  // exact at this precision
    mpfr_mul_2si(a.v, a.v, -bits, MPFR_RNDN);
    mpfr_set_z(b.v, mpz_class(acc + 1).get_mpz_t(), MPFR_RNDN);
    mpfr_mul_2si(b.v, b.v, -bits, MPFR_RNDN);
    // U in [a, b); decide if the enclosures separate.
    if (mpfr_cmp(b.v, plo.v) <= 0) return true;
    if (mpfr_cmp(a.v, phi.v) >= 0) return false;
  }
  throw std::runtime_error("lazy_less_than: failed to separate at max precision");
}

bool certified_bernoulli(RngStream& rng, const ProbExpr& p) {
  LazyUniform u(rng);
  return lazy_less_than(u, p);
}

}  // namespace pav
