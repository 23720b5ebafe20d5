#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pav/distributions.hpp"
#include "pav/empirical.hpp"
#include "pav/enumerate.hpp"
#include "pav/limits.hpp"
#include "pav/permutation.hpp"

namespace pav {

// Law of sigma_i under the uniform avoider measure on [n]. Monte-Carlo trial
// t runs on substream(seed, stream_for_trial(stream_base, t)); counts are
// integers, so results are identical for any thread count.
EmpiricalDist empirical_coordinate_pmf(Pattern pat, uint64_t n, uint64_t i,
                                       uint64_t cap, uint64_t trials,
                                       uint64_t seed, uint64_t stream_base);
// One sampling pass shared by several coordinates.
std::vector<EmpiricalDist> empirical_coordinate_pmf_multi(
    Pattern pat, uint64_t n, const std::vector<uint64_t>& is, uint64_t cap,
    uint64_t trials, uint64_t seed, uint64_t stream_base);
// Exact law by exhaustive enumeration (trials = C_n).
EmpiricalDist exact_coordinate_pmf(Pattern pat, uint64_t n, uint64_t i,
                                   uint64_t cap,
                                   uint64_t bound = kDefaultEnumBound);

// Positional split law: the position of the block minimum (312, 213) or
// maximum (231, 132) against the exact weights C_{j-1}C_{n-j}/C_n. Exact mode
// classifies every enumerated avoider and is an identity: max_abs_error is
// exactly 0 whenever the law holds.
struct PositionalCheck {
  Pattern pat;
  uint64_t n = 0;
  bool exact = false;
  uint64_t trials = 0;  // 0 in exact mode
  std::vector<double> observed, expected;  // index j-1 maps to position j
  double max_abs_error = 0;
};
PositionalCheck check_positional_law_exact(uint64_t n, Pattern pat,
                                           uint64_t bound = kDefaultEnumBound);
PositionalCheck check_positional_law_mc(uint64_t n, Pattern pat,
                                        uint64_t trials, uint64_t seed,
                                        uint64_t stream_base);

// P(sigma_j <= L) under the uniform 123- or 132-avoider on [n], across an
// n-grid. Both classes escape to infinity coordinatewise, so the column
// should fall toward 0 as n grows.
struct EscapeRow {
  uint64_t n = 0;
  uint64_t hits = 0;
  uint64_t trials = 0;
  double p = 0;
};
std::vector<EscapeRow> escape_scan(Pattern pat, uint64_t j, uint64_t L,
                                   const std::vector<uint64_t>& n_grid,
                                   uint64_t trials, uint64_t seed,
                                   uint64_t stream_base);
double escape_exact(Pattern pat, uint64_t j, uint64_t L, uint64_t n,
                    uint64_t bound = kDefaultEnumBound);

// Characteristic-function check of the quadratic-scale limit of the
// heavy-tail partial sums: empirical average of exp(-i t T_n / n^2) against
// exp(-(sqrt2/2)|t|^{1/2}(1 + i sgn t)).
struct CFPoint {
  double t = 0;
  std::complex<double> empirical{0, 0}, reference{0, 0};
  double abs_error = 0;
};
std::complex<double> stable_cf_reference(double t);
std::vector<CFPoint> stable_cf_check(uint64_t n, uint64_t trials,
                                     const std::vector<double>& ts,
                                     uint64_t seed, uint64_t stream_base,
                                     XMechanism mech = XMechanism::Inversion);

// TV distance between finite-n coordinate marginals and the limit-object
// marginals, per coordinate and grid point. Consumes stream bases
// [stream_base, stream_base + n_grid.size()]: the limit side first, then one
// per grid point.
struct ConvergenceCell {
  uint64_t i = 0, n = 0;
  double tv = 0;
};
struct ConvergenceReport {
  Pattern pat;
  uint64_t cap = 0, trials = 0;
  std::vector<uint64_t> i_list, n_grid;
  std::vector<ConvergenceCell> cells;          // for each i, for each n
  std::vector<EmpiricalDist> limit_marginals;  // one per i
};
ConvergenceReport convergence_report(Pattern pat,
                                     const std::vector<uint64_t>& i_list,
                                     uint64_t cap,
                                     const std::vector<uint64_t>& n_grid,
                                     uint64_t trials, uint64_t seed,
                                     uint64_t stream_base,
                                     const LimitConfig& cfg = {});

// Extended mode of the convergence test: joint law of the adjacent pair
// (coordinate i, coordinate i+1), finite n versus the limit generator. The
// product-topology bucketing applies per component: values above cap,
// infinities, and the opaque tail all collapse into one tail bucket, giving
// (cap+1)^2 joint cells.
struct JointConvergenceReport {
  Pattern pat;
  uint64_t i = 0, cap = 0, trials = 0;
  std::vector<uint64_t> n_grid;
  std::vector<double> tv;  // one per grid point
};
JointConvergenceReport joint_convergence_report(
    Pattern pat, uint64_t i, uint64_t cap, const std::vector<uint64_t>& n_grid,
    uint64_t trials, uint64_t seed, uint64_t stream_base,
    const LimitConfig& cfg = {});

// Chi-square goodness of fit of the sampler against the full enumerated
// avoider class, plus a full avoidance audit of every draw. cells = 1
// degenerates to an exact count check. pass requires the statistic below the
// chi-square quantile (default 99.9%) and the audit clean.
struct UniformityResult {
  Pattern pat;
  uint64_t n = 0, draws = 0, cells = 0;
  double chi2 = 0, critical = 0;
  bool all_avoid = false, pass = false;
};
UniformityResult uniformity_chi_square(Pattern pat, uint64_t n, uint64_t draws,
                                       uint64_t seed, uint64_t stream_base,
                                       double quantile = 0.999);

// Enumerated class sizes against the exact Catalan values, for all six
// patterns and, optionally, the block-irreducible 321 classes.
struct CountsReport {
  struct Row {
    std::string what;  // pattern name, or "birr-321"
    uint64_t n = 0;
    uint64_t count = 0, expected = 0;
    bool ok = false;
  };
  std::vector<Row> rows;
  bool pass = false;
};
CountsReport verify_counts(uint64_t max_n, bool include_birr = true,
                           uint64_t bound = kDefaultEnumBound);

}  // namespace pav
