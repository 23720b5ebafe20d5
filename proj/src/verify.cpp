#include "pav/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pav/catalan.hpp"
#include "pav/rng.hpp"
#include "pav/sampler.hpp"

namespace pav {

void EmpiricalDist::merge(const EmpiricalDist& o) {
  if (cap != o.cap)
    throw std::invalid_argument("EmpiricalDist::merge: bucket cap mismatch");
  for (uint64_t j = 0; j < cap; ++j) finite[j] += o.finite[j];
  gt_cap += o.gt_cap;
  inf += o.inf;
  trials += o.trials;
}

double EmpiricalDist::mass(uint64_t j) const {
  if (j < 1 || j > cap)
    throw std::out_of_range("EmpiricalDist::mass: bucket out of range");
  return trials == 0 ? 0.0 : double(finite[j - 1]) / double(trials);
}

double EmpiricalDist::mass_gt_cap() const {
  return trials == 0 ? 0.0 : double(gt_cap) / double(trials);
}

double EmpiricalDist::mass_inf() const {
  return trials == 0 ? 0.0 : double(inf) / double(trials);
}

double tv_distance(const EmpiricalDist& a, const EmpiricalDist& b) {
  if (a.cap != b.cap)
    throw std::invalid_argument("tv_distance: bucket cap mismatch");
  if (a.trials == 0 || b.trials == 0)
    throw std::invalid_argument("tv_distance: empty distribution");
  double s = 0;
  for (uint64_t j = 1; j <= a.cap; ++j) s += std::abs(a.mass(j) - b.mass(j));
  s += std::abs((a.mass_gt_cap() + a.mass_inf()) -
                (b.mass_gt_cap() + b.mass_inf()));
  return s / 2;
}

std::vector<EmpiricalDist> empirical_coordinate_pmf_multi(
    Pattern pat, uint64_t n, const std::vector<uint64_t>& is, uint64_t cap,
    uint64_t trials, uint64_t seed, uint64_t stream_base) {
  for (uint64_t i : is)
    if (i < 1 || i > n)
      throw std::invalid_argument(
          "empirical_coordinate_pmf: coordinate outside [1, n]");
  std::vector<EmpiricalDist> out(is.size(), EmpiricalDist(cap));
#pragma omp parallel
  {
    std::vector<EmpiricalDist> loc(is.size(), EmpiricalDist(cap));
#pragma omp for schedule(dynamic, 64) nowait
    for (uint64_t t = 0; t < trials; ++t) {
      RngStream rng = substream(seed, stream_for_trial(stream_base, t));
      Permutation s = sample_avoider(rng, n, pat);
      for (size_t k = 0; k < is.size(); ++k)
        loc[k].add_value(s.values[is[k] - 1]);
    }
#pragma omp critical
    for (size_t k = 0; k < is.size(); ++k) out[k].merge(loc[k]);
  }
  return out;
}

EmpiricalDist empirical_coordinate_pmf(Pattern pat, uint64_t n, uint64_t i,
                                       uint64_t cap, uint64_t trials,
                                       uint64_t seed, uint64_t stream_base) {
  return empirical_coordinate_pmf_multi(pat, n, {i}, cap, trials, seed,
                                        stream_base)[0];
}

EmpiricalDist exact_coordinate_pmf(Pattern pat, uint64_t n, uint64_t i,
                                   uint64_t cap, uint64_t bound) {
  if (i < 1 || i > n)
    throw std::invalid_argument(
        "exact_coordinate_pmf: coordinate outside [1, n]");
  EmpiricalDist d(cap);
  enumerate_avoiders(
      n, pat, [&](const Permutation& p) { d.add_value(p.values[i - 1]); },
      bound);
  return d;
}

namespace {

// Position of the forced pivot: the block minimum for 312 and 213, the block
// maximum for 231 and 132. These are the four classes with a split law.
uint64_t pivot_position(const Permutation& p, Pattern pat) {
  uint64_t target;
  switch (pat) {
    case Pattern::p312:
    case Pattern::p213:
      target = 1;
      break;
    case Pattern::p231:
    case Pattern::p132:
      target = p.size();
      break;
    default:
      throw std::invalid_argument("positional law: pattern has no split law");
  }
  for (uint64_t j = 1; j <= p.size(); ++j)
    if (p.values[j - 1] == target) return j;
  throw std::logic_error("pivot_position: value missing");
}

}  // namespace

PositionalCheck check_positional_law_exact(uint64_t n, Pattern pat,
                                           uint64_t bound) {
  if (n < 1)
    throw std::invalid_argument("check_positional_law_exact: n >= 1");
  PositionalCheck r;
  r.pat = pat;
  r.n = n;
  r.exact = true;
  std::vector<uint64_t> counts(n, 0);
  uint64_t total = 0;
  enumerate_avoiders(
      n, pat,
      [&](const Permutation& p) {
        ++counts[pivot_position(p, pat) - 1];
        ++total;
      },
      bound);
  SplitLaw law = split_weights(n);
  r.observed.resize(n);
  r.expected.resize(n);
  mpq_class worst = 0;
  for (uint64_t j = 1; j <= n; ++j) {
    mpq_class obs(counts[j - 1], total);
    obs.canonicalize();
    mpq_class diff = abs(obs - law.weights[j - 1]);
    if (diff > worst) worst = diff;
    r.observed[j - 1] = obs.get_d();
    r.expected[j - 1] = law.weights[j - 1].get_d();
  }
  // Exact rational comparison: 0 here means the law holds identically.
  r.max_abs_error = worst.get_d();
  return r;
}

PositionalCheck check_positional_law_mc(uint64_t n, Pattern pat,
                                        uint64_t trials, uint64_t seed,
                                        uint64_t stream_base) {
  if (n < 1) throw std::invalid_argument("check_positional_law_mc: n >= 1");
  PositionalCheck r;
  r.pat = pat;
  r.n = n;
  r.exact = false;
  r.trials = trials;
  std::vector<uint64_t> counts(n, 0);
#pragma omp parallel
  {
    std::vector<uint64_t> loc(n, 0);
#pragma omp for schedule(dynamic, 64) nowait
    for (uint64_t t = 0; t < trials; ++t) {
      RngStream rng = substream(seed, stream_for_trial(stream_base, t));
      Permutation s = sample_avoider(rng, n, pat);
      ++loc[pivot_position(s, pat) - 1];
    }
#pragma omp critical
    for (uint64_t j = 0; j < n; ++j) counts[j] += loc[j];
  }
  SplitLaw law = split_weights(n);
  r.observed.resize(n);
  r.expected.resize(n);
  double worst = 0;
  for (uint64_t j = 0; j < n; ++j) {
    r.observed[j] = trials == 0 ? 0.0 : double(counts[j]) / double(trials);
    r.expected[j] = law.weights[j].get_d();
    worst = std::max(worst, std::abs(r.observed[j] - r.expected[j]));
  }
  r.max_abs_error = worst;
  return r;
}

std::vector<EscapeRow> escape_scan(Pattern pat, uint64_t j, uint64_t L,
                                   const std::vector<uint64_t>& n_grid,
                                   uint64_t trials, uint64_t seed,
                                   uint64_t stream_base) {
  if (j < 1) throw std::invalid_argument("escape_scan: j >= 1");
  for (uint64_t n : n_grid)
    if (n < j) throw std::invalid_argument("escape_scan: grid point below j");
  std::vector<EscapeRow> rows;
  rows.reserve(n_grid.size());
  for (size_t g = 0; g < n_grid.size(); ++g) {
    uint64_t n = n_grid[g];
    uint64_t hits = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : hits)
    for (uint64_t t = 0; t < trials; ++t) {
      RngStream rng =
          substream(seed, stream_for_trial(stream_base + g, t));
      Permutation s = sample_avoider(rng, n, pat);
      if (s.values[j - 1] <= L) ++hits;
    }
    rows.push_back(
        {n, hits, trials, trials == 0 ? 0.0 : double(hits) / double(trials)});
  }
  return rows;
}

double escape_exact(Pattern pat, uint64_t j, uint64_t L, uint64_t n,
                    uint64_t bound) {
  if (j < 1 || j > n) throw std::invalid_argument("escape_exact: need 1 <= j <= n");
  uint64_t hits = 0, total = 0;
  enumerate_avoiders(
      n, pat,
      [&](const Permutation& p) {
        ++total;
        if (p.values[j - 1] <= L) ++hits;
      },
      bound);
  return double(hits) / double(total);
}

std::complex<double> stable_cf_reference(double t) {
  double a = (std::sqrt(2.0) / 2.0) * std::sqrt(std::abs(t));
  double sgn = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
  return std::exp(std::complex<double>(-a, -a * sgn));
}

std::vector<CFPoint> stable_cf_check(uint64_t n, uint64_t trials,
                                     const std::vector<double>& ts,
                                     uint64_t seed, uint64_t stream_base,
                                     XMechanism mech) {
  if (n < 1) throw std::invalid_argument("stable_cf_check: n >= 1");
  if (trials < 1) throw std::invalid_argument("stable_cf_check: trials >= 1");
  // Fixed-size chunks are each reduced serially in trial order and then
  // combined in chunk order, so the floating-point sum is identical for any
  // thread count.
  const uint64_t chunk = 64;
  const uint64_t nchunks = (trials + chunk - 1) / chunk;
  std::vector<std::complex<double>> partial(nchunks * ts.size(), {0, 0});
#pragma omp parallel for schedule(dynamic, 1)
  for (uint64_t c = 0; c < nchunks; ++c) {
    uint64_t t0 = c * chunk;
    uint64_t t1 = std::min(trials, t0 + chunk);
    std::vector<std::complex<double>> acc(ts.size(), {0, 0});
    for (uint64_t t = t0; t < t1; ++t) {
      RngStream rng = substream(seed, stream_for_trial(stream_base, t));
      unsigned __int128 total = 0;
      for (uint64_t k = 0; k < n; ++k) total += sample_X(rng, mech);
      double z = double(total) / (double(n) * double(n));
      for (size_t k = 0; k < ts.size(); ++k) {
        double phase = ts[k] * z;
        acc[k] += std::complex<double>(std::cos(phase), -std::sin(phase));
      }
    }
    for (size_t k = 0; k < ts.size(); ++k) partial[c * ts.size() + k] = acc[k];
  }
  std::vector<CFPoint> out(ts.size());
  for (size_t k = 0; k < ts.size(); ++k) {
    std::complex<double> sum{0, 0};
    for (uint64_t c = 0; c < nchunks; ++c) sum += partial[c * ts.size() + k];
    out[k].t = ts[k];
    out[k].empirical = sum / double(trials);
    out[k].reference = stable_cf_reference(ts[k]);
    out[k].abs_error = std::abs(out[k].empirical - out[k].reference);
  }
  return out;
}

ConvergenceReport convergence_report(Pattern pat,
                                     const std::vector<uint64_t>& i_list,
                                     uint64_t cap,
                                     const std::vector<uint64_t>& n_grid,
                                     uint64_t trials, uint64_t seed,
                                     uint64_t stream_base,
                                     const LimitConfig& cfg) {
  ConvergenceReport rep;
  rep.pat = pat;
  rep.cap = cap;
  rep.trials = trials;
  rep.i_list = i_list;
  rep.n_grid = n_grid;
  rep.limit_marginals = coordinate_pmf_limit_multi(pat, i_list, cap, trials,
                                                   seed, stream_base, cfg);
  std::vector<std::vector<EmpiricalDist>> finite;
  finite.reserve(n_grid.size());
  for (size_t g = 0; g < n_grid.size(); ++g)
    finite.push_back(empirical_coordinate_pmf_multi(
        pat, n_grid[g], i_list, cap, trials, seed, stream_base + 1 + g));
  for (size_t a = 0; a < i_list.size(); ++a)
    for (size_t g = 0; g < n_grid.size(); ++g)
      rep.cells.push_back(
          {i_list[a], n_grid[g],
           tv_distance(finite[g][a], rep.limit_marginals[a])});
  return rep;
}

namespace {

// Per-component bucket for the joint test: finite values 1..cap keep their
// own cell, everything else (large finite, inf, tail) is the tail cell.
uint64_t pair_bucket_value(uint64_t v, uint64_t cap) {
  return (v >= 1 && v <= cap) ? v - 1 : cap;
}
uint64_t pair_bucket_entry(const ExtEntry& e, uint64_t cap) {
  return e.kind == EntryKind::finite ? pair_bucket_value(e.value, cap) : cap;
}

double joint_tv(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                uint64_t trials) {
  double s = 0;
  for (size_t c = 0; c < a.size(); ++c)
    s += std::abs(double(a[c]) - double(b[c]));
  return s / (2.0 * double(trials));
}

}  // namespace

JointConvergenceReport joint_convergence_report(
    Pattern pat, uint64_t i, uint64_t cap, const std::vector<uint64_t>& n_grid,
    uint64_t trials, uint64_t seed, uint64_t stream_base,
    const LimitConfig& cfg) {
  if (i < 1) throw std::invalid_argument("joint_convergence_report: i >= 1");
  if (trials < 1)
    throw std::invalid_argument("joint_convergence_report: trials >= 1");
  for (uint64_t n : n_grid)
    if (n < i + 1)
      throw std::invalid_argument(
          "joint_convergence_report: grid point below i + 1");
  const size_t cells = (cap + 1) * (cap + 1);

  std::vector<uint64_t> limit_counts(cells, 0);
#pragma omp parallel
  {
    std::vector<uint64_t> loc(cells, 0);
#pragma omp for schedule(dynamic, 64) nowait
    for (uint64_t t = 0; t < trials; ++t) {
      ExtPrefix p = limit_prefix(pat, seed, stream_for_trial(stream_base, t),
                                 i + 1, cfg);
      uint64_t u = pair_bucket_entry(p.entries[i - 1], cap);
      uint64_t v = pair_bucket_entry(p.entries[i], cap);
      ++loc[u * (cap + 1) + v];
    }
#pragma omp critical
    for (size_t c = 0; c < cells; ++c) limit_counts[c] += loc[c];
  }

  JointConvergenceReport rep;
  rep.pat = pat;
  rep.i = i;
  rep.cap = cap;
  rep.trials = trials;
  rep.n_grid = n_grid;
  for (size_t g = 0; g < n_grid.size(); ++g) {
    std::vector<uint64_t> counts(cells, 0);
#pragma omp parallel
    {
      std::vector<uint64_t> loc(cells, 0);
#pragma omp for schedule(dynamic, 64) nowait
      for (uint64_t t = 0; t < trials; ++t) {
        RngStream rng =
            substream(seed, stream_for_trial(stream_base + 1 + g, t));
        Permutation s = sample_avoider(rng, n_grid[g], pat);
        uint64_t u = pair_bucket_value(s.values[i - 1], cap);
        uint64_t v = pair_bucket_value(s.values[i], cap);
        ++loc[u * (cap + 1) + v];
      }
#pragma omp critical
      for (size_t c = 0; c < cells; ++c) counts[c] += loc[c];
    }
    rep.tv.push_back(joint_tv(counts, limit_counts, trials));
  }
  return rep;
}

namespace {

uint64_t pack_values(const Permutation& p) {
  uint64_t key = 0;
  for (size_t i = 0; i < p.values.size(); ++i)
    key |= (p.values[i] - 1) << (4 * i);
  return key;
}

}  // namespace

UniformityResult uniformity_chi_square(Pattern pat, uint64_t n, uint64_t draws,
                                       uint64_t seed, uint64_t stream_base,
                                       double quantile) {
  if (n < 1 || n > kDefaultEnumBound)
    throw std::invalid_argument(
        "uniformity_chi_square: n must be in [1, enumeration bound]");
  std::vector<Permutation> cells = enumerate_avoiders_vec(n, pat);
  std::unordered_map<uint64_t, size_t> index;
  index.reserve(cells.size() * 2);
  for (size_t c = 0; c < cells.size(); ++c) index[pack_values(cells[c])] = c;

  std::vector<uint64_t> counts(cells.size(), 0);
  bool all_avoid = true;
#pragma omp parallel
  {
    std::vector<uint64_t> loc(cells.size(), 0);
    bool ok = true;
#pragma omp for schedule(dynamic, 256) nowait
    for (uint64_t t = 0; t < draws; ++t) {
      RngStream rng = substream(seed, stream_for_trial(stream_base, t));
      Permutation s = sample_avoider(rng, n, pat);
      if (contains(s, pat)) ok = false;
      auto it = index.find(pack_values(s));
      if (it == index.end())
        ok = false;
      else
        ++loc[it->second];
    }
#pragma omp critical
    {
      for (size_t c = 0; c < counts.size(); ++c) counts[c] += loc[c];
      all_avoid = all_avoid && ok;
    }
  }

  UniformityResult r;
  r.pat = pat;
  r.n = n;
  r.draws = draws;
  r.cells = cells.size();
  r.all_avoid = all_avoid;
  double e = double(draws) / double(cells.size());
  double chi2 = 0;
  for (uint64_t c : counts) {
    double d = double(c) - e;
    chi2 += d * d / e;
  }
  r.chi2 = chi2;
  if (cells.size() > 1) {
    boost::math::chi_squared dist(double(cells.size() - 1));
    r.critical = boost::math::quantile(dist, quantile);
  }
  r.pass = all_avoid && (cells.size() == 1 || r.chi2 < r.critical);
  return r;
}

CountsReport verify_counts(uint64_t max_n, bool include_birr, uint64_t bound) {
  CountsReport rep;
  rep.pass = true;
  auto push = [&](std::string what, uint64_t n, uint64_t count,
                  uint64_t expected) {
    bool ok = count == expected;
    rep.pass = rep.pass && ok;
    rep.rows.push_back({std::move(what), n, count, expected, ok});
  };
  for (Pattern pat : kAllPatterns)
    for (uint64_t n = 0; n <= max_n; ++n) {
      uint64_t c = 0;
      enumerate_avoiders(n, pat, [&](const Permutation&) { ++c; }, bound);
      push(to_string(pat), n, c, catalan(n).get_ui());
    }
  if (include_birr)
    for (uint64_t n = 1; n <= max_n; ++n) {
      push("birr-321", n, count_birr_321(n, bound),
           catalan(n - 1).get_ui());
      for (uint64_t j = 1; j <= n; ++j)
        push("321-first-block-" + std::to_string(j), n,
             count_birr_321_with_first_block(n, j, bound),
             mpz_class(catalan(j - 1) * catalan(n - j)).get_ui());
    }
  return rep;
}

}  // namespace pav
