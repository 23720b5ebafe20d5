#pragma once

#include <cstdint>
#include <vector>

namespace pav {

// Bucketed empirical law over {1..cap} + "greater than cap" + "infinity".
// Counts are integers so parallel merges are exact and deterministic.
struct EmpiricalDist {
  uint64_t cap = 0;
  std::vector<uint64_t> finite;  // finite[j-1] = count of value j, 1 <= j <= cap
  uint64_t gt_cap = 0;
  uint64_t inf = 0;
  uint64_t trials = 0;

  explicit EmpiricalDist(uint64_t cap_ = 0) : cap(cap_), finite(cap_, 0) {}

  void add_value(uint64_t v) {
    if (v >= 1 && v <= cap)
      ++finite[v - 1];
    else
      ++gt_cap;
    ++trials;
  }
  void add_inf() {
    ++inf;
    ++trials;
  }
  void merge(const EmpiricalDist& o);

  double mass(uint64_t j) const;  // P(value = j), 1 <= j <= cap
  double mass_gt_cap() const;
  double mass_inf() const;
};

// Half the L1 distance over buckets {1..cap} plus one merged tail bucket
// gt_cap + inf. The merge is the product-topology discretization: weak
// convergence on N u {inf} sends escaping finite mass to infinity, so the two
// tail buckets are indistinguishable at cutoff cap.
double tv_distance(const EmpiricalDist& a, const EmpiricalDist& b);

}  // namespace pav
