#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace pav {

// Cache of Catalan numbers C_0, C_1, ... grown via
// C_n = C_{n-1} * (4n - 2) / (n + 1) (the division is exact).
// Safe for concurrent use; parallel sections that hammer it should call
// ensure() once up front so reads never contend on growth.
class CatalanTable {
 public:
  static CatalanTable& instance();

  void ensure(size_t n);
  mpz_class get(size_t n);

 private:
  CatalanTable();
  std::vector<mpz_class> values_;
  void* mu_;  // std::mutex kept out of the header
};

mpz_class catalan(size_t n);

// Exact split weights w_j = C_{j-1} C_{n-j} / C_n, j = 1..n. The weights sum
// to exactly 1 (the Catalan recurrence) and are symmetric, w_j = w_{n+1-j}.
struct SplitLaw {
  uint64_t n = 0;
  std::vector<mpq_class> weights;
};

SplitLaw split_weights(uint64_t n);

// Finite split pmf as exact rationals; identical to split_weights(n).weights.
std::vector<mpq_class> nu_n_pmf(uint64_t n);

// Limit split pmf truncated at cap: finite[j-1] = C_{j-1} / 4^j for j <= cap,
// inf_mass = 1/2, and the leftover beyond cap is 1 - inf_mass - sum(finite).
struct NuLimitPmf {
  std::vector<mpq_class> finite;
  mpq_class inf_mass;
  mpq_class gt_cap_mass;
};

NuLimitPmf nu_limit_pmf(uint64_t cap);

}  // namespace pav
