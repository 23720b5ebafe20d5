#include "pav/catalan.hpp"

#include <mutex>
#include <stdexcept>

namespace pav {

CatalanTable::CatalanTable() : mu_(new std::mutex) {
  values_.reserve(256);
  values_.emplace_back(1);
}

CatalanTable& CatalanTable::instance() {
  static CatalanTable table;
  return table;
}

void CatalanTable::ensure(size_t n) {
  std::lock_guard<std::mutex> lock(*static_cast<std::mutex*>(mu_));
  while (values_.size() <= n) {
    size_t k = values_.size();
    mpz_class next = values_.back() * (4 * (unsigned long)k - 2);
    mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), (unsigned long)k + 1);
    values_.push_back(std::move(next));
  }
}

mpz_class CatalanTable::get(size_t n) {
  ensure(n);
  std::lock_guard<std::mutex> lock(*static_cast<std::mutex*>(mu_));
  return values_[n];
}

mpz_class catalan(size_t n) { return CatalanTable::instance().get(n); }

SplitLaw split_weights(uint64_t n) {
  if (n == 0) throw std::invalid_argument("split_weights: n must be >= 1");
  auto& table = CatalanTable::instance();
  table.ensure(n);
  SplitLaw law;
  law.n = n;
  law.weights.reserve(n);
  mpz_class cn = table.get(n);
  for (uint64_t j = 1; j <= n; ++j) {
    mpq_class w(table.get(j - 1) * table.get(n - j), cn);
    w.canonicalize();
    law.weights.push_back(std::move(w));
  }
  return law;
}

std::vector<mpq_class> nu_n_pmf(uint64_t n) { return split_weights(n).weights; }

NuLimitPmf nu_limit_pmf(uint64_t cap) {
  if (cap == 0) throw std::invalid_argument("nu_limit_pmf: cap must be >= 1");
  NuLimitPmf pmf;
  pmf.inf_mass = mpq_class(1, 2);
  mpz_class pow4 = 1;
  mpq_class total = 0;
  pmf.finite.reserve(cap);
  for (uint64_t j = 1; j <= cap; ++j) {
    pow4 *= 4;
    mpq_class w(catalan(j - 1), pow4);
    w.canonicalize();
    total += w;
    pmf.finite.push_back(std::move(w));
  }
  pmf.gt_cap_mass = mpq_class(1, 2) - total;
  return pmf;
}

}  // namespace pav
