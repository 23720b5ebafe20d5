#include "pav/enumerate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pav {

void enumerate_avoiders(uint64_t n, Pattern pat,
                        const std::function<void(const Permutation&)>& fn,
                        uint64_t bound) {
  if (n > bound)
    throw std::length_error("enumerate_avoiders: n=" + std::to_string(n) +
                            " exceeds bound " + std::to_string(bound));
  Permutation p;
  p.values.resize(n);
  std::iota(p.values.begin(), p.values.end(), uint64_t{1});
  if (n == 0) {
    fn(p);
    return;
  }
  do {
    if (avoids(p, pat)) fn(p);
  } while (std::next_permutation(p.values.begin(), p.values.end()));
}

std::vector<Permutation> enumerate_avoiders_vec(uint64_t n, Pattern pat,
                                                uint64_t bound) {
  std::vector<Permutation> out;
  enumerate_avoiders(n, pat, [&](const Permutation& p) { out.push_back(p); },
                     bound);
  return out;
}

uint64_t count_birr_321(uint64_t n, uint64_t bound) {
  uint64_t c = 0;
  enumerate_avoiders(n, Pattern::p321,
                     [&](const Permutation& p) {
                       if (n > 0 && is_block_irreducible(p)) ++c;
                     },
                     bound);
  return c;
}

uint64_t count_birr_321_with_first_block(uint64_t n, uint64_t j,
                                         uint64_t bound) {
  uint64_t c = 0;
  enumerate_avoiders(n, Pattern::p321,
                     [&](const Permutation& p) {
                       if (n > 0 && first_irreducible_block(p) == j) ++c;
                     },
                     bound);
  return c;
}

}  // namespace pav
