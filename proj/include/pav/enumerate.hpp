#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pav/permutation.hpp"

namespace pav {

// Exhaustive enumeration is factorial-time; callers must opt in past this.
inline constexpr uint64_t kDefaultEnumBound = 10;

// Calls fn for every permutation of {1..n} avoiding pat, in lexicographic
// order. n = 0 yields the single empty permutation. Throws std::length_error
// if n exceeds bound.
void enumerate_avoiders(uint64_t n, Pattern pat,
                        const std::function<void(const Permutation&)>& fn,
                        uint64_t bound = kDefaultEnumBound);

std::vector<Permutation> enumerate_avoiders_vec(uint64_t n, Pattern pat,
                                                uint64_t bound = kDefaultEnumBound);

// Number of block-irreducible 321-avoiders of size n, and the count restricted
// to first irreducible block size j (1-based). Enumerative, for cross-checks.
uint64_t count_birr_321(uint64_t n, uint64_t bound = kDefaultEnumBound);
uint64_t count_birr_321_with_first_block(uint64_t n, uint64_t j,
                                         uint64_t bound = kDefaultEnumBound);

}  // namespace pav
