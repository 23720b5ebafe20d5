#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pav {

// A permutation of the contiguous block [block_start, block_start+size-1],
// stored as its value sequence in one-line notation. block_start = 1 is a
// plain permutation; larger starts represent images of shifted blocks.
// The empty permutation is valid.
struct Permutation {
  uint64_t block_start = 1;
  std::vector<uint64_t> values;

  size_t size() const { return values.size(); }
  bool operator==(const Permutation&) const = default;

  // Sorted copy of values equals [block_start, block_start + size - 1].
  bool is_valid() const;
  Permutation standardized() const;
};

enum class Pattern : uint8_t { p123, p132, p213, p231, p312, p321 };

inline constexpr std::array<Pattern, 6> kAllPatterns = {
    Pattern::p123, Pattern::p132, Pattern::p213,
    Pattern::p231, Pattern::p312, Pattern::p321};

const char* to_string(Pattern pat);
std::optional<Pattern> pattern_from_string(std::string_view s);

// True iff some i1 < i2 < i3 realizes the pattern's relative order.
// Linear-time scans: 123 and 132 directly, the others through reverse and
// complement symmetries. Containment depends only on relative order, so it
// is invariant under standardization.
bool contains(const Permutation& p, Pattern pat);

// Cubic scan over all triples; reference implementation for tests.
bool contains_bruteforce(const Permutation& p, Pattern pat);

inline bool avoids(const Permutation& p, Pattern pat) {
  return !contains(p, pat);
}

// Reducible means some proper prefix {start, ..., start+k}, k+1 < size, is
// mapped to itself setwise. A singleton is vacuously irreducible.
bool is_block_irreducible(const Permutation& p);

// Least j >= 1 such that the first j positions hold exactly the values
// {start, ..., start+j-1}. Always exists (j = size works). Size >= 1.
uint64_t first_irreducible_block(const Permutation& p);

// One-line serialization: "5,4,6", with a "b4:" block-start prefix when the
// block does not start at 1. The empty permutation prints as "" or "b4:".
std::string format_permutation(const Permutation& p);
std::optional<Permutation> parse_permutation(std::string_view line);

}  // namespace pav
