#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "pav/permutation.hpp"

namespace pav {

bool Permutation::is_valid() const {
  std::vector<uint64_t> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != block_start + i) return false;
  return true;
}

Permutation Permutation::standardized() const {
  Permutation p;
  p.block_start = 1;
  p.values.reserve(values.size());
  for (uint64_t v : values) p.values.push_back(v - block_start + 1);
  return p;
}

const char* to_string(Pattern pat) {
  switch (pat) {
    case Pattern::p123: return "123";
    case Pattern::p132: return "132";
    case Pattern::p213: return "213";
    case Pattern::p231: return "231";
    case Pattern::p312: return "312";
    case Pattern::p321: return "321";
  }
  return "?";
}

std::optional<Pattern> pattern_from_string(std::string_view s) {
  for (Pattern pat : kAllPatterns)
    if (s == to_string(pat)) return pat;
  return std::nullopt;
}

namespace {

bool contains123(const std::vector<uint64_t>& v) {
  // low = minimum so far; mid = smallest value with a smaller one before it.
  bool have_mid = false;
  uint64_t low = std::numeric_limits<uint64_t>::max();
  uint64_t mid = 0;
  for (uint64_t x : v) {
    if (have_mid && x > mid) return true;
    if (x < low) {
      low = x;
    } else if (!have_mid || x < mid) {
      mid = x;
      have_mid = true;
    }
  }
  return false;
}

// Right-to-left scan; "third" is the best available middle value that has a
// larger value to its left.
bool contains132(const std::vector<uint64_t>& v) {
  std::vector<uint64_t> stack;
  bool have_third = false;
  uint64_t third = 0;
  for (size_t i = v.size(); i-- > 0;) {
    if (have_third && v[i] < third) return true;
    while (!stack.empty() && stack.back() < v[i]) {
      third = stack.back();
      have_third = true;
      stack.pop_back();
    }
    stack.push_back(v[i]);
  }
  return false;
}

std::vector<uint64_t> reversed(const std::vector<uint64_t>& v) {
  return {v.rbegin(), v.rend()};
}

std::vector<uint64_t> complemented(const std::vector<uint64_t>& v) {
  if (v.empty()) return {};
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  uint64_t s = *lo + *hi;
  std::vector<uint64_t> out;
  out.reserve(v.size());
  for (uint64_t x : v) out.push_back(s - x);
  return out;
}

}  // namespace

bool contains(const Permutation& p, Pattern pat) {
  const auto& v = p.values;
  if (v.size() < 3) return false;
  switch (pat) {
    case Pattern::p123: return contains123(v);
    case Pattern::p321: return contains123(reversed(v));
    case Pattern::p132: return contains132(v);
    case Pattern::p231: return contains132(reversed(v));
    case Pattern::p312: return contains132(complemented(v));
    case Pattern::p213: return contains132(reversed(complemented(v)));
  }
  return false;
}

bool contains_bruteforce(const Permutation& p, Pattern pat) {
  const char* s = to_string(pat);
  int a = s[0] - '0', b = s[1] - '0', c = s[2] - '0';
  const auto& v = p.values;
  size_t n = v.size();
  for (size_t i = 0; i + 2 < n; ++i)
    for (size_t j = i + 1; j + 1 < n; ++j)
      for (size_t k = j + 1; k < n; ++k) {
        uint64_t t[3] = {v[i], v[j], v[k]};
        // rank of each element among the triple, 1-based
        auto rank = [&](int idx) {
          int r = 1;
          for (int m = 0; m < 3; ++m)
            if (t[m] < t[idx]) ++r;
          return r;
        };
        if (rank(0) == a && rank(1) == b && rank(2) == c) return true;
      }
  return false;
}

bool is_block_irreducible(const Permutation& p) {
  if (p.size() == 0)
    throw std::invalid_argument("is_block_irreducible: empty permutation");
  uint64_t running_max = 0;
  for (size_t k = 0; k + 1 < p.size(); ++k) {
    running_max = std::max(running_max, p.values[k]);
    if (running_max == p.block_start + k) return false;
  }
  return true;
}

uint64_t first_irreducible_block(const Permutation& p) {
  if (p.size() == 0)
    throw std::invalid_argument("first_irreducible_block: empty permutation");
  uint64_t running_max = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    running_max = std::max(running_max, p.values[k]);
    if (running_max == p.block_start + k) return k + 1;
  }
  throw std::logic_error("first_irreducible_block: no prefix closed");
}

std::string format_permutation(const Permutation& p) {
  std::string out;
  if (p.block_start != 1) {
    out += 'b';
    out += std::to_string(p.block_start);
    out += ':';
  }
  for (size_t i = 0; i < p.values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.values[i]);
  }
  return out;
}

std::optional<Permutation> parse_permutation(std::string_view line) {
  Permutation p;
  if (!line.empty() && line.front() == 'b') {
    size_t colon = line.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    uint64_t start = 0;
    auto sv = line.substr(1, colon - 1);
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), start);
    if (ec != std::errc() || ptr != sv.data() + sv.size())
      return std::nullopt;
    p.block_start = start;
    line.remove_prefix(colon + 1);
  }
  while (!line.empty()) {
    size_t comma = line.find(',');
    auto tok = line.substr(0, comma);
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      return std::nullopt;
    p.values.push_back(v);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (!p.is_valid()) return std::nullopt;
  return p;
}

}  // namespace pav
