#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pav/distributions.hpp"
#include "pav/empirical.hpp"
#include "pav/permutation.hpp"
#include "pav/rng.hpp"

namespace pav {

// One coordinate of an infinite random object: a finite value, an infinity
// entry, or the opaque tail marker that ends the partial 321 object.
enum class EntryKind { finite, infinity, tail };

struct ExtEntry {
  EntryKind kind = EntryKind::finite;
  uint64_t value = 0;  // meaningful only for kind == finite
  bool operator==(const ExtEntry&) const = default;
};

std::string format_entry(const ExtEntry& e);  // "7", "inf", "tail"

struct LimitConfig {
  // Mechanism for the heavy-tailed segment-length draws. The random walk is
  // exact but has infinite expected time per draw, so generators default to
  // the equally exact inversion sampler.
  XMechanism x_mech = XMechanism::Inversion;
  // Which sequence drives the inner partial-sum index of the 213 singleton
  // set: the object's own first geometric sequence (default) or a separate
  // independent one (sensitivity check; see README on the index reading).
  enum class IndexReading { inner_y0, inner_independent };
  IndexReading reading = IndexReading::inner_y0;
  // Blocks at most this long are materialized whole by the fast sampler;
  // longer blocks are expanded lazily through the pivot-split law.
  uint64_t small_block = kSplitExactMax;
  // The partial 321 object has no lazy path (its blocks are emitted whole);
  // a block draw above this cap throws instead of exhausting memory.
  uint64_t materialize_cap = uint64_t{1} << 24;

  bool operator==(const LimitConfig&) const = default;
};

struct SegmentRecord {
  enum class Kind { avoider_block, singleton, infinity_run, birr_block, tail_marker };
  Kind kind;
  uint64_t a = 0, b = 0;  // value block [a, b] for block kinds (b = a-1: empty)
  uint64_t value = 0;     // singleton value
  uint64_t run_len = 0;   // infinity-run length
  uint64_t x = 0, y = 0;  // segment-length draws consumed here, when any
  bool operator==(const SegmentRecord&) const = default;
};

// Complete provenance of one generated prefix: the generator identity (enough
// to regenerate deterministically) plus every random draw grouped by segment.
// Records always cover whole segments even when entry emission stops at m.
struct GenerationTrace {
  Pattern pat = Pattern::p312;
  uint64_t seed = 0, stream = 0, m = 0;
  LimitConfig cfg;
  bool has_chi = false;
  uint64_t chi = 0;  // 213: Ber(1/2) choice of singleton index set
  bool has_y = false;
  uint64_t y = 0;  // 321: the single geometric block-count draw
  // 213 singleton machinery, in draw order: outer geometric draws, inner
  // geometric draws, and the unit-shifted heavy-tail partial-sum increments.
  std::vector<uint64_t> aux_y1, aux_inner, aux_xhat;
  std::vector<SegmentRecord> segments;
  bool operator==(const GenerationTrace&) const = default;
};

struct ExtPrefix {
  std::vector<ExtEntry> entries;
  GenerationTrace trace;
};

// First m entries of the three fully described infinite objects. Entries are
// emitted left to right; every draw comes from substream(seed, stream) in a
// fixed documented order, so equal arguments give equal output.
ExtPrefix limit_prefix_312(uint64_t seed, uint64_t stream, uint64_t m,
                           const LimitConfig& cfg = {});
ExtPrefix limit_prefix_231(uint64_t seed, uint64_t stream, uint64_t m,
                           const LimitConfig& cfg = {});
ExtPrefix limit_prefix_213(uint64_t seed, uint64_t stream, uint64_t m,
                           const LimitConfig& cfg = {});

// The partially described 321 object: a geometric number of block-irreducible
// blocks emitted whole, then one tail-marker entry for the unresolved
// continuation. Ignores m by design; throws std::length_error if a block draw
// exceeds cfg.materialize_cap.
ExtPrefix limit_prefix_321_partial(uint64_t seed, uint64_t stream,
                                   const LimitConfig& cfg = {});

// Dispatcher. Throws std::invalid_argument for 123/132: their limit is the
// deterministic all-infinity object, so there is nothing to sample.
ExtPrefix limit_prefix(Pattern pat, uint64_t seed, uint64_t stream, uint64_t m,
                       const LimitConfig& cfg = {});

// JSON round trip for --trace / --replay. The prefix JSON embeds the trace,
// so a trace file alone regenerates and verifies the prefix.
nlohmann::ordered_json prefix_to_json(const ExtPrefix& p);
ExtPrefix prefix_from_json(const nlohmann::json& j);

// Regenerates from the identity recorded in p.trace and compares both the
// trace and the entries. Returns true iff identical; the regenerated prefix
// is written to *out when given.
bool replay_matches(const ExtPrefix& p, ExtPrefix* out = nullptr);

// Empirical law of entry i (1-based) over `trials` independent prefixes,
// trial t on substream stream_for_trial(stream_base, t). Only the three fully
// described objects are supported.
EmpiricalDist coordinate_pmf_limit(Pattern pat, uint64_t i, uint64_t cap,
                                   uint64_t trials, uint64_t seed,
                                   uint64_t stream_base,
                                   const LimitConfig& cfg = {});
// One pass for several coordinates sharing the same trials.
std::vector<EmpiricalDist> coordinate_pmf_limit_multi(
    Pattern pat, const std::vector<uint64_t>& is, uint64_t cap,
    uint64_t trials, uint64_t seed, uint64_t stream_base,
    const LimitConfig& cfg = {});

// Randomness source for the generator cores; swappable in tests to drive the
// constructions with scripted draws.
struct LimitDraws {
  std::function<uint64_t()> y;                    // geometric on {1, 2, ...}
  std::function<uint64_t()> x;                    // heavy-tailed length, >= 0
  std::function<uint64_t()> bit;                  // fair bit
  std::function<uint64_t(uint64_t)> split;        // position ~ split law of n
  std::function<Permutation(uint64_t, Pattern, uint64_t)> block;  // (n, pat, lo)
  std::function<Permutation(uint64_t, uint64_t)> birr;            // (n, lo)
};
LimitDraws rng_draws(RngStream& rng, const LimitConfig& cfg);

namespace detail {
// Generator cores against an arbitrary draw source; trace identity fields
// (seed/stream) are left zero for the caller to fill.
ExtPrefix prefix_312_core(const LimitDraws& d, uint64_t m,
                          const LimitConfig& cfg);
ExtPrefix prefix_231_core(const LimitDraws& d, uint64_t m,
                          const LimitConfig& cfg);
ExtPrefix prefix_213_core(const LimitDraws& d, uint64_t m,
                          const LimitConfig& cfg);
ExtPrefix prefix_321_core(const LimitDraws& d, const LimitConfig& cfg);
}  // namespace detail

}  // namespace pav
