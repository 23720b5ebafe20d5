#include "pav/limits.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>

#include "pav/sampler.hpp"

namespace pav {

namespace {

constexpr unsigned __int128 kU64Max = std::numeric_limits<uint64_t>::max();

uint64_t check_entry(unsigned __int128 v, const char* what) {
  if (v > kU64Max)
    throw std::overflow_error(std::string(what) + " exceeds 64 bits");
  return static_cast<uint64_t>(v);
}

// Lazy in-order expansion of a uniform avoider image on [lo, lo + size - 1]
// for the pivot-split patterns. Subtrees at most small_block long are
// materialized whole by the fast sampler; larger ones split at a pivot drawn
// from the exact split law, so only the entries actually requested force
// draws. Requesting all `size` entries yields exactly a uniform avoider.
class BlockEmitter {
 public:
  BlockEmitter(Pattern pat, uint64_t size, uint64_t lo, const LimitDraws& d,
               uint64_t small_block)
      : pat_(pat), draws_(d), small_(small_block ? small_block : 1),
        remaining_(size) {
    if (size > 0) stack_.push_back(Item{false, size, lo});
  }

  bool done() const { return remaining_ == 0; }

  uint64_t next() {
    for (;;) {
      if (bufpos_ < buf_.size()) {
        --remaining_;
        return buf_[bufpos_++];
      }
      Item it = stack_.back();
      stack_.pop_back();
      if (it.is_value) {
        --remaining_;
        return it.size_or_value;
      }
      if (it.size_or_value <= small_) {
        Permutation p = draws_.block(it.size_or_value, pat_, it.lo);
        buf_ = std::move(p.values);
        bufpos_ = 0;
        continue;
      }
      uint64_t j = draws_.split(it.size_or_value);
      PivotSplit s = pivot_split(pat_, it.size_or_value, j, it.lo);
      if (s.right_size > 0)
        stack_.push_back(Item{false, s.right_size, s.right_lo});
      stack_.push_back(Item{true, s.pivot, 0});
      if (s.left_size > 0) stack_.push_back(Item{false, s.left_size, s.left_lo});
    }
  }

 private:
  struct Item {
    bool is_value;
    uint64_t size_or_value;  // pending subtree size, or the value to emit
    uint64_t lo;
  };
  Pattern pat_;
  const LimitDraws& draws_;
  uint64_t small_;
  uint64_t remaining_;
  std::vector<Item> stack_;
  std::vector<uint64_t> buf_;
  size_t bufpos_ = 0;
};

}  // namespace

std::string format_entry(const ExtEntry& e) {
  switch (e.kind) {
    case EntryKind::finite:
      return std::to_string(e.value);
    case EntryKind::infinity:
      return "inf";
    case EntryKind::tail:
      return "tail";
  }
  throw std::logic_error("unreachable entry kind");
}

LimitDraws rng_draws(RngStream& rng, const LimitConfig& cfg) {
  LimitDraws d;
  d.y = [&rng] { return sample_Y(rng); };
  d.x = [&rng, mech = cfg.x_mech] { return sample_X(rng, mech); };
  d.bit = [&rng] { return static_cast<uint64_t>(rng.next_bit()); };
  d.split = [&rng](uint64_t n) { return sample_split_position(n, rng); };
  d.block = [&rng](uint64_t n, Pattern pat, uint64_t lo) {
    return sample_avoider(rng, n, pat, lo);
  };
  d.birr = [&rng](uint64_t n, uint64_t lo) {
    return sample_birr_321(rng, n, lo);
  };
  return d;
}

namespace detail {

// Segment n: a uniform 312-avoiding image of the x_n values just above the
// singleton, then the singleton t_n^y + t_{n-1}^x, the largest value smaller
// than the block's. Draw order per segment: y, x, then block entries on
// demand left to right.
ExtPrefix prefix_312_core(const LimitDraws& d, uint64_t m,
                          const LimitConfig& cfg) {
  ExtPrefix out;
  out.trace.pat = Pattern::p312;
  out.trace.m = m;
  out.trace.cfg = cfg;
  unsigned __int128 ty = 0, tx = 0;
  while (out.entries.size() < m) {
    uint64_t y = d.y();
    ty += y;
    uint64_t x = d.x();
    unsigned __int128 base = ty + tx;  // the singleton; block sits above it
    SegmentRecord block{};
    block.kind = SegmentRecord::Kind::avoider_block;
    block.a = check_entry(base + 1, "block value");
    block.b = check_entry(base + x, "block value");
    block.x = x;
    block.y = y;
    out.trace.segments.push_back(block);
    if (x > 0) {
      BlockEmitter be(Pattern::p312, x, block.a, d, cfg.small_block);
      while (!be.done() && out.entries.size() < m)
        out.entries.push_back({EntryKind::finite, be.next()});
    }
    tx += x;
    SegmentRecord singleton{};
    singleton.kind = SegmentRecord::Kind::singleton;
    singleton.value = static_cast<uint64_t>(base);
    out.trace.segments.push_back(singleton);
    if (out.entries.size() < m)
      out.entries.push_back({EntryKind::finite, singleton.value});
  }
  return out;
}

// Segment n: a uniform 231-avoiding image of the next x_n integers, then one
// infinity entry. Finite values tile the integers with no gaps.
ExtPrefix prefix_231_core(const LimitDraws& d, uint64_t m,
                          const LimitConfig& cfg) {
  ExtPrefix out;
  out.trace.pat = Pattern::p231;
  out.trace.m = m;
  out.trace.cfg = cfg;
  unsigned __int128 tx = 0;
  while (out.entries.size() < m) {
    uint64_t x = d.x();
    SegmentRecord block{};
    block.kind = SegmentRecord::Kind::avoider_block;
    block.a = check_entry(tx + 1, "block value");
    block.b = check_entry(tx + x, "block value");
    block.x = x;
    out.trace.segments.push_back(block);
    if (x > 0) {
      BlockEmitter be(Pattern::p231, x, block.a, d, cfg.small_block);
      while (!be.done() && out.entries.size() < m)
        out.entries.push_back({EntryKind::finite, be.next()});
    }
    tx += x;
    SegmentRecord run{};
    run.kind = SegmentRecord::Kind::infinity_run;
    run.run_len = 1;
    out.trace.segments.push_back(run);
    if (out.entries.size() < m) out.entries.push_back({EntryKind::infinity});
  }
  return out;
}

// Segment n: a run of x_n infinity entries (possibly none), then the n-th
// smallest element of the singleton index set. The index set is a union of
// consecutive intervals; interval r has length given by the outer geometric
// sequence and is shifted by the heavy-tail partial sum taken at an inner
// geometric partial sum (the inner indices are drawn as their own sequence;
// see LimitConfig::reading). Draw order: the Bernoulli choice first; per
// segment the run length; per interval advance the outer geometric, then
// the inner geometric, then the unit-shifted heavy-tail increments the inner
// index calls for.
ExtPrefix prefix_213_core(const LimitDraws& d, uint64_t m,
                          const LimitConfig& cfg) {
  ExtPrefix out;
  out.trace.pat = Pattern::p213;
  out.trace.m = m;
  out.trace.cfg = cfg;
  if (m == 0) return out;
  uint64_t chi = d.bit();
  out.trace.has_chi = true;
  out.trace.chi = chi;
  unsigned __int128 ty1_lo = 0, ty1_hi = 0;  // outer partial sums T_r, T_{r+1}
  unsigned __int128 t_inner = 0;             // inner geometric partial sum
  unsigned __int128 txhat = 0, k = 0;        // heavy-tail partial sum to index k
  unsigned __int128 cur = 1, hi = 0;         // singleton cursor within interval
  bool started = false;
  auto advance_interval = [&] {
    uint64_t y1 = d.y();
    out.trace.aux_y1.push_back(y1);
    ty1_lo = ty1_hi;
    ty1_hi += y1;
    // chi = 1 indexes the heavy-tail sum at the inner partial sum before this
    // interval (interval 0 needs no inner draw); chi = 0 at the one after.
    if (chi == 0 || started) {
      uint64_t yi = d.y();
      out.trace.aux_inner.push_back(yi);
      t_inner += yi;
    }
    started = true;
    while (k < t_inner) {
      uint64_t xh = d.x() + 1;
      out.trace.aux_xhat.push_back(xh);
      txhat += xh;
      ++k;
    }
    cur = ty1_lo + txhat + 1;
    hi = ty1_hi + txhat;
  };
  while (out.entries.size() < m) {
    uint64_t x = d.x();
    SegmentRecord run{};
    run.kind = SegmentRecord::Kind::infinity_run;
    run.run_len = x;
    out.trace.segments.push_back(run);
    for (uint64_t i = 0; i < x && out.entries.size() < m; ++i)
      out.entries.push_back({EntryKind::infinity});
    if (!started || cur > hi) advance_interval();
    SegmentRecord singleton{};
    singleton.kind = SegmentRecord::Kind::singleton;
    singleton.value = check_entry(cur, "singleton value");
    ++cur;
    out.trace.segments.push_back(singleton);
    if (out.entries.size() < m)
      out.entries.push_back({EntryKind::finite, singleton.value});
  }
  return out;
}

// A geometric number y gives y - 1 block-irreducible blocks of unit-shifted
// heavy-tail lengths, emitted whole, then the opaque tail marker. The
// continuation past the marker is not described, so nothing is fabricated.
ExtPrefix prefix_321_core(const LimitDraws& d, const LimitConfig& cfg) {
  ExtPrefix out;
  out.trace.pat = Pattern::p321;
  out.trace.cfg = cfg;
  uint64_t y = d.y();
  out.trace.has_y = true;
  out.trace.y = y;
  unsigned __int128 txhat = 0;
  for (uint64_t kk = 1; kk < y; ++kk) {
    uint64_t xh = d.x() + 1;
    if (xh > cfg.materialize_cap)
      throw std::length_error("block of length " + std::to_string(xh) +
                              " exceeds materialize cap " +
                              std::to_string(cfg.materialize_cap));
    SegmentRecord block{};
    block.kind = SegmentRecord::Kind::birr_block;
    block.a = check_entry(txhat + 1, "block value");
    block.b = check_entry(txhat + xh, "block value");
    block.x = xh;
    out.trace.segments.push_back(block);
    Permutation p = d.birr(xh, block.a);
    for (uint64_t v : p.values) out.entries.push_back({EntryKind::finite, v});
    txhat += xh;
  }
  SegmentRecord tail{};
  tail.kind = SegmentRecord::Kind::tail_marker;
  out.trace.segments.push_back(tail);
  out.entries.push_back({EntryKind::tail});
  return out;
}

}  // namespace detail

namespace {

ExtPrefix run_generator(Pattern pat, uint64_t seed, uint64_t stream,
                        uint64_t m, const LimitConfig& cfg) {
  RngStream rng = substream(seed, stream);
  LimitDraws d = rng_draws(rng, cfg);
  ExtPrefix p;
  switch (pat) {
    case Pattern::p312:
      p = detail::prefix_312_core(d, m, cfg);
      break;
    case Pattern::p231:
      p = detail::prefix_231_core(d, m, cfg);
      break;
    case Pattern::p213:
      p = detail::prefix_213_core(d, m, cfg);
      break;
    case Pattern::p321:
      p = detail::prefix_321_core(d, cfg);
      break;
    default:
      throw std::invalid_argument(
          std::string("the limit object for ") + to_string(pat) +
          " is deterministic: every entry is inf; nothing to generate");
  }
  p.trace.seed = seed;
  p.trace.stream = stream;
  return p;
}

}  // namespace

ExtPrefix limit_prefix_312(uint64_t seed, uint64_t stream, uint64_t m,
                           const LimitConfig& cfg) {
  return run_generator(Pattern::p312, seed, stream, m, cfg);
}
ExtPrefix limit_prefix_231(uint64_t seed, uint64_t stream, uint64_t m,
                           const LimitConfig& cfg) {
  return run_generator(Pattern::p231, seed, stream, m, cfg);
}
ExtPrefix limit_prefix_213(uint64_t seed, uint64_t stream, uint64_t m,
                           const LimitConfig& cfg) {
  return run_generator(Pattern::p213, seed, stream, m, cfg);
}
ExtPrefix limit_prefix_321_partial(uint64_t seed, uint64_t stream,
                                   const LimitConfig& cfg) {
  return run_generator(Pattern::p321, seed, stream, 0, cfg);
}
ExtPrefix limit_prefix(Pattern pat, uint64_t seed, uint64_t stream, uint64_t m,
                       const LimitConfig& cfg) {
  return run_generator(pat, seed, stream, m, cfg);
}

namespace {

const char* kind_name(SegmentRecord::Kind k) {
  switch (k) {
    case SegmentRecord::Kind::avoider_block:
      return "avoider-block";
    case SegmentRecord::Kind::singleton:
      return "singleton";
    case SegmentRecord::Kind::infinity_run:
      return "infinity-run";
    case SegmentRecord::Kind::birr_block:
      return "birr-block";
    case SegmentRecord::Kind::tail_marker:
      return "tail-marker";
  }
  throw std::logic_error("unreachable segment kind");
}

SegmentRecord::Kind kind_from_name(const std::string& s) {
  if (s == "avoider-block") return SegmentRecord::Kind::avoider_block;
  if (s == "singleton") return SegmentRecord::Kind::singleton;
  if (s == "infinity-run") return SegmentRecord::Kind::infinity_run;
  if (s == "birr-block") return SegmentRecord::Kind::birr_block;
  if (s == "tail-marker") return SegmentRecord::Kind::tail_marker;
  throw std::invalid_argument("unknown segment kind: " + s);
}

}  // namespace

nlohmann::ordered_json prefix_to_json(const ExtPrefix& p) {
  nlohmann::ordered_json j;
  const GenerationTrace& t = p.trace;
  j["pattern"] = to_string(t.pat);
  j["seed"] = t.seed;
  j["stream"] = t.stream;
  j["prefix_len"] = t.m;
  j["config"] = {
      {"x_mech", t.cfg.x_mech == XMechanism::Walk ? "walk" : "inversion"},
      {"index_reading",
       t.cfg.reading == LimitConfig::IndexReading::inner_y0 ? "y0"
                                                            : "independent"},
      {"small_block", t.cfg.small_block},
      {"materialize_cap", t.cfg.materialize_cap},
  };
  if (t.has_chi) j["chi"] = t.chi;
  if (t.has_y) j["y"] = t.y;
  if (!t.aux_y1.empty()) j["aux_y1"] = t.aux_y1;
  if (!t.aux_inner.empty()) j["aux_inner"] = t.aux_inner;
  if (!t.aux_xhat.empty()) j["aux_xhat"] = t.aux_xhat;
  nlohmann::ordered_json segs = nlohmann::ordered_json::array();
  for (const SegmentRecord& s : t.segments) {
    nlohmann::ordered_json r;
    r["kind"] = kind_name(s.kind);
    switch (s.kind) {
      case SegmentRecord::Kind::avoider_block:
      case SegmentRecord::Kind::birr_block:
        r["a"] = s.a;
        r["b"] = s.b;
        r["x"] = s.x;
        if (s.y != 0) r["y"] = s.y;
        break;
      case SegmentRecord::Kind::singleton:
        r["value"] = s.value;
        break;
      case SegmentRecord::Kind::infinity_run:
        r["run_len"] = s.run_len;
        break;
      case SegmentRecord::Kind::tail_marker:
        break;
    }
    segs.push_back(std::move(r));
  }
  j["segments"] = std::move(segs);
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (const ExtEntry& e : p.entries) entries.push_back(format_entry(e));
  j["entries"] = std::move(entries);
  return j;
}

ExtPrefix prefix_from_json(const nlohmann::json& j) {
  ExtPrefix p;
  GenerationTrace& t = p.trace;
  std::string pat_name = j.at("pattern").get<std::string>();
  std::optional<Pattern> pat = pattern_from_string(pat_name);
  if (!pat) throw std::invalid_argument("unknown pattern: " + pat_name);
  t.pat = *pat;
  t.seed = j.at("seed").get<uint64_t>();
  t.stream = j.at("stream").get<uint64_t>();
  t.m = j.at("prefix_len").get<uint64_t>();
  const auto& c = j.at("config");
  std::string mech = c.at("x_mech").get<std::string>();
  if (mech == "walk")
    t.cfg.x_mech = XMechanism::Walk;
  else if (mech == "inversion")
    t.cfg.x_mech = XMechanism::Inversion;
  else
    throw std::invalid_argument("unknown x_mech: " + mech);
  std::string reading = c.at("index_reading").get<std::string>();
  if (reading == "y0")
    t.cfg.reading = LimitConfig::IndexReading::inner_y0;
  else if (reading == "independent")
    t.cfg.reading = LimitConfig::IndexReading::inner_independent;
  else
    throw std::invalid_argument("unknown index_reading: " + reading);
  t.cfg.small_block = c.at("small_block").get<uint64_t>();
  t.cfg.materialize_cap = c.at("materialize_cap").get<uint64_t>();
  if (j.contains("chi")) {
    t.has_chi = true;
    t.chi = j.at("chi").get<uint64_t>();
  }
  if (j.contains("y")) {
    t.has_y = true;
    t.y = j.at("y").get<uint64_t>();
  }
  if (j.contains("aux_y1"))
    t.aux_y1 = j.at("aux_y1").get<std::vector<uint64_t>>();
  if (j.contains("aux_inner"))
    t.aux_inner = j.at("aux_inner").get<std::vector<uint64_t>>();
  if (j.contains("aux_xhat"))
    t.aux_xhat = j.at("aux_xhat").get<std::vector<uint64_t>>();
  for (const auto& r : j.at("segments")) {
    SegmentRecord s{};
    s.kind = kind_from_name(r.at("kind").get<std::string>());
    switch (s.kind) {
      case SegmentRecord::Kind::avoider_block:
      case SegmentRecord::Kind::birr_block:
        s.a = r.at("a").get<uint64_t>();
        s.b = r.at("b").get<uint64_t>();
        s.x = r.at("x").get<uint64_t>();
        if (r.contains("y")) s.y = r.at("y").get<uint64_t>();
        break;
      case SegmentRecord::Kind::singleton:
        s.value = r.at("value").get<uint64_t>();
        break;
      case SegmentRecord::Kind::infinity_run:
        s.run_len = r.at("run_len").get<uint64_t>();
        break;
      case SegmentRecord::Kind::tail_marker:
        break;
    }
    t.segments.push_back(s);
  }
  for (const auto& e : j.at("entries")) {
    std::string v = e.get<std::string>();
    if (v == "inf")
      p.entries.push_back({EntryKind::infinity});
    else if (v == "tail")
      p.entries.push_back({EntryKind::tail});
    else
      p.entries.push_back({EntryKind::finite, std::stoull(v)});
  }
  return p;
}

bool replay_matches(const ExtPrefix& p, ExtPrefix* out) {
  ExtPrefix re = p.trace.pat == Pattern::p321
                     ? limit_prefix_321_partial(p.trace.seed, p.trace.stream,
                                                p.trace.cfg)
                     : limit_prefix(p.trace.pat, p.trace.seed, p.trace.stream,
                                    p.trace.m, p.trace.cfg);
  bool ok = re.trace == p.trace && re.entries == p.entries;
  if (out) *out = std::move(re);
  return ok;
}

std::vector<EmpiricalDist> coordinate_pmf_limit_multi(
    Pattern pat, const std::vector<uint64_t>& is, uint64_t cap,
    uint64_t trials, uint64_t seed, uint64_t stream_base,
    const LimitConfig& cfg) {
  if (pat != Pattern::p312 && pat != Pattern::p231 && pat != Pattern::p213)
    throw std::invalid_argument(
        "coordinate law supported only for the fully described objects");
  uint64_t max_i = 0;
  for (uint64_t i : is) {
    if (i == 0) throw std::invalid_argument("coordinates are 1-based");
    max_i = std::max(max_i, i);
  }
  std::vector<EmpiricalDist> hists(is.size(), EmpiricalDist(cap));
#pragma omp parallel
  {
    std::vector<EmpiricalDist> local(is.size(), EmpiricalDist(cap));
#pragma omp for schedule(dynamic, 64) nowait
    for (int64_t t = 0; t < static_cast<int64_t>(trials); ++t) {
      ExtPrefix p =
          limit_prefix(pat, seed, stream_for_trial(stream_base, t), max_i, cfg);
      for (size_t k = 0; k < is.size(); ++k) {
        const ExtEntry& e = p.entries[is[k] - 1];
        if (e.kind == EntryKind::infinity)
          local[k].add_inf();
        else
          local[k].add_value(e.value);
      }
    }
#pragma omp critical
    for (size_t k = 0; k < is.size(); ++k) hists[k].merge(local[k]);
  }
  return hists;
}

EmpiricalDist coordinate_pmf_limit(Pattern pat, uint64_t i, uint64_t cap,
                                   uint64_t trials, uint64_t seed,
                                   uint64_t stream_base,
                                   const LimitConfig& cfg) {
  return coordinate_pmf_limit_multi(pat, {i}, cap, trials, seed, stream_base,
                                    cfg)[0];
}

}  // namespace pav
