#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace pav {

// pcg64 (PCG XSL RR 128/64). Substreams select distinct odd increments, so
// every (seed, stream) pair is an independent, platform-stable sequence.
// The generator is pure integer arithmetic; the same (seed, stream) always
// yields the same outputs.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(uint64_t seed, uint64_t stream);

  uint64_t next_u64();

  // Single fair bit, consumed LSB-first from a buffered word.
  bool next_bit();

  // Exactly uniform on {0, ..., m-1} via masked rejection. m >= 1.
  uint64_t uniform_below(uint64_t m);

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
  uint64_t seed_;
  uint64_t stream_;
  uint64_t bit_buf_ = 0;
  int bit_count_ = 0;

  void step();
};

// Derives the per-task stream for a keyed subtask. Trial t of an experiment
// with base index b uses substream(seed, (b << 32) | t); bases stay below
// 2^32 and trial counts stay below 2^32, so streams never collide.
RngStream substream(uint64_t seed, uint64_t k);
inline uint64_t stream_for_trial(uint64_t base, uint64_t trial) {
  return (base << 32) | trial;
}

// A uniform U in [0,1) whose bits are drawn on demand, 64 at a time.
// word(0) is most significant. After k words are drawn, U is known to lie
// in [prefix, prefix + 2^(-64k)) where prefix = sum word(i) * 2^(-64(i+1)).
// Unrevealed bits are never consumed from the underlying stream.
class LazyUniform {
 public:
  explicit LazyUniform(RngStream& rng) : rng_(&rng) {}

  size_t words() const { return w_.size(); }
  uint64_t word(size_t i) {
    while (w_.size() <= i) w_.push_back(rng_->next_u64());
    return w_[i];
  }

 private:
  RngStream* rng_;
  std::vector<uint64_t> w_;
};

}  // namespace pav
