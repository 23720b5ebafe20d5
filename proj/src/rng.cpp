#include "pav/rng.hpp"

namespace pav {

namespace {

constexpr unsigned __int128 kMul =
    ((unsigned __int128)0x2360ed051fc65da4ULL << 64) | 0x4385df649fccf645ULL;

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

unsigned __int128 expand128(uint64_t v, uint64_t salt) {
  uint64_t s = v ^ salt;
  uint64_t hi = splitmix64(s);
  uint64_t lo = splitmix64(s);
  return ((unsigned __int128)hi << 64) | lo;
}

}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t stream)
    : seed_(seed), stream_(stream) {
  unsigned __int128 initstate = expand128(seed, 0x853c49e6748fea9bULL);
  unsigned __int128 initseq = expand128(stream, 0xda3e39cb94b95bdbULL);
  state_ = 0;
  inc_ = (initseq << 1) | 1;
  step();
  state_ += initstate;
  step();
}

void RngStream::step() { state_ = state_ * kMul + inc_; }

uint64_t RngStream::next_u64() {
  step();
  uint64_t xored = (uint64_t)(state_ >> 64) ^ (uint64_t)state_;
  unsigned rot = (unsigned)(state_ >> 122);
  return std::rotr(xored, (int)rot);
}

bool RngStream::next_bit() {
  if (bit_count_ == 0) {
    bit_buf_ = next_u64();
    bit_count_ = 64;
  }
  bool b = bit_buf_ & 1;
  bit_buf_ >>= 1;
  --bit_count_;
  return b;
}

uint64_t RngStream::uniform_below(uint64_t m) {
  if (m <= 1) return 0;
  uint64_t mask = ~0ULL >> std::countl_zero(m - 1);
  for (;;) {
    uint64_t v = next_u64() & mask;
    if (v < m) return v;
  }
}

RngStream substream(uint64_t seed, uint64_t k) { return RngStream(seed, k); }

}  // namespace pav
