#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hdgc {

// Deterministic random substreams. A stream is identified by (seed, id);
// the same pair always yields the same draws no matter what other streams
// were consumed before, so per-channel generation can run in any order
// (or on any number of threads) without changing the output.
//
// Distributions are hand-rolled on top of mt19937_64 because the standard
// library's distribution objects are implementation-defined; byte-identical
// output is part of the simulator's contract.
class RngStream {
public:
  RngStream(uint64_t seed, uint64_t stream_id);

  uint64_t next_u64();

  // uniform on [0, 1)
  double uniform();
  double uniform(double lo, double hi);

  // standard normal via Box-Muller; consumes two uniforms per pair
  double normal();
  double normal(double mean, double sd);

  // integer on [lo, hi], inclusive
  int uniform_int(int lo, int hi);

  // k distinct values from pool, by partial Fisher-Yates
  std::vector<int> sample_without_replacement(const std::vector<int>& pool, int k);

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream-id helpers: combine a purpose tag with up to two indices.
uint64_t stream_id(uint64_t purpose, uint64_t a = 0, uint64_t b = 0);

}  // namespace hdgc
