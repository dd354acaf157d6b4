#include "hdgc/rng.hpp"

#include <cmath>
#include <numbers>

#include "hdgc/errors.hpp"

namespace hdgc {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t stream_id(uint64_t purpose, uint64_t a, uint64_t b) {
  return splitmix64(splitmix64(purpose) ^ splitmix64(a * 0x9E3779B97F4A7C15ULL + 1) ^
                    splitmix64(b * 0xC2B2AE3D27D4EB4FULL + 2));
}

RngStream::RngStream(uint64_t seed, uint64_t id)
    : engine_(splitmix64(splitmix64(seed) ^ id)) {}

uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0,1] so the log is finite
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = mag * std::sin(ang);
  have_spare_ = true;
  return mag * std::cos(ang);
}

double RngStream::normal(double mean, double sd) { return mean + sd * normal(); }

int RngStream::uniform_int(int lo, int hi) {
  if (hi < lo) throw InvalidParameterError("uniform_int: empty range");
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  // rejection sampling keeps the draw unbiased
  const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

std::vector<int> RngStream::sample_without_replacement(const std::vector<int>& pool, int k) {
  if (k < 0 || static_cast<size_t>(k) > pool.size())
    throw InvalidParameterError("sample_without_replacement: k exceeds pool size");
  std::vector<int> work = pool;
  for (int i = 0; i < k; ++i) {
    const int j = uniform_int(i, static_cast<int>(work.size()) - 1);
    std::swap(work[static_cast<size_t>(i)], work[static_cast<size_t>(j)]);
  }
  work.resize(static_cast<size_t>(k));
  return work;
}

}  // namespace hdgc
