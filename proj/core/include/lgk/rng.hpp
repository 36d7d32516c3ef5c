#pragma once

#include <cmath>
#include <cstdint>

namespace lgk {

// Stream purposes, part of the reproducibility contract: the stream for
// (master_seed, replica, purpose) is the same regardless of thread schedule.
enum class RngPurpose : std::uint64_t {
  InitialSample = 1,
  Dynamics = 2,
  Generic = 3,
};

// Counter-based stream: output i is a fixed 64-bit mix of (key, i), so
// draws depend only on (master_seed, replica, purpose, counter).
class RngStream {
public:
  RngStream(std::uint64_t master_seed, std::uint64_t replica, RngPurpose purpose);

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Exponential waiting time with the given rate.
  double next_exponential(double rate) { return -std::log1p(-next_double()) / rate; }

  // Uniform in {0, ..., n-1}, unbiased via power-of-two rejection.
  std::uint64_t next_below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replica, RngPurpose purpose) {
  std::uint64_t k = mix(master_seed + 0x9E3779B97F4A7C15ull);
  k = mix(k ^ mix(replica + 0xD1B54A32D192ED03ull));
  key_ = mix(k ^ mix(static_cast<std::uint64_t>(purpose) + 0x8CB92BA72F3D8DD7ull));
}

inline std::uint64_t RngStream::next_below(std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t mask = ~0ull >> __builtin_clzll(n - 1 | 1);
  for (;;) {
    std::uint64_t r = next_u64() & mask;
    if (r < n) return r;
  }
}

}  // namespace lgk
