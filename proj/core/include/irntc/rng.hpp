#pragma once

#include <cstdint>
#include <random>

namespace irntc {

// SplitMix64 step; used to derive independent stream seeds.
uint64_t splitmix64_next(uint64_t& state);

// A deterministic random stream: mt19937_64 seeded from (seed, stream) via
// SplitMix64, so distinct stream ids give statistically independent engines
// and results are reproducible for a fixed (seed, stream-count) layout.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t stream = 0);

  uint64_t next_u64() { return gen_(); }
  double uniform();                   // [0, 1)
  double gaussian(double sigma = 1.0);  // Marsaglia polar method
  bool bernoulli(double p);
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irntc
