#include "irntc/rng.hpp"

#include <cmath>

namespace irntc {

uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(uint64_t seed, uint64_t stream) {
  uint64_t state = seed ^ (stream * 0xA3EC647659359ACDULL + 0x1BULL);
  std::seed_seq seq{splitmix64_next(state), splitmix64_next(state),
                    splitmix64_next(state), splitmix64_next(state),
                    splitmix64_next(state), splitmix64_next(state),
                    splitmix64_next(state), splitmix64_next(state)};
  gen_.seed(seq);
}

double RngStream::uniform() {
  // 53 random bits into [0, 1).
  return (gen_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian(double sigma) {
  if (has_spare_) {
    has_spare_ = false;
    return spare_ * sigma;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f * sigma;
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

}  // namespace irntc
