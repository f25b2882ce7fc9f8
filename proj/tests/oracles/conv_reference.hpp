#pragma once

// Reference tail-biting encoder written as a plain cyclic convolution of the
// message with each generator's tap vector. It shares no mechanism with the
// trellis-walk encoder it referees: output bit (t, c) is computed directly as
//   sum_d g_c[d] * u[(t - d) mod k]  (mod 2),
// where g_c[d] is bit (nu - d) of generator c.

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

inline std::vector<uint8_t> tb_encode_cyclic(int nu, const std::array<uint32_t, 3>& gen,
                                             const std::vector<uint8_t>& u) {
  const int k = static_cast<int>(u.size());
  std::vector<uint8_t> out(3 * static_cast<size_t>(k));
  for (int t = 0; t < k; ++t) {
    for (int c = 0; c < 3; ++c) {
      int bit = 0;
      for (int d = 0; d <= nu; ++d) {
        if ((gen[static_cast<size_t>(c)] >> (nu - d)) & 1u)
          bit ^= u[static_cast<size_t>(((t - d) % k + k) % k)];
      }
      out[static_cast<size_t>(3 * t + c)] = static_cast<uint8_t>(bit);
    }
  }
  return out;
}

}  // namespace oracle
