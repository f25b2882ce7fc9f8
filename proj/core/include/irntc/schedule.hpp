#pragma once

#include <vector>

namespace irntc {

// Decoding-attempt schedule: cumulative blocklengths n_1 < n_2 < ... < n_m
// for a k-bit message. Increments are I_1 = n_1, I_j = n_j - n_{j-1}.
struct IncrementSchedule {
  int k = 0;
  std::vector<int> n;

  static IncrementSchedule from_increments(int k, const std::vector<int>& inc);
  static IncrementSchedule uniform(int k, int n1, int I, int m);

  std::vector<int> increments() const;
  int m() const { return static_cast<int>(n.size()); }
  int N() const { return n.back(); }
  void validate() const;  // throws std::invalid_argument
};

}  // namespace irntc
