#include "irntc/schedule.hpp"

#include <stdexcept>

namespace irntc {

IncrementSchedule IncrementSchedule::from_increments(int k, const std::vector<int>& inc) {
  IncrementSchedule s;
  s.k = k;
  int total = 0;
  s.n.reserve(inc.size());
  for (int step : inc) {
    total += step;
    s.n.push_back(total);
  }
  s.validate();
  return s;
}

IncrementSchedule IncrementSchedule::uniform(int k, int n1, int I, int m) {
  IncrementSchedule s;
  s.k = k;
  s.n.reserve(m);
  for (int j = 0; j < m; ++j) s.n.push_back(n1 + j * I);
  s.validate();
  return s;
}

std::vector<int> IncrementSchedule::increments() const {
  std::vector<int> inc(n.size());
  for (size_t j = 0; j < n.size(); ++j) inc[j] = j == 0 ? n[0] : n[j] - n[j - 1];
  return inc;
}

void IncrementSchedule::validate() const {
  if (k < 1) throw std::invalid_argument("IncrementSchedule: k < 1");
  if (n.empty()) throw std::invalid_argument("IncrementSchedule: no attempts");
  int prev = 0;
  for (int nj : n) {
    if (nj <= prev)
      throw std::invalid_argument("IncrementSchedule: lengths must be strictly increasing");
    prev = nj;
  }
}

}  // namespace irntc
