#include <algorithm>

#include "subdep/kernels.hpp"

namespace subdep::kernels::serial {

void tail_rhs(double c1, double feed, std::span<const double> tail,
              std::span<double> dtail) {
  if (tail.empty()) return;
  dtail[0] = c1 * (feed - tail[0]);
  for (std::size_t k = 1; k < tail.size(); ++k) {
    dtail[k] = c1 * (tail[k - 1] - tail[k]);
  }
}

double chunked_sum(std::span<const double> values) {
  double total = 0.0;
  for (std::size_t start = 0; start < values.size(); start += kSumChunk) {
    const std::size_t stop = std::min(values.size(), start + kSumChunk);
    double partial = 0.0;
    for (std::size_t i = start; i < stop; ++i) partial += values[i];
    total += partial;
  }
  return total;
}

}  // namespace subdep::kernels::serial
