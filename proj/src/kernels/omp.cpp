#include <omp.h>

#include <algorithm>
#include <vector>

#include "subdep/kernels.hpp"

namespace subdep::kernels {

namespace {
int g_thread_limit = 0;

// below this many entries the fork/join cost dominates
constexpr std::size_t kParallelThreshold = 8192;

int pool_size() {
  return g_thread_limit > 0 ? g_thread_limit : omp_get_max_threads();
}
}  // namespace

void set_thread_limit(int threads) { g_thread_limit = std::max(threads, 0); }
int thread_limit() { return pool_size(); }

namespace omp {

void tail_rhs(double c1, double feed, std::span<const double> tail,
              std::span<double> dtail) {
  const auto size = static_cast<std::ptrdiff_t>(tail.size());
  if (size == 0) return;
  dtail[0] = c1 * (feed - tail[0]);
#pragma omp parallel for schedule(static) num_threads(pool_size()) \
    if (tail.size() >= kParallelThreshold)
  for (std::ptrdiff_t k = 1; k < size; ++k) {
    dtail[k] = c1 * (tail[k - 1] - tail[k]);
  }
}

double chunked_sum(std::span<const double> values) {
  const std::size_t chunks = (values.size() + kSumChunk - 1) / kSumChunk;
  std::vector<double> partials(chunks, 0.0);
#pragma omp parallel for schedule(static) num_threads(pool_size()) \
    if (values.size() >= kParallelThreshold)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t start = static_cast<std::size_t>(c) * kSumChunk;
    const std::size_t stop = std::min(values.size(), start + kSumChunk);
    double partial = 0.0;
    for (std::size_t i = start; i < stop; ++i) partial += values[i];
    partials[static_cast<std::size_t>(c)] = partial;
  }
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

}  // namespace omp

void tail_rhs(Policy policy, double c1, double feed, std::span<const double> tail,
              std::span<double> dtail) {
  if (policy == Policy::Parallel) {
    omp::tail_rhs(c1, feed, tail, dtail);
  } else {
    serial::tail_rhs(c1, feed, tail, dtail);
  }
}

double chunked_sum(Policy policy, std::span<const double> values) {
  return policy == Policy::Parallel ? omp::chunked_sum(values)
                                    : serial::chunked_sum(values);
}

}  // namespace subdep::kernels
