#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant that performs the same floating-point operations in the
// same association order, so both produce bit-identical results for any
// thread count.

#include <cstddef>
#include <span>

namespace subdep::kernels {

enum class Policy { Serial, Parallel };

/// Block size of the deterministic reduction.
inline constexpr std::size_t kSumChunk = 4096;

/// dtail[k] = c1 * (prev_k - tail[k]) with prev_0 = feed, prev_k = tail[k-1].
void tail_rhs(Policy policy, double c1, double feed, std::span<const double> tail,
              std::span<double> dtail);

/// Sum in fixed chunks of kSumChunk, partials added left to right.
double chunked_sum(Policy policy, std::span<const double> values);

/// Caps the OpenMP pool used by Policy::Parallel kernels (0 = runtime default).
void set_thread_limit(int threads);
int thread_limit();

namespace serial {
void tail_rhs(double c1, double feed, std::span<const double> tail,
              std::span<double> dtail);
double chunked_sum(std::span<const double> values);
}  // namespace serial

namespace omp {
void tail_rhs(double c1, double feed, std::span<const double> tail,
              std::span<double> dtail);
double chunked_sum(std::span<const double> values);
}  // namespace omp

}  // namespace subdep::kernels
