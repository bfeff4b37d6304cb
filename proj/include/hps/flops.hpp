#pragma once

#include <atomic>
#include <cstdint>
#include <utility>

namespace hps {

/// Thread-safe accumulator for dense-kernel flop counts.
class FlopCounter {
 public:
  void add(double flops) { count_.fetch_add(static_cast<std::uint64_t>(flops), std::memory_order_relaxed); }
  std::uint64_t total() const { return count_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> count_{0};
};

inline void add_flops(FlopCounter* counter, double flops) {
  if (counter) counter->add(flops);
}

// Standard dense kernel counts.
inline double gemm_flops(double m, double n, double k) { return 2.0 * m * n * k; }
inline double lu_flops(double n) { return 2.0 * n * n * n / 3.0; }
inline double lu_solve_flops(double n, double nrhs) { return 2.0 * n * n * nrhs; }
inline double svd_flops(double m, double n) {
  // Golub-Van Loan estimate for a thin SVD with both factors, m >= n assumed.
  if (m < n) std::swap(m, n);
  return 4.0 * m * n * n + 8.0 * n * n * n;
}

}  // namespace hps
