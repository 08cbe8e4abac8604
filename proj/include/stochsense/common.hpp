// Copyright 2026 The stochsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace stochsense {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest register simulated with dense state vectors and matrices.
inline constexpr int kMaxDenseQubits = 14;

/// Averaging ran out of batches before meeting its convergence rule.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeded a documented size limit.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int popcount(std::size_t x) {
  return static_cast<int>(__builtin_popcountll(static_cast<unsigned long long>(x)));
}

/// Bit of qubit `j` (0-based) in basis index `a`. Qubit 0 is the most
/// significant bit.
inline int qubit_bit(std::size_t a, int j, int n_qubits) {
  return static_cast<int>((a >> (n_qubits - 1 - j)) & 1U);
}

/// Runs `body(i)` for i in [0, count) over up to `threads` workers.
///
/// Items are claimed dynamically; callers write results to slot `i` so the
/// output does not depend on the schedule. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  int workers = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace stochsense
