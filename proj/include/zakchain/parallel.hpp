#pragma once

#include <exception>
#include <mutex>
#include <utility>

#include "zakchain/types.hpp"

namespace zakchain {

/// Runs fn(i) for i in [0, n). With Exec::Parallel the iterations execute
/// under OpenMP; exceptions thrown by fn are captured and rethrown on the
/// calling thread (first one wins). The Serial branch is the reference path
/// the tests compare against.
template <class F>
void for_each_index(int n, Exec exec, F&& fn) {
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

} // namespace zakchain
