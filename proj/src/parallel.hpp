#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qfi::detail {

// Evaluates fn(i) for i in [0, count) on up to hardware_concurrency threads
// and stores each result in its own slot, so the output does not depend on
// scheduling. The exception of the lowest failing index is rethrown.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn fn, unsigned max_threads = 0) {
  std::vector<T> results(count);
  std::vector<std::exception_ptr> errors(count);
  unsigned workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));

  auto run = [&](unsigned worker) {
    for (std::size_t i = worker; i < count; i += workers) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace qfi::detail
