#pragma once
#include <cstddef>
#include <thread>
#include <vector>

#include "henon/mp.hpp"

namespace henon {

// Index-parallel map over [0, n). Each worker inherits the caller's MPFR
// default precision. Results must be written by index so the outcome does
// not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, F&& body, unsigned max_threads = 0) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned nt = max_threads ? max_threads : (hw ? hw : 1);
  if (nt <= 1 || n < 2 * nt) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  unsigned bits = mp::default_bits();
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([=, &body] {
      mp::set_default_bits(bits);
      for (std::size_t i = t; i < n; i += nt) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace henon
