#pragma once

#include <exception>
#include <vector>

namespace rotloc {

// serial: plain loops kept as the reference path. parallel: OpenMP kernels.
// Callers store per-index results and reduce in index order, so both paths
// give bit-identical output.
enum class Exec { serial, parallel };

// Runs fn(0..n-1). In parallel mode an exception from any index is captured and
// the one with the lowest index is rethrown after the loop.
template <typename Fn>
void for_each_index(int n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace rotloc
