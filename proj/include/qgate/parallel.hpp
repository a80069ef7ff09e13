#pragma once

#include <cstddef>
#include <exception>
#include <string_view>
#include <vector>

#include <omp.h>

namespace qgate {

/// Selects between the serial reference loop and the OpenMP loop for the
/// index-parallel kernels. Both produce identical results: every iteration
/// writes only its own slot and reductions happen afterwards in index order.
enum class ExecPolicy { serial, parallel };

constexpr std::string_view to_string(ExecPolicy policy) {
  return policy == ExecPolicy::serial ? "serial" : "parallel";
}

/// Runs fn(i) for i in [0, count). Under ExecPolicy::parallel the loop is
/// distributed with OpenMP unless we are already inside a parallel region.
/// The first exception (lowest index) is rethrown after the loop finishes.
template <class Fn>
void for_each_index(std::size_t count, ExecPolicy policy, Fn&& fn) {
  if (policy == ExecPolicy::serial || count < 2 || omp_in_parallel()) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace qgate
