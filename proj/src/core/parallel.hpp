#pragma once

#include <cstddef>
#include <functional>

namespace rmtlab {

/// Process-wide worker count used by Monte Carlo loops (0 or 1 = serial).
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

/// Calls fn(i) for i in [0, n). Work items must write only to their own slots;
/// results are then independent of the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace rmtlab
