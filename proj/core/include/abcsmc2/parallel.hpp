#pragma once

#include <cstddef>
#include <functional>

namespace abcsmc2 {

/// Run fn(i) for i in [0, n). With threads <= 1 the loop is serial.
/// Workers pull indices from a shared atomic counter; callers must write
/// only to per-index slots, which keeps results identical for any thread
/// count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace abcsmc2
