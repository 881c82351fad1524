#pragma once

#include <functional>

namespace wtensor {

/// Runs fn(i) for every i in [0, count) on up to `threads` worker threads.
/// Work items are claimed in index order; callers write results by index so the
/// outcome does not depend on the schedule.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Thread cap from the WTENSOR_THREADS environment variable (default 1).
int threads_from_env();

}  // namespace wtensor
