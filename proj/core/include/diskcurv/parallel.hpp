#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace diskcurv {

// Worker count used by parallel_for. 0 means hardware concurrency.
void set_thread_count(int threads);
int thread_count();

// Runs task(i) for i in [0, n). Tasks must write only to slot i of their
// output, which keeps results independent of scheduling. The first exception
// (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace diskcurv
