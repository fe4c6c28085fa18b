#ifndef ITOLAB_PARALLEL_HPP
#define ITOLAB_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace itolab {

// Worker count from ITOLAB_THREADS, else hardware concurrency (at least 1).
std::size_t worker_count();

// Runs task(k) for k in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

// Splits [0, count) into fixed chunks of `chunk` indices, lets body accumulate
// `width` partial sums per chunk, then adds chunk results in chunk order. The
// result does not depend on the number of threads.
std::vector<double> chunked_reduce(std::uint64_t count, std::size_t width,
                                   const std::function<void(std::uint64_t begin, std::uint64_t end, double* acc)>& body,
                                   std::uint64_t chunk = 4096);

}  // namespace itolab

#endif
