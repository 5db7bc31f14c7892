#ifndef HEXCAP_PARALLEL_HPP
#define HEXCAP_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hexcap {

// Thread count from HEXCAP_THREADS, else hardware concurrency.
unsigned thread_count();

// Calls fn(i) for i in [0, n) split into contiguous chunks; fn must only
// write to slots owned by i.
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t)>& fn);

} // namespace hexcap

#endif
