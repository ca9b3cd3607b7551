#ifndef VCC_THREADS_HPP
#define VCC_THREADS_HPP

namespace vcc {

// Worker count for internally parallel loops: hardware concurrency, capped
// by the VCC_THREADS environment variable when it is set to a positive
// number. Results never depend on the value (work splits by disjoint rows).
int thread_count();

} // namespace vcc

#endif
