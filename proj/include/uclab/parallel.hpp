#pragma once

#include <cstddef>
#include <functional>

namespace uclab {

// Worker count: explicit value if > 0, else UCLAB_JOBS, else hardware concurrency.
unsigned resolve_jobs(int requested = 0);
void set_default_jobs(unsigned jobs);
unsigned default_jobs();

// Calls body(i) for i in [0, count) on default_jobs() threads. Static block partition, so
// results written by index are deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace uclab
