#ifndef MOMENTFORGE_PARALLEL_HPP
#define MOMENTFORGE_PARALLEL_HPP

namespace momentforge {

// Number of worker threads OpenMP will use (1 without OpenMP).
int max_threads();

// Applies the MOMENTFORGE_THREADS environment cap, if set. Returns the
// resulting thread count.
int apply_thread_cap_from_env();

}  // namespace momentforge

#endif
