#include "momentforge/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace momentforge {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int apply_thread_cap_from_env() {
    const char* env = std::getenv("MOMENTFORGE_THREADS");
    if (env != nullptr) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) {
#ifdef _OPENMP
                omp_set_num_threads(cap);
#endif
                return max_threads();
            }
        } catch (...) {
            // ignore malformed values, keep the default
        }
    }
    return max_threads();
}

}  // namespace momentforge
