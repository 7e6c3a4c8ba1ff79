#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace movavg {

// Every parallel kernel also runs serially; the serial path is the reference
// implementation the tests compare against. Results are identical in either
// mode: work items are independent and merged by index.
enum class ExecPolicy { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

template <typename F>
void parallel_for(std::size_t n, ExecPolicy policy, F&& body) {
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < (long long)n; ++i) body(std::size_t(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

} // namespace movavg
