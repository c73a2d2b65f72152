// Copyright 2026 The casq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace casq {

/// Sets the worker count used by the sigma builder. n <= 0 falls back to
/// CASQ_THREADS, then to the OpenMP default.
inline void set_worker_count(int n) {
    if (n <= 0) {
        if (const char* env = std::getenv("CASQ_THREADS")) {
            try {
                n = std::stoi(env);
            } catch (...) {
                n = 0;
            }
        }
    }
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
}

[[nodiscard]] inline int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace casq
