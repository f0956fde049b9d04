#include "splitgate/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace splitgate {

namespace {
#ifdef _OPENMP
ExecMode g_mode = ExecMode::openmp;
#else
ExecMode g_mode = ExecMode::serial;
#endif
}  // namespace

ExecMode default_exec_mode() { return g_mode; }

void set_default_exec_mode(ExecMode mode) { g_mode = mode; }

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace splitgate
