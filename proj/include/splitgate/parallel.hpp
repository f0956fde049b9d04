#pragma once
// OpenMP-backed parallel loop used by the compute kernels (fidelity averages,
// worst-case grids, landscape scans, optimizer multi-starts, sweep rows).
//
// Contract: the loop body writes only to slot i of preallocated output
// storage, and any reduction is done serially afterwards in index order.
// Under that contract the serial and OpenMP paths are bit-identical; the
// test suite asserts this and tools/bench_parallel compares their runtimes.

#include <cstddef>

namespace splitgate {

enum class ExecMode { serial, openmp };

// Process-wide execution mode for parallel_for calls that do not pass one
// explicitly.  Defaults to openmp when compiled with OpenMP support.
ExecMode default_exec_mode();
void set_default_exec_mode(ExecMode mode);

// Number of worker threads the openmp mode would use (1 without OpenMP).
int max_threads();

template <class Body>
void parallel_for(std::size_t n, const Body& body, ExecMode mode) {
#ifdef _OPENMP
    if (mode == ExecMode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class Body>
void parallel_for(std::size_t n, const Body& body) {
    parallel_for(n, body, default_exec_mode());
}

}  // namespace splitgate
