// Compares the serial and OpenMP execution paths of the parallelized kernels
// on identical workloads.  The parallel contract (per-slot writes, serial
// reductions in index order) promises bit-identical results, so any mismatch
// here is a bug; timings show what the parallelism buys.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "splitgate/conditions.hpp"
#include "splitgate/optimizer.hpp"
#include "splitgate/oracle.hpp"
#include "splitgate/parallel.hpp"
#include "splitgate/schemes.hpp"
#include "splitgate/trap.hpp"

namespace sg = splitgate;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Row {
    std::string name;
    double serial_s = 0.0;
    double openmp_s = 0.0;
    bool identical = false;
};

sg::KickScheme bench_scheme() {
    const double u = 0.5 / sg::sqrt3;
    sg::KickScheme scheme;
    scheme.groups = {{1, 0.0}, {1, u}, {1, 0.5}, {1, 0.5 + u}};
    return scheme;
}

Row bench_landscape(const sg::TrapParams& trap, const sg::LaserParams& laser) {
    sg::LandscapeSpec spec;
    spec.family.kind = sg::FamilyKind::symmetric_abc;
    spec.family.a = 1;
    spec.family.b = 2;
    spec.family.c = 2;
    spec.family.n = 4;
    spec.base = {0.45, 0.30, 0.15};
    spec.var1 = 0;
    spec.lo1 = 0.31;
    spec.hi1 = 0.95;
    spec.steps1 = 64;
    spec.var2 = 1;
    spec.lo2 = 0.16;
    spec.hi2 = 0.30;
    spec.steps2 = 64;

    std::vector<sg::LandscapePoint> a, b;
    Row row{"landscape_scan 64x64", 0.0, 0.0, false};
    sg::set_default_exec_mode(sg::ExecMode::serial);
    row.serial_s = seconds([&] { a = sg::landscape_scan(spec, trap, laser); });
    sg::set_default_exec_mode(sg::ExecMode::openmp);
    row.openmp_s = seconds([&] { b = sg::landscape_scan(spec, trap, laser); });
    row.identical = a.size() == b.size();
    for (std::size_t i = 0; row.identical && i < a.size(); ++i)
        row.identical = a[i].var1 == b[i].var1 && a[i].var2 == b[i].var2 &&
                        a[i].log_j == b[i].log_j;
    return row;
}

Row bench_process_fidelity(const sg::TrapParams& trap) {
    sg::OracleConfig config;
    config.n_max = 28;
    config.nbar = 0.1;
    config.validate();
    const sg::GateUnitary gate = sg::evolve_scheme(bench_scheme(), config, trap);

    sg::ProcessFidelity a, b;
    Row row{"process_fidelity n_max=28", 0.0, 0.0, false};
    sg::set_default_exec_mode(sg::ExecMode::serial);
    row.serial_s = seconds([&] { a = sg::process_fidelity_detail(gate, config); });
    sg::set_default_exec_mode(sg::ExecMode::openmp);
    row.openmp_s = seconds([&] { b = sg::process_fidelity_detail(gate, config); });
    row.identical = a.fidelity == b.fidelity && a.leakage == b.leakage;
    return row;
}

Row bench_worst_case(const sg::TrapParams& trap) {
    sg::OracleConfig config;
    config.n_max = 16;
    config.nbar = 0.1;
    config.epsilon = 2e-3;
    config.refine_sweeps = 60;
    config.validate();
    const sg::GateUnitary gate = sg::evolve_scheme(bench_scheme(), config, trap);

    sg::WorstCase a, b;
    Row row{"worst_case grid+refine n_max=16", 0.0, 0.0, false};
    sg::set_default_exec_mode(sg::ExecMode::serial);
    row.serial_s = seconds([&] { a = sg::worst_case_fidelity_detail(gate, config); });
    sg::set_default_exec_mode(sg::ExecMode::openmp);
    row.openmp_s = seconds([&] { b = sg::worst_case_fidelity_detail(gate, config); });
    row.identical = a.fidelity == b.fidelity && a.alpha == b.alpha &&
                    a.converged == b.converged;
    return row;
}

Row bench_multi_start(const sg::TrapParams& trap, const sg::LaserParams& laser) {
    sg::SchemeFamily family;
    family.kind = sg::FamilyKind::free_times;
    family.n_free_times = 2;
    const sg::Objective objective = [&](const std::vector<double>& x) {
        return sg::family_cost(family, x, trap, laser);
    };
    sg::OptimizerConfig config;
    config.max_evaluations = 3000;
    config.multi_start = 8;
    config.seed = 11;
    config.polish = false;
    const std::vector<std::pair<double, double>> bounds(2, {1e-3, 2.0});

    sg::SearchResult a, b;
    Row row{"multi_start_minimize 8x3000", 0.0, 0.0, false};
    sg::set_default_exec_mode(sg::ExecMode::serial);
    row.serial_s = seconds([&] { a = sg::multi_start_minimize(objective, bounds, config); });
    sg::set_default_exec_mode(sg::ExecMode::openmp);
    row.openmp_s = seconds([&] { b = sg::multi_start_minimize(objective, bounds, config); });
    row.identical = a.f == b.f && a.x == b.x && a.evaluations == b.evaluations;
    return row;
}

}  // namespace

int main() {
    const sg::TrapParams trap;
    const sg::LaserParams laser;

    std::vector<Row> rows;
    rows.push_back(bench_landscape(trap, laser));
    rows.push_back(bench_process_fidelity(trap));
    rows.push_back(bench_worst_case(trap));
    rows.push_back(bench_multi_start(trap, laser));

    std::printf("threads available: %d\n", sg::max_threads());
    std::printf("%-34s %10s %10s %8s  %s\n", "kernel", "serial[s]", "openmp[s]",
                "speedup", "identical");
    bool all_identical = true;
    for (const Row& row : rows) {
        const double speedup = row.openmp_s > 0.0 ? row.serial_s / row.openmp_s : 0.0;
        std::printf("%-34s %10.3f %10.3f %8.2f  %s\n", row.name.c_str(), row.serial_s,
                    row.openmp_s, speedup, row.identical ? "yes" : "NO");
        all_identical = all_identical && row.identical;
    }
    if (!all_identical) {
        std::printf("FAIL: serial and openmp paths disagree\n");
        return 1;
    }
    std::printf("OK: serial and openmp paths agree bit-for-bit\n");
    return 0;
}
