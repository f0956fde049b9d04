#pragma once
// Derivative-free global optimization of scheme delays: controlled random
// search with local mutation (CRS2-LM) under box bounds, multi-started and
// optionally polished by a bounded Nelder–Mead simplex.  Also power-law fits
// and family scaling studies.
//
// Determinism: all random draws come from a per-run std::mt19937_64 stream
// converted to doubles by a fixed bit recipe, so identical seeds and configs
// reproduce bit-identical results on any platform and thread count (starts
// run concurrently but each owns its stream; selection is serial).

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "splitgate/conditions.hpp"
#include "splitgate/schemes.hpp"
#include "splitgate/trap.hpp"

namespace splitgate {

struct OptimizerConfig {
    int population_size = 0;     // 0 → 10·(d+1); must end up ≥ d+2
    long max_evaluations = 20000;  // budget per start
    // One (low, high) per free variable; empty → [1e-3, 5] trap periods each.
    std::vector<std::pair<double, double>> bounds;
    std::uint64_t seed = 1;
    double stop_tolerance = 1e-10;  // relative population cost spread
    bool polish = true;
    int multi_start = 16;

    void validate() const;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct SearchResult {
    std::vector<double> x;
    double f = 0.0;
    long evaluations = 0;
    std::vector<double> trace;  // running best cost, non-increasing
};

// One seeded CRS2-LM run.  Population initialized uniformly in bounds; each
// iteration reflects the worst point of a random (d+1)-subset anchored at the
// current best through the subset centroid, falling back to a coordinate-wise
// random convex combination of best and reflected point (the local mutation).
// When the population's cost spread falls below stop_tolerance the search
// restarts with a fresh population and keeps going until max_evaluations is
// spent, returning the best point seen across restarts — so one run samples
// as many independent basins as its budget affords.
SearchResult crs2_minimize(const Objective& objective,
                           const std::vector<std::pair<double, double>>& bounds,
                           const OptimizerConfig& config);

// Bounded Nelder–Mead from x0 (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5, iterates clamped into the box).
SearchResult nelder_mead(const Objective& objective,
                         const std::vector<std::pair<double, double>>& bounds,
                         const std::vector<double>& x0, double xatol = 1e-12,
                         double fatol = 1e-14, long max_iterations = 0);

// config.multi_start independent CRS runs (seeds seed, seed+1, ...; run
// concurrently), best-of selection, then optional polish.
SearchResult multi_start_minimize(const Objective& objective,
                                  const std::vector<std::pair<double, double>>& bounds,
                                  const OptimizerConfig& config);

struct OptimizeResult {
    std::vector<double> best_delays;
    KickScheme scheme;
    ConditionReport report;
    double j = 0.0;        // cost at the best point
    long evaluations = 0;
    std::vector<double> trace;
    bool feasible = false;  // E ≤ 1e-4
};

// Optimize a family's free delays against J = T_G + 10·exp(100·E).  Each
// start explores a softened cost (exponent hardness cycling over 0.5, 2, 8
// across starts instead of 100), whose valleys are wide enough for a cold
// population to see, then hands its best point to a full-hardness simplex
// polish; starts are ranked by the polished cost.  Throws invariant_error on
// malformed bounds and infeasible_error when no evaluable point was found at
// all (every sampled point violated ordering or could not expand into a
// scheme); a family whose best evaluable point still misses closure comes
// back with feasible = false instead.
OptimizeResult optimize(const SchemeFamily& family, const TrapParams& params,
                        const LaserParams& laser, const OptimizerConfig& config);

struct FitResult {
    double exponent = 0.0;
    double prefactor = 0.0;  // trap periods
    double residual = 0.0;   // RMS of the log-log fit
};

// Least-squares fit T = prefactor · N^exponent in log-log space.
FitResult fit_power_law(const std::vector<double>& n_pairs,
                        const std::vector<double>& gate_times);
// Same with the exponent pinned; only the prefactor is fitted.
FitResult fit_power_law_fixed(const std::vector<double>& n_pairs,
                              const std::vector<double>& gate_times,
                              double exponent);

struct ScalingRow {
    int n = 0;
    int n_pairs = 0;
    double gate_time = 0.0;
    double e_total = 0.0;
    double j = 0.0;
    std::uint64_t seed = 0;
    bool feasible = false;  // E ≤ 1e-4; infeasible rows are excluded from the fit
    std::vector<double> best_delays;
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    FitResult fit;  // free log-log fit over feasible rows
};

// Optimize a symmetric-family template at each multiplicity n (ascending) and
// fit gate time against pair count.  Rows after the first warm-start from the
// previous optimum: bounds re-center at tau_prev·(n_prev/n)^(2/3) spanning a
// factor 3 either way (clipped to the configured box), which keeps the search
// in the basin that continues the family branch.
ScalingStudy scaling_study(const SchemeFamily& family_template,
                           const std::vector<int>& n_values, const TrapParams& params,
                           const LaserParams& laser, const OptimizerConfig& config);

// Structural matches of optimized delays (and pairwise delay sums — a chain
// of loops realizes a gap as a sum of consecutive delays) against integer
// multiples of the characteristic times 0.5, 1/(2√3), and 0.5 + 1/(2√3).
struct DelayStructure {
    std::string source;  // "delay k" or "delay i + delay j"
    double value = 0.0;  // trap periods
    std::vector<std::string> matches;  // e.g. "1 x 0.5", "2 x 1/(2*sqrt3)"
};
std::vector<DelayStructure> delay_structure_report(const std::vector<double>& delays,
                                                   double tolerance = 1e-3);

}  // namespace splitgate
