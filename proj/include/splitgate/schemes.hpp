#pragma once
// Generators for the catalogued scheme families, parameterized by the free
// delays the optimizer searches.
//
// Split families model a pulsed laser whose emissions pass through delay
// loops: each loop doubles the number of incident pulse pairs, so P laser
// pulses through m loops give P*2^m pairs at all subset sums of the loop
// delays.  Coincident arrivals merge into one group with summed z.

#include <string>
#include <vector>

#include "splitgate/trap.hpp"

namespace splitgate {

enum class FamilyKind { gzc, symmetric_abc, direct_split, alternating_split, free_times };

struct SchemeFamily {
    FamilyKind kind = FamilyKind::gzc;

    // symmetric_abc / gzc (gzc pins a,b,c = 2,3,2 and negate).
    int a = 2, b = 3, c = 2;
    int n = 1;
    bool negate = false;

    // direct_split / alternating_split.
    int pulse_count = 1;  // laser pulses P at the repetition interval
    int n_delays = 3;     // delay loops m; free variables d_1..d_m

    // free_times: alternating unit kicks at (0, x_1, .., x_d).
    int n_free_times = 3;

    // Overrides the laser repetition rate when > 0 (Hz).
    double rep_rate = 0.0;

    int free_variable_count() const;
    std::string name() const;
    void validate() const;
};

// Expands the family at the given free-variable vector into a kick scheme.
// Throws invariant_error on arity mismatch or ordering violations.
KickScheme generate(const SchemeFamily& family, const std::vector<double>& delays,
                    const TrapParams& trap, const LaserParams& laser);

// Convenience: the symmetric-scheme view of a symmetric/gzc family instance.
SymmetricScheme symmetric_from_family(const SchemeFamily& family,
                                      const std::vector<double>& taus);

// Benchmark gate times to re-derive by optimization (delay values are not
// stored; only the family shape and the reported time).
struct KnownSolution {
    SchemeFamily family;
    int n_pairs;
    double gate_time;  // trap periods
};
std::vector<KnownSolution> enumerate_known_solutions();

}  // namespace splitgate
