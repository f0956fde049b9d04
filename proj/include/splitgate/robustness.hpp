#pragma once
// Systematic-error sweeps against the E = 1e-4 error budget: common timing
// shifts in every optical delay element, pulse-area errors (scored by the
// oracle's worst-case fidelity), and beam-angle errors.
//
// Angle model: a beam tilted by φ keeps only cos φ of its axial kick and
// leaks sin φ of it into a transverse spectator mode.  The axial loss scales
// the Lamb-Dicke parameter by (cos φ_A + cos φ_B)/2 inside the closed-form
// conditions; the transverse leakage accumulates without phase evolution
// (the spectator trajectory is not closed), leaving a residual displacement
// R = Σ|z_k| · η_t · (sin φ_A + sin φ_B)/2 whose Gaussian overlap costs
// E_t = (5 − C_t⁴ − 4·C_t)/8 with C_t = exp(−R²/2).

#include <string>
#include <utility>
#include <vector>

#include "splitgate/oracle.hpp"
#include "splitgate/optics.hpp"
#include "splitgate/trap.hpp"

namespace splitgate {

struct SweepSpec {
    std::string kind;  // "timing" | "area" | "angle"
    double low = 0.0;
    double high = 0.0;
    int steps = 0;
    double threshold = 1e-4;  // error budget
    std::string model = "transverse_accumulation";  // angle sweeps only

    void validate() const;
};

struct SweepRow {
    double parameter = 0.0;  // shift (s), area error (rad), or angle (rad)
    double error = 0.0;      // E, or 1 − F_W for area sweeps
    bool pass = false;
    double process_fidelity = 0.0;  // area sweeps only, 0 otherwise
};

struct SweepResult {
    std::string kind;
    std::string model;  // scoring model tag for the summary artifact
    std::vector<SweepRow> rows;
    double threshold_budget = 1e-4;
    double threshold = 0.0;  // largest passing perturbation
    bool threshold_found = false;
    // Index of the first row where the error shrinks as the perturbation
    // magnitude grows (scanning outward from the row nearest zero); −1 when
    // the sweep is monotone.
    int first_non_monotone = -1;
};

// Apply a common shift δ to every delay element of the network, recompile,
// collapse the train back into a scheme, and score the closed-form E.
// Throws infeasible_error when the unshifted network misses the budget.
SweepResult timing_sweep(const SplitterNetwork& network, const LaserParams& laser,
                         int n_laser_pulses, double low_s, double high_s, int steps,
                         const TrapParams& params, double budget = 1e-4);
SweepResult timing_sweep(const TappedNetwork& network, const LaserParams& laser,
                         int n_laser_pulses, double low_s, double high_s, int steps,
                         const TrapParams& params, double budget = 1e-4);

// Pulse-area errors scored by the oracle: rows carry 1 − F_W (worst case,
// warm-started along one minimizing branch) and F_P; the threshold
// interpolates where 1 − F_W crosses the budget.
SweepResult area_sweep(const KickScheme& scheme, double low, double high, int steps,
                       const OracleConfig& config, const TrapParams& params,
                       double budget = 1e-4);

enum class AngleModel { transverse_accumulation, axial_projection };
AngleModel parse_angle_model(const std::string& label);  // invariant_error on unknown

// Condition error under independent beam tilts.
double angle_error(const KickScheme& scheme, const TrapParams& params, double phi_a,
                   double phi_b, AngleModel model = AngleModel::transverse_accumulation);

// Common-angle sweep (φ_A = φ_B = φ) with bisection for the largest angle
// still inside the budget.
SweepResult angle_sweep(const KickScheme& scheme, double low, double high, int steps,
                        const TrapParams& params,
                        AngleModel model = AngleModel::transverse_accumulation,
                        double budget = 1e-4);

}  // namespace splitgate
