#pragma once
// Closed-form control conditions for a kick scheme: the accumulated two-qubit
// phase Theta, the trajectory-closure residuals of both motional modes, the
// resulting error bound E, the gate time, and the optimization cost.
//
// With times in trap periods, a group at time t contributes phase angle
// 2*pi*t on the COM mode and 2*pi*sqrt(3)*t on the stretch mode:
//   Theta = 4 eta^2 sum_{m>k} z_m z_k [sin(2 pi dt_mk) - sin(2 pi sqrt3 dt_mk)/sqrt3]
//   C_c   = sum_k z_k exp(-i 2 pi t_k)
//   C_r   = sum_k z_k exp(-i 2 pi sqrt3 t_k)
// The error bound combines the motional residuals through Gaussian overlaps
// C_1, C_2 with the phase miss wrapped modulo pi/2 (the gate unitary is
// pi/2-periodic in Theta up to global phase).

#include <complex>
#include <utility>
#include <vector>

#include "splitgate/schemes.hpp"
#include "splitgate/trap.hpp"

namespace splitgate {

struct ConditionReport {
    double theta = 0.0;
    std::complex<double> c_c{0.0, 0.0};
    std::complex<double> c_r{0.0, 0.0};
    double e_motional = 0.0;  // in [0, 0.75]
    double e_phase = 0.0;     // in [0, 1.5]
    double e_total = 0.0;     // e_motional + e_phase
    double gate_time = 0.0;   // trap periods
};

double phase_theta(const KickScheme& scheme, const TrapParams& params);

std::pair<std::complex<double>, std::complex<double>> closure_residuals(
    const KickScheme& scheme, const TrapParams& params);

ConditionReport condition_error(const KickScheme& scheme, const TrapParams& params);

// Last minus first group time, trap periods.
double gate_time(const KickScheme& scheme);

// J = T_G + A * exp(B * E); rewards fast gates, punishes condition error.
double cost(const KickScheme& scheme, const TrapParams& params, double A = 10.0,
            double B = 100.0);
double cost_from_report(const ConditionReport& report, double A = 10.0, double B = 100.0);

// Dense log10-free natural-log cost surface over one or two family variables,
// all other variables pinned at `base`.  var2 < 0 selects a 1-D scan (the
// second output column is then constant at base[var1]... unused).
struct LandscapeSpec {
    SchemeFamily family;
    std::vector<double> base;  // full free-variable vector
    int var1 = 0;
    double lo1 = 0.1, hi1 = 1.0;
    int steps1 = 10;
    int var2 = -1;
    double lo2 = 0.1, hi2 = 1.0;
    int steps2 = 1;
    double a = 10.0, b = 100.0;
};

struct LandscapePoint {
    double var1 = 0.0, var2 = 0.0;
    double log_j = 0.0;
};

std::vector<LandscapePoint> landscape_scan(const LandscapeSpec& spec,
                                           const TrapParams& trap,
                                           const LaserParams& laser);

// Penalty floor for non-evaluable family points (ordering violations,
// unexpandable parameter vectors).  Must dominate every evaluable cost: with
// B = 100 and E < 2.25 the exponential term stays below ~1e98, so any point
// at or above this value was never a scheme at all.
inline constexpr double invalid_cost = 1e120;

// Cost of a family instance at a free-variable vector.  Ordering violations
// (tau order, non-increasing free times) return an invalid_cost-scale penalty
// that grows with the violation instead of throwing, so box-bounded searches
// and grid scans stay total, and no evaluable point ever loses to an invalid
// one.
double family_cost(const SchemeFamily& family, const std::vector<double>& vars,
                   const TrapParams& trap, const LaserParams& laser,
                   double A = 10.0, double B = 100.0);

}  // namespace splitgate
