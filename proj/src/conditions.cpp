#include "splitgate/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "splitgate/parallel.hpp"

namespace splitgate {

double phase_theta(const KickScheme& scheme, const TrapParams& params) {
    const auto& g = scheme.groups;
    double sum = 0.0;
    for (std::size_t m = 1; m < g.size(); ++m) {
        for (std::size_t k = 0; k < m; ++k) {
            const double dt = g[m].t - g[k].t;
            sum += static_cast<double>(g[m].z) * static_cast<double>(g[k].z) *
                   (std::sin(two_pi * dt) - std::sin(two_pi * sqrt3 * dt) / sqrt3);
        }
    }
    return 4.0 * params.eta * params.eta * sum;
}

std::pair<std::complex<double>, std::complex<double>> closure_residuals(
    const KickScheme& scheme, const TrapParams& /*params*/) {
    std::complex<double> cc{0.0, 0.0}, cr{0.0, 0.0};
    for (const auto& g : scheme.groups) {
        const double z = static_cast<double>(g.z);
        cc += z * std::polar(1.0, -two_pi * g.t);
        cr += z * std::polar(1.0, -two_pi * sqrt3 * g.t);
    }
    return {cc, cr};
}

double gate_time(const KickScheme& scheme) {
    if (scheme.groups.empty()) return 0.0;
    return scheme.groups.back().t - scheme.groups.front().t;
}

ConditionReport condition_error(const KickScheme& scheme, const TrapParams& params) {
    ConditionReport rep;
    rep.theta = phase_theta(scheme, params);
    std::tie(rep.c_c, rep.c_r) = closure_residuals(scheme, params);
    rep.gate_time = gate_time(scheme);

    // Gaussian overlaps of the residual displacements (vacuum-limit bound).
    const double ac = 2.0 * params.eta_c() * std::abs(rep.c_c);
    const double ar = params.eta_r() * std::abs(rep.c_r);
    const double c1 = std::exp(-0.5 * ac * ac);
    const double c2 = std::exp(-0.5 * ar * ar);
    rep.e_motional = (6.0 - std::pow(c1, 4) - std::pow(c2, 4) - 4.0 * c1 * c2) / 8.0;

    // Phase miss, wrapped to the nearest pi/2-equivalent representative.
    const double x = std::remainder(pi / 4.0 - rep.theta, pi / 2.0);
    rep.e_phase = 0.75 - 0.75 * std::cos(2.0 * x);

    rep.e_total = rep.e_motional + rep.e_phase;
    return rep;
}

double cost_from_report(const ConditionReport& report, double A, double B) {
    return report.gate_time + A * std::exp(B * report.e_total);
}

double cost(const KickScheme& scheme, const TrapParams& params, double A, double B) {
    if (!(A > 0.0) || !(B > 0.0)) throw invariant_error("cost: A and B must be positive");
    return cost_from_report(condition_error(scheme, params), A, B);
}

double family_cost(const SchemeFamily& family, const std::vector<double>& vars,
                   const TrapParams& trap, const LaserParams& laser, double A, double B) {
    // Ordering penalties keep the objective total over the search box.
    double violation = 0.0;
    const bool symmetric =
        family.kind == FamilyKind::gzc || family.kind == FamilyKind::symmetric_abc;
    if (symmetric && vars.size() == 3) {
        violation += std::max(0.0, vars[1] - vars[0]);
        violation += std::max(0.0, vars[2] - vars[1]);
        violation += std::max(0.0, -vars[2]);
    } else if (family.kind == FamilyKind::free_times) {
        double prev = 0.0;
        for (double x : vars) {
            violation += std::max(0.0, prev - x);
            prev = x;
        }
    }
    if (violation > 0.0) return invalid_cost * (1.0 + violation);

    try {
        const KickScheme scheme = generate(family, vars, trap, laser);
        return cost(scheme, trap, A, B);
    } catch (const invariant_error&) {
        return invalid_cost;
    }
}

std::vector<LandscapePoint> landscape_scan(const LandscapeSpec& spec,
                                           const TrapParams& trap,
                                           const LaserParams& laser) {
    spec.family.validate();
    if (!(spec.lo1 > 0.0) || (spec.var2 >= 0 && !(spec.lo2 > 0.0)))
        throw invariant_error("landscape_scan: grid bounds must be positive");
    if (spec.steps1 < 1 || spec.steps2 < 1)
        throw invariant_error("landscape_scan: need at least one grid step per axis");
    const int nvars = spec.family.free_variable_count();
    if (static_cast<int>(spec.base.size()) != nvars)
        throw invariant_error("landscape_scan: base vector arity mismatch");
    if (spec.var1 < 0 || spec.var1 >= nvars || spec.var2 >= nvars)
        throw invariant_error("landscape_scan: variable index out of range");

    const bool two_d = spec.var2 >= 0;
    const int n2 = two_d ? spec.steps2 : 1;
    auto coord = [](double lo, double hi, int steps, int i) {
        return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    };

    std::vector<LandscapePoint> out(static_cast<std::size_t>(spec.steps1) * n2);
    parallel_for(out.size(), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / n2;
        const int j = static_cast<int>(idx) % n2;
        std::vector<double> vars = spec.base;
        const double v1 = coord(spec.lo1, spec.hi1, spec.steps1, i);
        vars[static_cast<std::size_t>(spec.var1)] = v1;
        double v2 = 0.0;
        if (two_d) {
            v2 = coord(spec.lo2, spec.hi2, spec.steps2, j);
            vars[static_cast<std::size_t>(spec.var2)] = v2;
        }
        out[idx] = {v1, v2, std::log(family_cost(spec.family, vars, trap, laser,
                                                 spec.a, spec.b))};
    });
    return out;
}

}  // namespace splitgate
