#include "splitgate/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "splitgate/conditions.hpp"
#include "splitgate/parallel.hpp"

namespace splitgate {

void SweepSpec::validate() const {
    if (kind != "timing" && kind != "area" && kind != "angle")
        throw invariant_error("sweep kind must be timing, area, or angle");
    if (!(low < high)) throw invariant_error("sweep range must satisfy low < high");
    if (steps < 3) throw invariant_error("sweep needs at least 3 steps");
    if (!(threshold > 0.0)) throw invariant_error("sweep budget must be > 0");
    if (kind == "angle") parse_angle_model(model);
}

namespace {

double grid_point(double low, double high, int steps, int i) {
    return low + (high - low) * static_cast<double>(i) / (steps - 1);
}

// Scan outward from the row nearest zero: a systematic-error curve should
// not improve as |perturbation| grows.
int find_non_monotone(const std::vector<SweepRow>& rows) {
    if (rows.size() < 2) return -1;
    std::size_t center = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::abs(rows[i].parameter) < std::abs(rows[center].parameter)) center = i;
    const auto tolerance = [](double e) { return 1e-12 + 1e-9 * std::abs(e); };
    for (std::size_t i = center + 1; i < rows.size(); ++i)
        if (rows[i].error < rows[i - 1].error - tolerance(rows[i - 1].error))
            return static_cast<int>(i);
    for (std::size_t i = center; i-- > 0;)
        if (rows[i].error < rows[i + 1].error - tolerance(rows[i + 1].error))
            return static_cast<int>(i);
    return -1;
}

// Largest perturbation inside the budget, to 1% relative: bisect between the
// last passing and the first failing grid point.
void locate_threshold(SweepResult& result, const std::function<double(double)>& error_at) {
    const auto& rows = result.rows;
    int last_pass = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].pass)
            last_pass = static_cast<int>(i);
        else
            break;
    }
    if (last_pass < 0) {
        result.threshold = rows.front().parameter;
        result.threshold_found = false;
        return;
    }
    if (last_pass + 1 >= static_cast<int>(rows.size())) {
        result.threshold = rows.back().parameter;
        result.threshold_found = false;  // budget never exceeded in range
        return;
    }
    double lo = rows[static_cast<std::size_t>(last_pass)].parameter;
    double hi = rows[static_cast<std::size_t>(last_pass) + 1].parameter;
    for (int iter = 0; iter < 60 && hi - lo > 0.01 * std::max(std::abs(lo), 1e-300);
         ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (error_at(mid) <= result.threshold_budget)
            lo = mid;
        else
            hi = mid;
    }
    result.threshold = lo;
    result.threshold_found = true;
}

SweepResult timing_sweep_impl(
    const std::function<IncidentPulseTrain(double)>& recompile, double low_s,
    double high_s, int steps, const TrapParams& params, double budget) {
    if (!(low_s < high_s)) throw invariant_error("sweep range must satisfy low < high");
    if (steps < 3) throw invariant_error("sweep needs at least 3 steps");

    const auto error_at = [&](double shift) {
        const KickScheme scheme = scheme_from_train(recompile(shift), params);
        return condition_error(scheme, params).e_total;
    };
    const double baseline = error_at(0.0);
    if (baseline > budget) {
        std::ostringstream msg;
        msg << "network misses the budget unshifted (E = " << baseline << ")";
        throw infeasible_error(msg.str());
    }

    SweepResult result;
    result.kind = "timing";
    result.model = "closed_form_conditions";
    result.threshold_budget = budget;
    result.rows.resize(static_cast<std::size_t>(steps));
    std::vector<double> errors(static_cast<std::size_t>(steps));
    parallel_for(static_cast<std::size_t>(steps), [&](std::size_t i) {
        errors[i] = error_at(grid_point(low_s, high_s, steps, static_cast<int>(i)));
    });
    for (int i = 0; i < steps; ++i) {
        auto& row = result.rows[static_cast<std::size_t>(i)];
        row.parameter = grid_point(low_s, high_s, steps, i);
        row.error = errors[static_cast<std::size_t>(i)];
        row.pass = row.error <= budget;
    }
    locate_threshold(result, error_at);
    result.first_non_monotone = find_non_monotone(result.rows);
    return result;
}

}  // namespace

SweepResult timing_sweep(const SplitterNetwork& network, const LaserParams& laser,
                         int n_laser_pulses, double low_s, double high_s, int steps,
                         const TrapParams& params, double budget) {
    return timing_sweep_impl(
        [&](double shift) { return compile(network, laser, n_laser_pulses, shift); },
        low_s, high_s, steps, params, budget);
}

SweepResult timing_sweep(const TappedNetwork& network, const LaserParams& laser,
                         int n_laser_pulses, double low_s, double high_s, int steps,
                         const TrapParams& params, double budget) {
    return timing_sweep_impl(
        [&](double shift) { return compile(network, laser, n_laser_pulses, shift); },
        low_s, high_s, steps, params, budget);
}

SweepResult area_sweep(const KickScheme& scheme, double low, double high, int steps,
                       const OracleConfig& config, const TrapParams& params,
                       double budget) {
    if (!(low < high)) throw invariant_error("sweep range must satisfy low < high");
    if (steps < 3) throw invariant_error("sweep needs at least 3 steps");
    scheme.validate();

    // Anchor the worst-case branch with one full search at the range edge.
    OracleConfig anchor_config = config;
    anchor_config.epsilon = std::abs(high) >= std::abs(low) ? high : low;
    const WorstCase anchor = worst_case_fidelity_detail(
        evolve_scheme(scheme, anchor_config, params), anchor_config);

    SweepResult result;
    result.kind = "area";
    result.model = "oracle_worst_case";
    result.threshold_budget = budget;
    result.rows.resize(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        OracleConfig run = config;
        run.epsilon = grid_point(low, high, steps, i);
        const GateUnitary u = evolve_scheme(scheme, run, params);
        const WorstCase wc = worst_case_fidelity_detail(u, run, anchor.alpha);
        auto& row = result.rows[static_cast<std::size_t>(i)];
        row.parameter = run.epsilon;
        row.error = 1.0 - wc.fidelity;
        row.process_fidelity = process_fidelity(u, run);
        row.pass = row.error <= budget;
    }
    result.first_non_monotone = find_non_monotone(result.rows);

    // Interpolated crossing of the budget on the |ε|-increasing side.
    result.threshold_found = false;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const auto& a = result.rows[i - 1];
        const auto& b = result.rows[i];
        if (a.pass && !b.pass && b.error > a.error) {
            const double frac = (budget - a.error) / (b.error - a.error);
            result.threshold = a.parameter + frac * (b.parameter - a.parameter);
            result.threshold_found = true;
            break;
        }
    }
    if (!result.threshold_found)
        result.threshold = result.rows.back().pass ? result.rows.back().parameter
                                                   : result.rows.front().parameter;
    return result;
}

AngleModel parse_angle_model(const std::string& label) {
    if (label == "transverse_accumulation") return AngleModel::transverse_accumulation;
    if (label == "axial_projection") return AngleModel::axial_projection;
    throw invariant_error("unknown angle model: " + label);
}

double angle_error(const KickScheme& scheme, const TrapParams& params, double phi_a,
                   double phi_b, AngleModel model) {
    scheme.validate();
    params.validate();

    // Axial loss: both beams' projections shrink the effective Lamb-Dicke
    // parameter, which rescales Theta and the closure overlaps together.
    TrapParams tilted = params;
    tilted.eta = params.eta * 0.5 * (std::cos(phi_a) + std::cos(phi_b));
    double error = condition_error(scheme, tilted).e_total;

    if (model == AngleModel::transverse_accumulation) {
        double pairs = 0.0;
        for (const auto& g : scheme.groups) pairs += std::abs(g.z);
        const double residual =
            pairs * params.eta * 0.5 * (std::sin(phi_a) + std::sin(phi_b));
        const double overlap = std::exp(-0.5 * residual * residual);
        error += (5.0 - std::pow(overlap, 4) - 4.0 * overlap) / 8.0;
    }
    return error;
}

SweepResult angle_sweep(const KickScheme& scheme, double low, double high, int steps,
                        const TrapParams& params, AngleModel model, double budget) {
    if (!(low < high)) throw invariant_error("sweep range must satisfy low < high");
    if (steps < 3) throw invariant_error("sweep needs at least 3 steps");

    const auto error_at = [&](double phi) {
        return angle_error(scheme, params, phi, phi, model);
    };
    SweepResult result;
    result.kind = "angle";
    result.model = model == AngleModel::transverse_accumulation
                       ? "transverse_accumulation"
                       : "axial_projection";
    result.threshold_budget = budget;
    result.rows.resize(static_cast<std::size_t>(steps));
    std::vector<double> errors(static_cast<std::size_t>(steps));
    parallel_for(static_cast<std::size_t>(steps), [&](std::size_t i) {
        errors[i] = error_at(grid_point(low, high, steps, static_cast<int>(i)));
    });
    for (int i = 0; i < steps; ++i) {
        auto& row = result.rows[static_cast<std::size_t>(i)];
        row.parameter = grid_point(low, high, steps, i);
        row.error = errors[static_cast<std::size_t>(i)];
        row.pass = row.error <= budget;
    }
    locate_threshold(result, error_at);
    result.first_non_monotone = find_non_monotone(result.rows);
    return result;
}

}  // namespace splitgate
