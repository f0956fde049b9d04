#include "splitgate/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splitgate/conditions.hpp"
#include "splitgate/parallel.hpp"
#include "splitgate/phase_space.hpp"

namespace splitgate {

void OracleConfig::validate() const {
    if (n_max < 8) throw invariant_error("oracle truncation must be >= 8 levels");
    if (!(std::abs(epsilon) < pi / 4.0))
        throw invariant_error("pulse-area error must satisfy |epsilon| < pi/4");
    if (nbar < 0.0) throw invariant_error("thermal occupation must be >= 0");
    if (search_grid < 2) throw invariant_error("state search grid must be >= 2 per axis");
    if (refine_sweeps < 1) throw invariant_error("state search needs >= 1 refinement sweep");
    if (!(alpha_max > 0.0)) throw invariant_error("state search radius must be > 0");
    if (!(weight_cutoff > 0.0) || weight_cutoff >= 1.0)
        throw invariant_error("thermal weight cutoff must lie in (0, 1)");
}

std::array<std::complex<double>, 4> ideal_internal_phases() {
    const std::complex<double> plus = std::polar(1.0, pi / 4.0);
    const std::complex<double> minus = std::polar(1.0, -pi / 4.0);
    return {plus, minus, minus, plus};
}

InternalBlocks InternalBlocks::zero(int n) {
    InternalBlocks s;
    for (auto& b : s.block) b = Eigen::MatrixXcd::Zero(n, n);
    return s;
}

InternalBlocks InternalBlocks::basis(int n, int j, int mc, int mr) {
    if (j < 0 || j > 3 || mc < 0 || mc >= n || mr < 0 || mr >= n)
        throw invariant_error("basis index out of range");
    InternalBlocks s = zero(n);
    s.block[static_cast<std::size_t>(j)](mc, mr) = 1.0;
    return s;
}

double InternalBlocks::squared_norm() const {
    double total = 0.0;
    for (const auto& b : block) total += b.squaredNorm();
    return total;
}

namespace {

// e^{iλ(a+a†)} on the truncated space via the eigenbasis of the (real,
// symmetric, tridiagonal) quadrature matrix — exactly unitary at any λ, and
// complex symmetric because the eigenvector matrix is real.
Eigen::MatrixXcd displacement_factor(const Eigen::VectorXd& w, const Eigen::MatrixXd& v,
                                     double lam) {
    const Eigen::VectorXcd phases =
        (std::complex<double>(0.0, 1.0) * lam * w.cast<std::complex<double>>().array())
            .exp();
    return (v.cast<std::complex<double>>() * phases.asDiagonal()) *
           v.transpose().cast<std::complex<double>>();
}

}  // namespace

GateUnitary::GateUnitary(const OracleConfig& config, const TrapParams& params,
                         std::vector<Step> steps)
    : config_(config), n_(config.n_max), steps_(std::move(steps)) {
    config_.validate();
    params.validate();
    eta_c_ = params.eta_c();
    eta_r_ = params.eta_r();

    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n_, n_);
    for (int m = 0; m + 1 < n_; ++m)
        x(m, m + 1) = x(m + 1, m) = std::sqrt(m + 1.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
    const Eigen::VectorXd& w = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    ec_pos_ = displacement_factor(w, v, eta_c_);
    ec_neg_ = displacement_factor(w, v, -eta_c_);
    er_pos_ = displacement_factor(w, v, eta_r_ / 2.0);
    er_neg_ = displacement_factor(w, v, -eta_r_ / 2.0);
}

void GateUnitary::set_excursion(double excursion) {
    excursion_ = excursion;
    // Exact unitarity makes truncation silent: flag schemes whose trajectory
    // (plus the thermal/coherent halo the fidelities probe) approaches the
    // represented disc of radius ~√n_max.
    truncation_warning_ =
        excursion * excursion + 5.0 * excursion > 0.75 * static_cast<double>(n_);
}

void GateUnitary::pulse_into(InternalBlocks& state, int direction, double theta) const {
    const double c = std::cos(theta);
    const std::complex<double> mis(0.0, -std::sin(theta));
    const Eigen::MatrixXcd& ec_p = direction > 0 ? ec_pos_ : ec_neg_;
    const Eigen::MatrixXcd& ec_m = direction > 0 ? ec_neg_ : ec_pos_;
    const Eigen::MatrixXcd& er_p = direction > 0 ? er_pos_ : er_neg_;
    const Eigen::MatrixXcd& er_m = direction > 0 ? er_neg_ : er_pos_;

    // Ion 1: couples |1q⟩ ↔ |0q⟩, blocks (0,2) and (1,3); the raising part
    // carries e^{+i d k·x_1} = (+η_c on COM, +η_r/2 on stretch).  The
    // stretch factor acts on column indices; it is complex symmetric, so
    // right-multiplication by the matrix itself realizes its transpose.
    for (const auto& [hi, lo] : {std::pair<int, int>{0, 2}, {1, 3}}) {
        Eigen::MatrixXcd up = ec_p * state.block[lo] * er_p;
        Eigen::MatrixXcd dn = ec_m * state.block[hi] * er_m;
        state.block[hi] = c * state.block[hi] + mis * up;
        state.block[lo] = c * state.block[lo] + mis * dn;
    }
    // Ion 2: couples |q1⟩ ↔ |q0⟩, blocks (0,1) and (2,3); same COM factor,
    // stretch sign flipped.
    for (const auto& [hi, lo] : {std::pair<int, int>{0, 1}, {2, 3}}) {
        Eigen::MatrixXcd up = ec_p * state.block[lo] * er_m;
        Eigen::MatrixXcd dn = ec_m * state.block[hi] * er_p;
        state.block[hi] = c * state.block[hi] + mis * up;
        state.block[lo] = c * state.block[lo] + mis * dn;
    }
}

InternalBlocks GateUnitary::apply(const InternalBlocks& in) const {
    for (const auto& b : in.block)
        if (b.rows() != n_ || b.cols() != n_)
            throw invariant_error("state dimension does not match the unitary");

    InternalBlocks state = in;
    Eigen::VectorXcd pc(n_), pr(n_);
    for (const auto& step : steps_) {
        if (step.kind == Step::Kind::rotate) {
            if (step.dt == 0.0) continue;
            for (int m = 0; m < n_; ++m) {
                pc(m) = std::polar(1.0, -two_pi * step.dt * m);
                pr(m) = std::polar(1.0, -two_pi * sqrt3 * step.dt * m);
            }
            for (auto& b : state.block)
                b = pc.asDiagonal() * b * pr.asDiagonal();
        } else {
            pulse_into(state, step.direction, step.theta);
        }
    }
    return state;
}

Eigen::MatrixXcd GateUnitary::dense() const {
    const int n = n_;
    const int dim = 4 * n * n;
    Eigen::MatrixXcd u(dim, dim);
    for (int j = 0; j < 4; ++j) {
        for (int mc = 0; mc < n; ++mc) {
            for (int mr = 0; mr < n; ++mr) {
                const InternalBlocks out = apply(InternalBlocks::basis(n, j, mc, mr));
                const int col = (j * n + mc) * n + mr;
                for (int i = 0; i < 4; ++i)
                    for (int rc = 0; rc < n; ++rc)
                        for (int rr = 0; rr < n; ++rr)
                            u((i * n + rc) * n + rr, col) = out.block[i](rc, rr);
            }
        }
    }
    return u;
}

GateUnitary kick_unitary(double theta, int direction, const OracleConfig& config,
                         const TrapParams& params) {
    if (direction != 1 && direction != -1)
        throw invariant_error("pulse direction must be +1 or -1");
    std::vector<GateUnitary::Step> steps(1);
    steps[0].kind = GateUnitary::Step::Kind::pulse;
    steps[0].direction = direction;
    steps[0].theta = theta;
    return GateUnitary(config, params, std::move(steps));
}

GateUnitary evolve_scheme(const KickScheme& scheme, const OracleConfig& config,
                          const TrapParams& params) {
    std::vector<GateUnitary::Step> steps;
    if (!scheme.groups.empty()) {
        scheme.validate();
        const double theta = pi / 2.0 + config.epsilon;
        double now = scheme.groups.front().t;
        for (const auto& g : scheme.groups) {
            if (g.t != now) {
                GateUnitary::Step rot;
                rot.kind = GateUnitary::Step::Kind::rotate;
                rot.dt = g.t - now;
                steps.push_back(rot);
                now = g.t;
            }
            const int d = g.z > 0 ? 1 : -1;
            for (int rep = 0; rep < std::abs(g.z); ++rep) {
                GateUnitary::Step fwd;
                fwd.kind = GateUnitary::Step::Kind::pulse;
                fwd.direction = d;
                fwd.theta = theta;
                steps.push_back(fwd);
                GateUnitary::Step bwd = fwd;
                bwd.direction = -d;
                steps.push_back(bwd);
            }
        }
        const double span = scheme.groups.back().t - scheme.groups.front().t;
        if (span != 0.0) {
            GateUnitary::Step unwind;
            unwind.kind = GateUnitary::Step::Kind::rotate;
            unwind.dt = -span;
            steps.push_back(unwind);
        }
    }
    GateUnitary u(config, params, std::move(steps));
    if (!scheme.groups.empty()) u.set_excursion(peak_excursion(scheme, params));
    return u;
}

ProcessFidelity process_fidelity_detail(const GateUnitary& u, const OracleConfig& config) {
    config.validate();
    const int n = u.dimension();

    // Thermal weights per mode, joint cutoff; the geometric tail past level
    // 11 is negligible for the low occupations this model targets.
    const int levels = std::min(12, n);
    std::vector<double> pm(levels);
    for (int m = 0; m < levels; ++m)
        pm[m] = std::pow(config.nbar / (1.0 + config.nbar), m) / (1.0 + config.nbar);

    struct Input {
        int mc, mr;
        double weight;
    };
    std::vector<Input> inputs;
    for (int mc = 0; mc < levels; ++mc)
        for (int mr = 0; mr < levels; ++mr)
            if (pm[mc] * pm[mr] >= config.weight_cutoff)
                inputs.push_back({mc, mr, pm[mc] * pm[mr]});
    if (inputs.empty()) throw invariant_error("thermal weight cutoff removed every input");

    const auto ui = ideal_internal_phases();
    std::vector<double> fidelity_part(inputs.size()), leak_part(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t i) {
        const auto& input = inputs[i];
        std::array<InternalBlocks, 4> cols = {
            u.apply(InternalBlocks::basis(n, 0, input.mc, input.mr)),
            u.apply(InternalBlocks::basis(n, 1, input.mc, input.mr)),
            u.apply(InternalBlocks::basis(n, 2, input.mc, input.mr)),
            u.apply(InternalBlocks::basis(n, 3, input.mc, input.mr))};
        // Internal trace against the ideal gate, resolved over motional
        // outputs: Tr(U_I† K) = Σ_j conj(UI_j) ⟨j, out | u | j, in⟩.
        Eigen::MatrixXcd tr = Eigen::MatrixXcd::Zero(n, n);
        double norm = 0.0;
        for (int j = 0; j < 4; ++j) {
            tr += std::conj(ui[static_cast<std::size_t>(j)]) *
                  cols[static_cast<std::size_t>(j)].block[static_cast<std::size_t>(j)];
            norm += cols[static_cast<std::size_t>(j)].squared_norm();
        }
        fidelity_part[i] = tr.squaredNorm() / 16.0;
        leak_part[i] = 1.0 - norm / 4.0;
    });

    ProcessFidelity out;
    double wsum = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        wsum += inputs[i].weight;
        out.fidelity += inputs[i].weight * fidelity_part[i];
        out.leakage += inputs[i].weight * leak_part[i];
    }
    out.fidelity /= wsum;
    out.leakage /= wsum;
    return out;
}

double process_fidelity(const GateUnitary& u, const OracleConfig& config) {
    return process_fidelity_detail(u, config).fidelity;
}

namespace {

Eigen::VectorXcd coherent_vector(int n, std::complex<double> alpha) {
    Eigen::VectorXcd v(n);
    v(0) = 1.0;
    for (int m = 1; m < n; ++m) v(m) = v(m - 1) * alpha / std::sqrt(double(m));
    v *= std::exp(-std::norm(alpha) / 2.0);
    return v;
}

// min over unit internal states ψ of |⟨ψ|M|ψ⟩|²: the squared distance from
// the origin to the (convex) numerical range of the 4×4 matrix M, found by
// sweeping supporting half-planes.
double internal_min_overlap(const Eigen::Matrix4cd& m) {
    double best = 0.0;
    for (int k = 0; k <= 180; ++k) {
        const double phi = pi * k / 180.0;
        const Eigen::Matrix4cd h =
            (std::polar(1.0, -phi) * m + std::polar(1.0, phi) * m.adjoint()) / 2.0;
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h,
                                                                 Eigen::EigenvaluesOnly);
        best = std::max(best, es.eigenvalues()(0));
    }
    return best > 0.0 ? best * best : 0.0;
}

double overlap_objective(const GateUnitary& u, const OracleConfig& config,
                         const std::array<double, 4>& x) {
    const std::complex<double> ac(x[0], x[1]);
    const std::complex<double> ar(x[2], x[3]);
    if (std::abs(ac) > config.alpha_max || std::abs(ar) > config.alpha_max) return 1.0;

    const int n = u.dimension();
    const Eigen::VectorXcd cc = coherent_vector(n, ac);
    const Eigen::VectorXcd cr = coherent_vector(n, ar);
    const Eigen::MatrixXcd init = cc * cr.transpose();
    const auto ui = ideal_internal_phases();

    Eigen::Matrix4cd m;
    for (int j = 0; j < 4; ++j) {
        InternalBlocks in = InternalBlocks::zero(n);
        in.block[static_cast<std::size_t>(j)] = init;
        const InternalBlocks out = u.apply(in);
        for (int i = 0; i < 4; ++i) {
            // Project back onto the same coherent product state.
            const std::complex<double> amp =
                (cc.conjugate().transpose() * out.block[static_cast<std::size_t>(i)] *
                 cr.conjugate())(0);
            m(i, j) = std::conj(ui[static_cast<std::size_t>(i)]) * amp;
        }
    }
    return internal_min_overlap(m);
}

WorstCase refine_worst_case(const GateUnitary& u, const OracleConfig& config,
                            std::array<double, 4> x, double f) {
    double step = 0.3;
    int sweeps = 0;
    while (step > 1e-6 && sweeps < config.refine_sweeps) {
        ++sweeps;
        bool improved = false;
        for (int i = 0; i < 4; ++i) {
            for (const double sign : {1.0, -1.0}) {
                std::array<double, 4> cand = x;
                cand[static_cast<std::size_t>(i)] += sign * step;
                const double fc = overlap_objective(u, config, cand);
                if (fc < f - 1e-15) {
                    f = fc;
                    x = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step /= 2.0;
    }
    WorstCase out;
    out.fidelity = f;
    out.alpha = x;
    out.converged = step <= 1e-6;
    return out;
}

}  // namespace

WorstCase worst_case_fidelity_detail(const GateUnitary& u, const OracleConfig& config) {
    config.validate();
    const int grid = config.search_grid;
    const double span = config.alpha_max / std::sqrt(2.0);
    const std::size_t total = static_cast<std::size_t>(grid) * grid * grid * grid;

    std::vector<double> values(total);
    parallel_for(total, [&](std::size_t flat) {
        std::array<double, 4> x;
        std::size_t rest = flat;
        for (int axis = 3; axis >= 0; --axis) {
            const std::size_t idx = rest % static_cast<std::size_t>(grid);
            rest /= static_cast<std::size_t>(grid);
            x[static_cast<std::size_t>(axis)] =
                -span + 2.0 * span * static_cast<double>(idx) / (grid - 1);
        }
        values[flat] = overlap_objective(u, config, x);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < total; ++i)
        if (values[i] < values[best]) best = i;
    std::array<double, 4> x;
    std::size_t rest = best;
    for (int axis = 3; axis >= 0; --axis) {
        const std::size_t idx = rest % static_cast<std::size_t>(grid);
        rest /= static_cast<std::size_t>(grid);
        x[static_cast<std::size_t>(axis)] =
            -span + 2.0 * span * static_cast<double>(idx) / (grid - 1);
    }
    return refine_worst_case(u, config, x, values[best]);
}

WorstCase worst_case_fidelity_detail(const GateUnitary& u, const OracleConfig& config,
                                     const std::array<double, 4>& warm_start) {
    config.validate();
    return refine_worst_case(u, config, warm_start,
                             overlap_objective(u, config, warm_start));
}

double worst_case_fidelity(const GateUnitary& u, const OracleConfig& config) {
    return worst_case_fidelity_detail(u, config).fidelity;
}

PerturbationFit perturbation_coefficient(const KickScheme& scheme,
                                         const OracleConfig& config,
                                         const TrapParams& params) {
    config.validate();
    PerturbationFit fit;
    if (scheme.groups.empty()) return fit;

    // Anchor the minimizing-state branch with one full search mid-range.
    OracleConfig anchor_config = config;
    anchor_config.epsilon = 2e-3;
    const WorstCase anchor = worst_case_fidelity_detail(
        evolve_scheme(scheme, anchor_config, params), anchor_config);

    const double eps_values[] = {-4e-3, -2e-3, -1e-3, 1e-3, 2e-3, 4e-3};
    double s2 = 0.0, s4 = 0.0, sy1 = 0.0, sy2 = 0.0;
    for (const double eps : eps_values) {
        OracleConfig run = config;
        run.epsilon = eps;
        const WorstCase wc = worst_case_fidelity_detail(evolve_scheme(scheme, run, params),
                                                        run, anchor.alpha);
        const double y = 1.0 - wc.fidelity;
        fit.samples.emplace_back(eps, wc.fidelity);
        s2 += eps * eps;
        s4 += eps * eps * eps * eps;
        sy1 += eps * y;
        sy2 += eps * eps * y;
    }
    // The ε set is symmetric, so the quadratic and linear parts decouple.
    fit.c = sy2 / s4;
    fit.b = sy1 / s2;

    double ss = 0.0;
    for (const auto& [eps, fw] : fit.samples) {
        const double r = (1.0 - fw) - (fit.c * eps * eps + fit.b * eps);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / fit.samples.size());
    const double eps_max = 4e-3;
    fit.non_quadratic = fit.residual > 0.01 * std::abs(fit.c) * eps_max * eps_max;
    fit.linear_term = std::abs(fit.b) > 0.01 * std::abs(fit.c) * 1e-3;
    return fit;
}

KickScheme double_scheme(const KickScheme& scheme, const TrapParams& params) {
    scheme.validate();
    params.validate();

    const double span = scheme.groups.back().t - scheme.groups.front().t;
    auto combined_at = [&](double shift) {
        KickScheme out = scheme;
        for (const auto& g : scheme.groups) out.groups.push_back({g.z, g.t + shift});
        return out;
    };
    auto phase_miss = [&](double shift) {
        return std::remainder(pi / 4.0 - phase_theta(combined_at(shift), params),
                              pi / 2.0);
    };

    // Scan one trap period past the block for a sign change of the wrapped
    // phase miss, then bisect; the copies' closures are both exactly zero,
    // so any shift keeps the trajectories closed.
    const double start = span + 0.1;
    const int samples = 2001;
    double prev_shift = start;
    double prev_miss = phase_miss(prev_shift);
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (int i = 1; i < samples; ++i) {
        const double shift = start + static_cast<double>(i) / (samples - 1);
        const double miss = phase_miss(shift);
        if (std::abs(miss) < 1e-12) {
            lo = hi = shift;
            found = true;
            break;
        }
        if (prev_miss * miss < 0.0 && std::abs(prev_miss) < pi / 8.0 &&
            std::abs(miss) < pi / 8.0) {
            lo = prev_shift;
            hi = shift;
            found = true;
            break;
        }
        prev_shift = shift;
        prev_miss = miss;
    }
    if (!found)
        throw infeasible_error("no phase-restoring shift found when doubling the scheme");

    if (lo != hi) {
        double flo = phase_miss(lo);
        for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double fmid = phase_miss(mid);
            if (flo * fmid <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fmid;
            }
        }
    }
    KickScheme out = combined_at(0.5 * (lo + hi));
    out.validate();
    return out;
}

std::vector<GrowthRow> error_growth_scan(const KickScheme& base,
                                         const std::vector<int>& sizes, double epsilon,
                                         const OracleConfig& config,
                                         const TrapParams& params) {
    base.validate();
    config.validate();
    if (sizes.size() < 3) throw invariant_error("growth scan needs >= 3 sizes");

    // Schemes reachable from the base by doubling, largest first.
    std::vector<std::pair<int, KickScheme>> ladder;
    ladder.emplace_back(base.n_pairs(), base);

    std::vector<GrowthRow> rows;
    for (const int n : sizes) {
        GrowthRow row;
        row.n_pairs = n;
        row.epsilon = epsilon;
        row.breakdown_flagged = epsilon * static_cast<double>(n) >= 1.0 - 1e-12;

        KickScheme const* scheme = nullptr;
        int have = ladder.back().first;
        if (n >= have && n % have == 0) {
            int factor = n / have;
            bool power_of_two = (factor & (factor - 1)) == 0;
            if (power_of_two) {
                while (ladder.back().first < n) {
                    KickScheme doubled = double_scheme(ladder.back().second, params);
                    ladder.emplace_back(doubled.n_pairs(), std::move(doubled));
                }
                if (ladder.back().first == n) scheme = &ladder.back().second;
            }
        }
        for (const auto& [count, candidate] : ladder)
            if (count == n) scheme = &candidate;

        if (scheme != nullptr && !row.breakdown_flagged) {
            // Reuse the guard band: only simulate while the doubled
            // trajectory stays inside the trustworthy disc.
            const double excursion = peak_excursion(*scheme, params);
            const double budget = 0.75 * static_cast<double>(config.n_max);
            if (excursion * excursion + 5.0 * excursion <= budget) {
                row.c = perturbation_coefficient(*scheme, config, params).c;
                row.simulated = true;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace splitgate
