#include "splitgate/phase_space.hpp"

#include <cmath>

namespace splitgate {

namespace {

// Mode angular frequency in units where the COM frequency is 2π per trap
// period; the stretch mode sits at √3 times that.
double mode_omega(MotionalMode mode) {
    return mode == MotionalMode::centre_of_mass ? two_pi : two_pi * sqrt3;
}

double kick_strength(MotionalMode mode, const TrapParams& params) {
    return mode == MotionalMode::centre_of_mass ? 4.0 * params.eta_c()
                                                : 2.0 * params.eta_r();
}

}  // namespace

Trajectory trajectory(const KickScheme& scheme, const TrapParams& params,
                      MotionalMode mode, std::complex<double> initial_alpha,
                      bool lab_frame) {
    scheme.validate();
    params.validate();

    const double omega = mode_omega(mode);
    const double lam = kick_strength(mode, params);

    Trajectory out;
    out.mode = mode;
    out.lab_frame = lab_frame;
    out.points.reserve(2 * scheme.groups.size() + 1);

    // alpha evolves in the frame rotating at the mode frequency, phase
    // referenced to t = 0; a kick at time t contributes beta e^{iωt} there.
    std::complex<double> alpha = initial_alpha;
    double phase = 0.0;

    const double t0 = scheme.groups.front().t;
    auto emit = [&](int index, double t) {
        std::complex<double> shown = alpha;
        if (lab_frame) shown *= std::polar(1.0, -omega * t);
        out.points.push_back({index, t, std::sqrt(2.0) * shown.real(),
                              std::sqrt(2.0) * shown.imag()});
    };

    int index = 0;
    emit(index++, t0);
    for (const auto& g : scheme.groups) {
        emit(index++, g.t);  // pre-kick (duplicates the previous post point)
        const std::complex<double> beta =
            std::complex<double>(0.0, -1.0) * (lam * static_cast<double>(g.z));
        const std::complex<double> beta_rot = beta * std::polar(1.0, omega * g.t);
        // D(beta_rot) D(alpha) = e^{i Im(beta_rot alpha*)} D(alpha + beta_rot)
        phase += std::imag(beta_rot * std::conj(alpha));
        alpha += beta_rot;
        emit(index++, g.t);  // post-kick
    }

    out.net_displacement = alpha - initial_alpha;
    out.accumulated_phase = phase;
    return out;
}

double geometric_phase_difference(const KickScheme& scheme, const TrapParams& params) {
    const Trajectory com =
        trajectory(scheme, params, MotionalMode::centre_of_mass);
    const Trajectory str = trajectory(scheme, params, MotionalMode::stretch);
    return 0.5 * (com.accumulated_phase - str.accumulated_phase);
}

double peak_excursion(const KickScheme& scheme, const TrapParams& params) {
    double peak = 0.0;
    for (MotionalMode mode : {MotionalMode::centre_of_mass, MotionalMode::stretch}) {
        const Trajectory traj = trajectory(scheme, params, mode);
        for (const auto& pt : traj.points)
            peak = std::max(peak, std::hypot(pt.x, pt.p) / std::sqrt(2.0));
    }
    return peak;
}

}  // namespace splitgate
