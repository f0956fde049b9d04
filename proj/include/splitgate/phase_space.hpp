#pragma once
// Rotating-frame phase-space trajectories for both motional modes and an
// independent geometric-phase computation from displacement composition.
//
// Conventions: X = (a + a†)/√2, P = (a − a†)/(i√2); a coherent amplitude
// alpha has (X, P) = (√2 Re alpha, √2 Im alpha).  Each kick group displaces
// the plotted internal branch by beta_k = −i λ_k with
//   λ_k = 4 η_c z_k   (COM mode, |00⟩ branch, both spins up)
//   λ_k = 2 η_r z_k   (stretch mode, |01⟩ branch)
// so a single z=1 pair from vacuum lands at ⟨P_c⟩ = −√2·4η_c = −0.8 at
// η = 0.2.  Composing displacements D(β)D(α) = e^{i Im(β α*)} D(α+β)
// accumulates the geometric phase; the difference between the two branches'
// phases, halved, reproduces the closed-form Theta.

#include <complex>
#include <string>
#include <vector>

#include "splitgate/trap.hpp"

namespace splitgate {

enum class MotionalMode { centre_of_mass, stretch };

struct TrajectoryPoint {
    int index = 0;
    double time = 0.0;  // trap periods
    double x = 0.0;
    double p = 0.0;
};

struct Trajectory {
    MotionalMode mode = MotionalMode::centre_of_mass;
    bool lab_frame = false;
    // Start point plus pre- and post-kick points per group: 2 N_groups + 1.
    std::vector<TrajectoryPoint> points;
    // Final minus initial rotating-frame amplitude (t = 0 phase reference).
    std::complex<double> net_displacement{0.0, 0.0};
    double accumulated_phase = 0.0;

    std::string branch_label() const {
        return mode == MotionalMode::centre_of_mass ? "|00>" : "|01>";
    }
    std::string frame_label() const { return lab_frame ? "lab" : "rotating"; }
};

Trajectory trajectory(const KickScheme& scheme, const TrapParams& params,
                      MotionalMode mode, std::complex<double> initial_alpha = {0.0, 0.0},
                      bool lab_frame = false);

// Half the phase difference between the |00⟩ (COM-driven) and |01⟩
// (stretch-driven) branches, computed purely by displacement composition.
double geometric_phase_difference(const KickScheme& scheme, const TrapParams& params);

// Largest |α| reached by either mode's rotating-frame trajectory from
// vacuum.  Truncated simulations are only trustworthy while this stays well
// inside the represented disc (~√n_max).
double peak_excursion(const KickScheme& scheme, const TrapParams& params);

}  // namespace splitgate
