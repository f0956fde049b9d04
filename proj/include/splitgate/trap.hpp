#pragma once
// Physical parameters, unit conventions, and the kick-scheme data model.
//
// Two trapped ions share a centre-of-mass (COM) mode at angular frequency nu
// and a stretch mode at sqrt(3)*nu.  A "kick group" is |z| simultaneous
// counter-propagating pi-pulse pairs hitting both ions at time t; the sign of
// z is the direction of the first pulse of each pair.  Times are measured in
// COM trap periods T_P = 2*pi/nu throughout unless a variable is explicitly
// suffixed _s (seconds).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitgate {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline const double sqrt3 = std::sqrt(3.0);

// Thrown when a value object violates its structural invariants (exit code 2
// at the CLI boundary).
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a requested computation has no feasible answer (exit code 3).
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrapParams {
    double eta = 0.2;             // single-ion Lamb-Dicke parameter at the COM frequency
    double nu = two_pi * 3.52e6;  // COM angular trap frequency, rad/s
    double nbar = 0.1;            // mean thermal phonon number per mode

    // Derived mode constants (read-only).
    double eta_c() const { return eta / std::sqrt(2.0); }
    double eta_r() const { return eta * std::pow(4.0 / 3.0, 0.25); }
    double nu_r() const { return sqrt3 * nu; }
    double trap_period() const { return two_pi / nu; }  // seconds

    void validate() const;
};

struct LaserParams {
    double rep_rate = 3.0e8;        // pulse repetition rate, Hz
    double max_area = 32.0 * pi;    // maximum emitted pulse area, rad (energy for 1024 pi pulses)
    double pulse_duration = 1e-13;  // emitted pulse duration, s (informational)

    // Repetition interval expressed in trap periods.
    double rep_interval(const TrapParams& trap) const {
        return 1.0 / (rep_rate * trap.trap_period());
    }

    void validate() const;
};

struct KickGroup {
    int z = 1;       // signed count of simultaneous pulse pairs, z != 0
    double t = 0.0;  // incidence time, trap periods
};

struct KickScheme {
    std::vector<KickGroup> groups;  // strictly increasing in t

    int n_pairs() const;  // sum of |z| over groups
    void validate() const;
};

// Returns a copy with all group times shifted by dt (trap periods).
KickScheme shift_scheme(const KickScheme& scheme, double dt);

// Six-group mirror-symmetric scheme: z = (a, -b, c, -c, b, -a)*n at
// t = (-tau1, -tau2, -tau3, tau3, tau2, tau1), all z negated when `negate`
// is set (the original three-delay gate scheme is (2,3,2) with negate).
struct SymmetricScheme {
    int a = 2, b = 3, c = 2;
    int n = 1;
    double tau1 = 0.0, tau2 = 0.0, tau3 = 0.0;  // tau1 > tau2 > tau3 > 0
    bool negate = false;

    void validate() const;
};

KickScheme expand_symmetric(const SymmetricScheme& s);

// Trap periods -> seconds and back.
double convert_time(double t_trap_periods, const TrapParams& params);
double convert_time_inverse(double t_seconds, const TrapParams& params);

}  // namespace splitgate
