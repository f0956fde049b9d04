#include "splitgate/trap.hpp"

#include <cstdlib>

namespace splitgate {

void TrapParams::validate() const {
    if (!(eta > 0.0)) throw invariant_error("TrapParams: eta must be > 0");
    if (!(nu > 0.0)) throw invariant_error("TrapParams: nu must be > 0");
    if (!(nbar >= 0.0)) throw invariant_error("TrapParams: nbar must be >= 0");
}

void LaserParams::validate() const {
    if (!(rep_rate > 0.0)) throw invariant_error("LaserParams: rep_rate must be > 0");
    if (!(max_area > 0.0)) throw invariant_error("LaserParams: max_area must be > 0");
}

int KickScheme::n_pairs() const {
    int total = 0;
    for (const auto& g : groups) total += std::abs(g.z);
    return total;
}

void KickScheme::validate() const {
    if (groups.empty()) throw invariant_error("KickScheme: needs at least one group");
    for (std::size_t k = 0; k < groups.size(); ++k) {
        if (groups[k].z == 0) throw invariant_error("KickScheme: group z must be nonzero");
        if (k > 0 && !(groups[k - 1].t < groups[k].t))
            throw invariant_error("KickScheme: group times must be strictly increasing");
    }
}

KickScheme shift_scheme(const KickScheme& scheme, double dt) {
    KickScheme out = scheme;
    for (auto& g : out.groups) g.t += dt;
    return out;
}

void SymmetricScheme::validate() const {
    if (a <= 0 || b <= 0 || c <= 0)
        throw invariant_error("SymmetricScheme: a, b, c must be positive");
    if (n <= 0) throw invariant_error("SymmetricScheme: n must be positive");
    if (!(tau1 > tau2 && tau2 > tau3 && tau3 > 0.0))
        throw invariant_error("SymmetricScheme: need tau1 > tau2 > tau3 > 0");
}

KickScheme expand_symmetric(const SymmetricScheme& s) {
    s.validate();
    const int sign = s.negate ? -1 : 1;
    const int za[6] = {s.a, -s.b, s.c, -s.c, s.b, -s.a};
    const double ta[6] = {-s.tau1, -s.tau2, -s.tau3, s.tau3, s.tau2, s.tau1};
    KickScheme out;
    out.groups.reserve(6);
    for (int k = 0; k < 6; ++k) out.groups.push_back({sign * s.n * za[k], ta[k]});
    out.validate();
    return out;
}

double convert_time(double t_trap_periods, const TrapParams& params) {
    return t_trap_periods * params.trap_period();
}

double convert_time_inverse(double t_seconds, const TrapParams& params) {
    return t_seconds / params.trap_period();
}

}  // namespace splitgate
