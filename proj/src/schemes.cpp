#include "splitgate/schemes.hpp"

#include <algorithm>
#include <cmath>

namespace splitgate {

namespace {

// Arrivals closer than this (trap periods) are one instantaneous group.
constexpr double coincidence_tol = 1e-9;

bool is_symmetric_kind(FamilyKind k) {
    return k == FamilyKind::gzc || k == FamilyKind::symmetric_abc;
}

bool is_split_kind(FamilyKind k) {
    return k == FamilyKind::direct_split || k == FamilyKind::alternating_split;
}

// Sorts (z, t) pairs, merges coincident arrivals with summed z, and drops
// groups whose signed sum cancels exactly (opposite-direction pairs landing
// at the same instant have no net condition-level effect).
KickScheme merge_pairs(std::vector<std::pair<double, int>> arrivals) {
    std::sort(arrivals.begin(), arrivals.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    KickScheme out;
    for (const auto& [t, z] : arrivals) {
        if (!out.groups.empty() && t - out.groups.back().t <= coincidence_tol) {
            out.groups.back().z += z;
        } else {
            out.groups.push_back({z, t});
        }
    }
    std::erase_if(out.groups, [](const KickGroup& g) { return g.z == 0; });
    if (out.groups.empty())
        throw invariant_error("generate: all pulse pairs cancelled after merging");
    out.validate();
    return out;
}

}  // namespace

int SchemeFamily::free_variable_count() const {
    switch (kind) {
        case FamilyKind::gzc:
        case FamilyKind::symmetric_abc:
            return 3;
        case FamilyKind::direct_split:
        case FamilyKind::alternating_split:
            return n_delays;
        case FamilyKind::free_times:
            return n_free_times;
    }
    return 0;
}

std::string SchemeFamily::name() const {
    switch (kind) {
        case FamilyKind::gzc:
            return "gzc[n=" + std::to_string(n) + "]";
        case FamilyKind::symmetric_abc:
            return "symmetric[" + std::to_string(a) + "," + std::to_string(b) + "," +
                   std::to_string(c) + ";n=" + std::to_string(n) + "]";
        case FamilyKind::direct_split:
            return "direct_split[P=" + std::to_string(pulse_count) +
                   ",m=" + std::to_string(n_delays) + "]";
        case FamilyKind::alternating_split:
            return "alternating_split[P=" + std::to_string(pulse_count) +
                   ",m=" + std::to_string(n_delays) + "]";
        case FamilyKind::free_times:
            return "free_times[d=" + std::to_string(n_free_times) + "]";
    }
    return "unknown";
}

void SchemeFamily::validate() const {
    if (is_symmetric_kind(kind)) {
        if (a <= 0 || b <= 0 || c <= 0 || n <= 0)
            throw invariant_error("SchemeFamily: a, b, c, n must be positive");
    } else if (is_split_kind(kind)) {
        if (pulse_count < 1) throw invariant_error("SchemeFamily: pulse_count must be >= 1");
        if (n_delays < 1) throw invariant_error("SchemeFamily: need at least one delay loop");
    } else {
        if (n_free_times < 1) throw invariant_error("SchemeFamily: need at least one free time");
    }
    if (rep_rate < 0.0) throw invariant_error("SchemeFamily: rep_rate must be >= 0");
}

SymmetricScheme symmetric_from_family(const SchemeFamily& family,
                                      const std::vector<double>& taus) {
    SymmetricScheme s;
    if (family.kind == FamilyKind::gzc) {
        s.a = 2;
        s.b = 3;
        s.c = 2;
        s.negate = true;
    } else {
        s.a = family.a;
        s.b = family.b;
        s.c = family.c;
        s.negate = family.negate;
    }
    s.n = family.n;
    if (taus.size() != 3)
        throw invariant_error("symmetric family expects exactly (tau1, tau2, tau3)");
    s.tau1 = taus[0];
    s.tau2 = taus[1];
    s.tau3 = taus[2];
    return s;
}

KickScheme generate(const SchemeFamily& family, const std::vector<double>& delays,
                    const TrapParams& trap, const LaserParams& laser) {
    family.validate();
    if (static_cast<int>(delays.size()) != family.free_variable_count())
        throw invariant_error("generate: delay vector arity mismatch for " + family.name());

    if (is_symmetric_kind(family.kind))
        return expand_symmetric(symmetric_from_family(family, delays));

    if (family.kind == FamilyKind::free_times) {
        KickScheme out;
        out.groups.push_back({+1, 0.0});
        int sign = -1;
        for (double x : delays) {
            out.groups.push_back({sign, x});
            sign = -sign;
        }
        out.validate();
        return out;
    }

    // direct_split / alternating_split: subset sums of the loop delays per
    // laser pulse.  In the alternating variant the last loop's delayed copies
    // flip pair direction.
    LaserParams lp = laser;
    if (family.rep_rate > 0.0) lp.rep_rate = family.rep_rate;
    const double rep = lp.rep_interval(trap);
    const int m = family.n_delays;
    const bool alternate = family.kind == FamilyKind::alternating_split;

    std::vector<std::pair<double, int>> arrivals;
    arrivals.reserve(static_cast<std::size_t>(family.pulse_count) << m);
    for (int p = 0; p < family.pulse_count; ++p) {
        const double base = p * rep;
        for (int mask = 0; mask < (1 << m); ++mask) {
            double t = base;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1) t += delays[static_cast<std::size_t>(i)];
            const bool flipped = alternate && (mask >> (m - 1) & 1);
            arrivals.emplace_back(t, flipped ? -1 : +1);
        }
    }
    return merge_pairs(std::move(arrivals));
}

std::vector<KnownSolution> enumerate_known_solutions() {
    std::vector<KnownSolution> out;

    SchemeFamily direct8;
    direct8.kind = FamilyKind::direct_split;
    direct8.pulse_count = 1;
    direct8.n_delays = 3;
    out.push_back({direct8, 8, 1.37});

    SchemeFamily alt16;
    alt16.kind = FamilyKind::alternating_split;
    alt16.pulse_count = 2;
    alt16.n_delays = 3;
    out.push_back({alt16, 16, 1.18});

    SchemeFamily sym122;
    sym122.kind = FamilyKind::symmetric_abc;
    sym122.a = 1;
    sym122.b = 2;
    sym122.c = 2;
    sym122.n = 32;
    out.push_back({sym122, 320, 0.12});

    SchemeFamily free32;
    free32.kind = FamilyKind::free_times;
    free32.n_free_times = 31;  // 32 unit kicks
    out.push_back({free32, 32, 0.086});

    return out;
}

}  // namespace splitgate
