#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "splitgate/conditions.hpp"
#include "splitgate/oracle.hpp"
#include "splitgate/phase_space.hpp"
#include "splitgate/trap.hpp"

using namespace splitgate;

namespace {

const double kPi = 3.14159265358979323846;
const double kEtaStar = 0.31803534015543367;

// Four unit kicks at (0, u, 1/2, 1/2+u), u = 1/(2*sqrt(3)): closure is exact
// for both modes, and at eta = eta* the accumulated phase is exactly pi/4.
KickScheme closed_four_pair() {
    const double u = 0.5 / std::sqrt(3.0);
    return KickScheme{{{1, 0.0}, {1, u}, {1, 0.5}, {1, 0.5 + u}}};
}

TrapParams exact_trap() {
    TrapParams trap;
    trap.eta = kEtaStar;
    return trap;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("config validation") {
    OracleConfig good;
    CHECK_NOTHROW(good.validate());

    OracleConfig c = good;
    c.n_max = 4;
    CHECK_THROWS_AS(c.validate(), invariant_error);

    c = good;
    c.epsilon = kPi / 4.0;
    CHECK_THROWS_AS(c.validate(), invariant_error);

    c = good;
    c.nbar = -0.1;
    CHECK_THROWS_AS(c.validate(), invariant_error);

    c = good;
    c.search_grid = 1;
    CHECK_THROWS_AS(c.validate(), invariant_error);

    c = good;
    c.refine_sweeps = 0;
    CHECK_THROWS_AS(c.validate(), invariant_error);

    c = good;
    c.alpha_max = 0.0;
    CHECK_THROWS_AS(c.validate(), invariant_error);

    c = good;
    c.weight_cutoff = 1.0;
    CHECK_THROWS_AS(c.validate(), invariant_error);
}

TEST_CASE("ideal internal phases") {
    const auto ui = ideal_internal_phases();
    const std::complex<double> plus = std::polar(1.0, kPi / 4.0);
    const std::complex<double> minus = std::conj(plus);
    CHECK(std::abs(ui[0] - plus) <= 1e-15);
    CHECK(std::abs(ui[1] - minus) <= 1e-15);
    CHECK(std::abs(ui[2] - minus) <= 1e-15);
    CHECK(std::abs(ui[3] - plus) <= 1e-15);
}

TEST_CASE("basis states and norms") {
    const auto s = InternalBlocks::basis(8, 2, 3, 1);
    CHECK(s.squared_norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.block[2](3, 1) == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(s.block[0].norm()) == 0.0);
    CHECK(std::abs(s.block[2].norm() - 1.0) <= 1e-15);

    const auto z = InternalBlocks::zero(8);
    CHECK(z.squared_norm() == 0.0);
    CHECK(z.block[3].rows() == 8);
}

TEST_CASE("free evolution phases are mode-resolved") {
    OracleConfig cfg;
    cfg.n_max = 8;
    TrapParams trap;

    // Half a trap period advances one COM quantum by exactly pi, whichever
    // sign convention the frame uses.  Relative phases are convention-free.
    std::vector<GateUnitary::Step> half(1);
    half[0].kind = GateUnitary::Step::Kind::rotate;
    half[0].dt = 0.5;
    GateUnitary uh(cfg, trap, half);
    const auto g0 = uh.apply(InternalBlocks::basis(8, 0, 0, 0));
    const auto g1 = uh.apply(InternalBlocks::basis(8, 0, 1, 0));
    const std::complex<double> rel_com = g1.block[0](1, 0) / g0.block[0](0, 0);
    CHECK(std::abs(rel_com - std::complex<double>(-1.0, 0.0)) <= 1e-12);

    // One full COM period leaves the stretch quantum mid-cycle: the relative
    // phase magnitude is cos/sin of 2 pi sqrt(3) up to the frame sign.
    std::vector<GateUnitary::Step> full(1);
    full[0].kind = GateUnitary::Step::Kind::rotate;
    full[0].dt = 1.0;
    GateUnitary uf(cfg, trap, full);
    const auto h0 = uf.apply(InternalBlocks::basis(8, 0, 0, 0));
    const auto h1 = uf.apply(InternalBlocks::basis(8, 0, 0, 1));
    const std::complex<double> rel_str = h1.block[0](0, 1) / h0.block[0](0, 0);
    const double ang = 2.0 * kPi * std::sqrt(3.0);
    CHECK(std::abs(rel_str) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rel_str.real() == doctest::Approx(std::cos(ang)).epsilon(1e-12));
    CHECK(std::abs(rel_str.imag()) ==
          doctest::Approx(std::abs(std::sin(ang))).epsilon(1e-12));
}

TEST_CASE("zero-area pulse is the identity") {
    OracleConfig cfg;
    cfg.n_max = 12;
    TrapParams trap;
    const GateUnitary u = kick_unitary(0.0, 1, cfg, trap);
    const auto in = InternalBlocks::basis(12, 1, 2, 3);
    const auto out = u.apply(in);
    double diff = 0.0;
    for (int j = 0; j < 4; ++j) diff += (out.block[j] - in.block[j]).squaredNorm();
    CHECK(diff <= 1e-24);
    CHECK(u.excursion() == 0.0);
    CHECK_FALSE(u.truncation_warning());

    CHECK_THROWS_AS(kick_unitary(0.3, 0, cfg, trap), invariant_error);
}

TEST_CASE("apply preserves norm") {
    OracleConfig cfg;
    cfg.n_max = 16;
    TrapParams trap;
    const KickScheme s{{{2, 0.0}, {-1, 0.21}, {-1, 0.68}}};
    const GateUnitary u = evolve_scheme(s, cfg, trap);

    std::mt19937_64 eng(4242);
    std::normal_distribution<double> gauss(0.0, 1.0);
    InternalBlocks state = InternalBlocks::zero(16);
    for (auto& b : state.block)
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 16; ++c) b(r, c) = {gauss(eng), gauss(eng)};
    const double scale = 1.0 / std::sqrt(state.squared_norm());
    for (auto& b : state.block) b *= scale;

    const auto out = u.apply(state);
    CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("scheme evolution assembles the documented schedule") {
    OracleConfig cfg;
    cfg.n_max = 8;
    TrapParams trap;
    const KickScheme s{{{1, 0.0}, {-2, 0.3}}};
    const GateUnitary u = evolve_scheme(s, cfg, trap);

    const auto& steps = u.steps();
    REQUIRE(steps.size() == 8);
    using K = GateUnitary::Step::Kind;
    // Group one: a single +/- pulse pair.
    CHECK(steps[0].kind == K::pulse);
    CHECK(steps[0].direction == 1);
    CHECK(steps[0].theta == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(steps[1].kind == K::pulse);
    CHECK(steps[1].direction == -1);
    // Free evolution to group two.
    CHECK(steps[2].kind == K::rotate);
    CHECK(steps[2].dt == doctest::Approx(0.3).epsilon(1e-15));
    // Group two: |z| = 2 pairs along -1.
    CHECK(steps[3].direction == -1);
    CHECK(steps[4].direction == 1);
    CHECK(steps[5].direction == -1);
    CHECK(steps[6].direction == 1);
    // Frame unwind back to the first group's reference.
    CHECK(steps[7].kind == K::rotate);
    CHECK(steps[7].dt == doctest::Approx(-0.3).epsilon(1e-15));

    CHECK(u.excursion() ==
          doctest::Approx(peak_excursion(s, trap)).epsilon(1e-12));
}

TEST_CASE("pulse-area error shifts the half-area") {
    OracleConfig cfg;
    cfg.n_max = 8;
    cfg.epsilon = 3e-3;
    TrapParams trap;
    const GateUnitary u = evolve_scheme(KickScheme{{{1, 0.0}}}, cfg, trap);
    REQUIRE(u.steps().size() == 2);
    CHECK(u.steps()[0].theta ==
          doctest::Approx(kPi / 2.0 + 3e-3).epsilon(1e-15));
}

TEST_CASE("empty scheme is the identity channel") {
    OracleConfig cfg;
    cfg.n_max = 12;
    TrapParams trap;
    const GateUnitary u = evolve_scheme(KickScheme{}, cfg, trap);
    CHECK(u.steps().empty());
    CHECK(u.excursion() == 0.0);

    const auto in = InternalBlocks::basis(12, 3, 1, 2);
    const auto out = u.apply(in);
    double diff = 0.0;
    for (int j = 0; j < 4; ++j) diff += (out.block[j] - in.block[j]).squaredNorm();
    CHECK(diff == 0.0);

    // Identity against the ideal gate: |2 cos(pi/4) * 2|^2 / 16 = 1/2.
    const auto pf = process_fidelity_detail(u, cfg);
    CHECK(pf.fidelity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(pf.leakage) <= 1e-12);
}

TEST_CASE("closed scheme returns the motional state") {
    OracleConfig cfg;
    cfg.n_max = 40;
    const TrapParams trap = exact_trap();
    const GateUnitary u = evolve_scheme(closed_four_pair(), cfg, trap);
    CHECK_FALSE(u.truncation_warning());

    // Start in an excited Fock product: closure returns all the weight to
    // the initial mode indices in every internal branch.
    const auto out = u.apply(InternalBlocks::basis(40, 3, 2, 1));
    double weight = 0.0;
    for (int j = 0; j < 4; ++j) weight += std::norm(out.block[j](2, 1));
    CHECK(weight >= 1.0 - 1e-8);
    CHECK(out.squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exact scheme implements a quarter-period conditional phase") {
    OracleConfig cfg;
    cfg.n_max = 40;
    const TrapParams trap = exact_trap();
    const GateUnitary u = evolve_scheme(closed_four_pair(), cfg, trap);

    const auto on_11 = u.apply(InternalBlocks::basis(40, 0, 0, 0));
    const auto on_01 = u.apply(InternalBlocks::basis(40, 2, 0, 0));
    const std::complex<double> amp11 = on_11.block[0](0, 0);
    const std::complex<double> amp01 = on_01.block[2](0, 0);
    CHECK(std::abs(amp11) >= 0.999);
    CHECK(std::abs(amp01) >= 0.999);
    // Same-spin and opposite-spin branches differ by twice the accumulated
    // phase: pi/2 modulo pi, whichever frame sign applies.
    CHECK(std::abs(std::cos(std::arg(amp11 * std::conj(amp01)))) <= 2e-6);

    const auto pf = process_fidelity_detail(u, cfg);
    CHECK(1.0 - pf.fidelity <= 2e-4);
    CHECK(std::abs(pf.leakage) <= 1e-10);
}

TEST_CASE("broken closure degrades the process fidelity") {
    OracleConfig cfg;
    cfg.n_max = 40;
    TrapParams trap;  // default eta = 0.2
    const KickScheme bad{{{3, 0.0}, {-3, 0.37}}};
    const double f_bad = process_fidelity(evolve_scheme(bad, cfg, trap), cfg);
    CHECK(f_bad > 0.05);
    CHECK(f_bad < 0.75);

    const TrapParams exact = exact_trap();
    const double f_good =
        process_fidelity(evolve_scheme(closed_four_pair(), cfg, exact), cfg);
    CHECK(f_good > 0.999);
    CHECK(f_good > f_bad);
}

TEST_CASE("worst case search on the exact gate") {
    OracleConfig cfg;
    cfg.n_max = 40;
    cfg.alpha_max = 1.0;
    cfg.search_grid = 3;
    cfg.refine_sweeps = 120;
    const TrapParams trap = exact_trap();
    const GateUnitary u = evolve_scheme(closed_four_pair(), cfg, trap);

    const WorstCase wc = worst_case_fidelity_detail(u, cfg);
    CHECK(wc.fidelity >= 0.999);
    CHECK(wc.fidelity <= 1.0 + 1e-12);
    CHECK(wc.converged);
    CHECK(std::hypot(wc.alpha[0], wc.alpha[1]) <= cfg.alpha_max + 1e-9);
    CHECK(std::hypot(wc.alpha[2], wc.alpha[3]) <= cfg.alpha_max + 1e-9);

    // Warm-started refinement from the found state can only stay or improve.
    const WorstCase warm = worst_case_fidelity_detail(u, cfg, wc.alpha);
    CHECK(warm.fidelity <= wc.fidelity + 1e-9);
}

TEST_CASE("perturbation fit on the empty scheme is the default") {
    OracleConfig cfg;
    cfg.n_max = 12;
    TrapParams trap;
    const PerturbationFit fit = perturbation_coefficient(KickScheme{}, cfg, trap);
    CHECK(fit.c == 0.0);
    CHECK(fit.b == 0.0);
    CHECK(fit.residual == 0.0);
    CHECK_FALSE(fit.non_quadratic);
    CHECK_FALSE(fit.linear_term);
    CHECK(fit.samples.empty());
}

TEST_CASE("perturbation coefficient of the exact four-pair scheme") {
    OracleConfig cfg;
    cfg.n_max = 32;
    cfg.alpha_max = 1.2;
    cfg.search_grid = 3;
    cfg.refine_sweeps = 60;
    const TrapParams trap = exact_trap();

    const PerturbationFit fit =
        perturbation_coefficient(closed_four_pair(), cfg, trap);
    REQUIRE(fit.samples.size() == 6);
    for (const auto& [eps, fw] : fit.samples) {
        CHECK(std::abs(eps) <= 4e-3 + 1e-15);
        CHECK(fw > 0.9);
        CHECK(fw <= 1.0 + 1e-12);
    }
    // Quadratic error response with no linear remnant at a closed scheme.
    CHECK(fit.c > 20.0);
    CHECK(fit.c < 800.0);
    CHECK_FALSE(fit.linear_term);
    CHECK_FALSE(fit.non_quadratic);
}

TEST_CASE("scheme doubling preserves the gate conditions") {
    const TrapParams trap = exact_trap();
    const KickScheme base = closed_four_pair();
    const KickScheme doubled = double_scheme(base, trap);

    REQUIRE(doubled.groups.size() == 8);
    CHECK(doubled.n_pairs() == 8);
    for (int k = 0; k < 4; ++k) {
        CHECK(doubled.groups[k].z == base.groups[k].z);
        CHECK(doubled.groups[k].t ==
              doctest::Approx(base.groups[k].t).epsilon(1e-12));
    }
    // The copy starts past the original span plus the scan margin.
    const double span = base.groups.back().t - base.groups.front().t;
    CHECK(doubled.groups[4].t >= span + 0.1 - 1e-9);

    const ConditionReport rep = condition_error(doubled, trap);
    CHECK(rep.e_total <= 1e-9);
    CHECK(gate_time(doubled) > gate_time(base));
}

TEST_CASE("error growth scan") {
    OracleConfig cfg;
    cfg.n_max = 32;
    cfg.alpha_max = 1.2;
    cfg.search_grid = 3;
    cfg.refine_sweeps = 60;
    const TrapParams trap = exact_trap();
    const KickScheme base = closed_four_pair();

    CHECK_THROWS_AS(error_growth_scan(base, {4, 8}, 1e-2, cfg, trap),
                    invariant_error);

    const auto rows = error_growth_scan(base, {4, 8, 100}, 1e-2, cfg, trap);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].n_pairs == 4);
    CHECK(rows[0].simulated);
    CHECK_FALSE(rows[0].breakdown_flagged);
    CHECK(rows[0].c > 0.0);

    CHECK(rows[1].n_pairs == 8);
    CHECK(rows[1].simulated);
    CHECK_FALSE(rows[1].breakdown_flagged);
    // Sensitivity grows with the pair count.
    CHECK(rows[1].c > rows[0].c);

    CHECK(rows[2].n_pairs == 100);
    CHECK_FALSE(rows[2].simulated);
    CHECK(rows[2].breakdown_flagged);
    CHECK(rows[2].c == 0.0);
}

TEST_CASE("truncation guard tracks the excursion") {
    OracleConfig cfg;
    cfg.n_max = 16;
    TrapParams trap;
    GateUnitary u = kick_unitary(0.3, 1, cfg, trap);

    // Guard band: excursion^2 + 5*excursion against 0.75 * n_max = 12.
    u.set_excursion(1.7);
    CHECK(u.excursion() == doctest::Approx(1.7).epsilon(1e-15));
    CHECK_FALSE(u.truncation_warning());
    u.set_excursion(1.9);
    CHECK(u.truncation_warning());
}

}  // TEST_SUITE("oracle")
