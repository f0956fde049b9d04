#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "splitgate/conditions.hpp"
#include "splitgate/manifest.hpp"
#include "splitgate/phase_space.hpp"
#include "splitgate/serialize.hpp"

using namespace splitgate;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("scheme json round trip") {
    const KickScheme s{{{1, 0.0}, {-2, 0.37}, {1, 0.61}}};
    const json j = scheme_to_json(s);
    CHECK(j.at("units").get<std::string>() == "trap_periods");
    REQUIRE(j.at("groups").size() == 3);

    const KickScheme back = scheme_from_json(j);
    REQUIRE(back.groups.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.groups[i].z == s.groups[i].z);
        CHECK(back.groups[i].t == s.groups[i].t);
    }

    json wrong_units = j;
    wrong_units["units"] = "seconds";
    CHECK_THROWS_AS(scheme_from_json(wrong_units), invariant_error);

    CHECK_THROWS_AS(scheme_from_json(json{{"units", "trap_periods"}}),
                    json::exception);
    json missing_t = j;
    missing_t["groups"][1].erase("t");
    CHECK_THROWS_AS(scheme_from_json(missing_t), json::exception);
}

TEST_CASE("symmetric json round trip") {
    SymmetricScheme s;
    s.a = 1;
    s.b = 2;
    s.c = 2;
    s.n = 2;
    s.tau1 = 0.34782055;
    s.tau2 = 0.23150833;
    s.tau3 = 0.09939906;
    s.negate = true;
    const json j = symmetric_to_json(s);
    const SymmetricScheme back = symmetric_from_json(j);
    CHECK(back.a == 1);
    CHECK(back.b == 2);
    CHECK(back.c == 2);
    CHECK(back.n == 2);
    CHECK(back.tau1 == s.tau1);
    CHECK(back.tau2 == s.tau2);
    CHECK(back.tau3 == s.tau3);
    CHECK(back.negate);

    // Optional fields default.
    const SymmetricScheme lean = symmetric_from_json(
        json{{"abc", {2, 3, 2}}, {"tau", {2.744, 2.438, 1.815}}});
    CHECK(lean.n == 1);
    CHECK_FALSE(lean.negate);

    CHECK_THROWS_AS(symmetric_from_json(json{{"abc", {1, 2, 2}}}), json::exception);
    CHECK_THROWS_AS(symmetric_from_json(
                        json{{"abc", {1, 2, 2}}, {"tau", {0.1, 0.2, 0.3}}}),
                    invariant_error);  // tau out of order
}

TEST_CASE("trap and laser parse compose over a base") {
    const TrapParams base;
    const TrapParams partial = trap_from_json(json{{"eta", 0.25}}, base);
    CHECK(partial.eta == 0.25);
    CHECK(partial.nu == base.nu);
    CHECK(partial.nbar == base.nbar);

    const TrapParams round = trap_from_json(trap_to_json(partial), base);
    CHECK(round.eta == partial.eta);
    CHECK(round.nu == partial.nu);
    CHECK(round.nbar == partial.nbar);

    CHECK_THROWS_AS(trap_from_json(json{{"eta", -1.0}}, base), invariant_error);

    const LaserParams lbase;
    const LaserParams lpartial = laser_from_json(json{{"rep_rate", 1e8}}, lbase);
    CHECK(lpartial.rep_rate == 1e8);
    CHECK(lpartial.max_area == lbase.max_area);
    CHECK_THROWS_AS(laser_from_json(json{{"rep_rate", 0.0}}, lbase), invariant_error);
}

TEST_CASE("family json round trips every kind") {
    SchemeFamily gzc;
    gzc.kind = FamilyKind::gzc;
    gzc.n = 3;
    json j = family_to_json(gzc);
    CHECK(j.at("kind").get<std::string>() == "gzc");
    CHECK(family_from_json(j).n == 3);

    SchemeFamily sym;
    sym.kind = FamilyKind::symmetric_abc;
    sym.a = 1;
    sym.b = 2;
    sym.c = 2;
    sym.n = 2;
    sym.negate = true;
    j = family_to_json(sym);
    CHECK(j.at("kind").get<std::string>() == "symmetric_abc");
    SchemeFamily back = family_from_json(j);
    CHECK(back.a == 1);
    CHECK(back.b == 2);
    CHECK(back.c == 2);
    CHECK(back.n == 2);
    CHECK(back.negate);

    SchemeFamily split;
    split.kind = FamilyKind::direct_split;
    split.pulse_count = 2;
    split.n_delays = 4;
    split.rep_rate = 1e8;
    j = family_to_json(split);
    back = family_from_json(j);
    CHECK(back.kind == FamilyKind::direct_split);
    CHECK(back.pulse_count == 2);
    CHECK(back.n_delays == 4);
    CHECK(back.rep_rate == 1e8);

    SchemeFamily alt;
    alt.kind = FamilyKind::alternating_split;
    alt.n_delays = 3;
    back = family_from_json(family_to_json(alt));
    CHECK(back.kind == FamilyKind::alternating_split);
    CHECK(back.rep_rate == 0.0);

    SchemeFamily free;
    free.kind = FamilyKind::free_times;
    free.n_free_times = 5;
    back = family_from_json(family_to_json(free));
    CHECK(back.kind == FamilyKind::free_times);
    CHECK(back.n_free_times == 5);

    CHECK_THROWS_AS(family_from_json(json{{"kind", "waffle"}}), invariant_error);
    // Missing params fall back to the kind's defaults.
    CHECK(family_from_json(json{{"kind", "gzc"}}).n == 1);
}

TEST_CASE("network json round trips both variants") {
    SplitterNetwork cascade;
    cascade.stages.push_back({7.102272727272727e-08, 0.5, false});
    cascade.stages.push_back({1.4204545454545455e-07, 0.4, true});
    cascade.overhead_factor = 2.0;
    const json jc = network_to_json(cascade);
    const auto vc = network_from_json(jc);
    REQUIRE(std::holds_alternative<SplitterNetwork>(vc));
    const auto& c = std::get<SplitterNetwork>(vc);
    REQUIRE(c.stages.size() == 2);
    CHECK(c.stages[0].delay_s == cascade.stages[0].delay_s);
    CHECK(c.stages[1].ratio == 0.4);
    CHECK(c.stages[1].flip);
    CHECK(c.overhead_factor == 2.0);

    TappedNetwork chain;
    chain.chain_delays_s = {1e-8, 2e-8};
    chain.exits = {{1, false}, {2, true}, {1, false}};
    chain.overhead_factor = 1.5;
    const json jt = network_to_json(chain);
    const auto vt = network_from_json(jt);
    REQUIRE(std::holds_alternative<TappedNetwork>(vt));
    const auto& t = std::get<TappedNetwork>(vt);
    REQUIRE(t.exits.size() == 3);
    CHECK(t.chain_delays_s == chain.chain_delays_s);
    CHECK(t.exits[1].multiplicity == 2);
    CHECK(t.exits[1].flip);
    CHECK(t.overhead_factor == 1.5);

    CHECK_THROWS_AS(network_from_json(json{{"overhead", 2.0}}), invariant_error);

    json bad_ratio = jc;
    bad_ratio["stages"][0]["ratio"] = 1.5;
    CHECK_THROWS_AS(network_from_json(bad_ratio), invariant_error);

    json short_chain = jt;
    short_chain["chain_delays_s"] = {1e-8};
    CHECK_THROWS_AS(network_from_json(short_chain), invariant_error);
}

TEST_CASE("condition report json carries all seven fields") {
    TrapParams trap;
    const KickScheme s{{{1, 0.0}, {-1, 1.0}}};
    const ConditionReport rep = condition_error(s, trap);
    const json j = report_to_json(rep);

    CHECK(j.at("theta").get<double>() == rep.theta);
    CHECK(j.at("e_motional").get<double>() == rep.e_motional);
    CHECK(j.at("e_phase").get<double>() == rep.e_phase);
    CHECK(j.at("e_total").get<double>() == rep.e_total);
    CHECK(j.at("gate_time").get<double>() == rep.gate_time);
    REQUIRE(j.at("c_c").size() == 2);
    CHECK(j.at("c_c").at(0).get<double>() == rep.c_c.real());
    CHECK(j.at("c_c").at(1).get<double>() == rep.c_c.imag());
    REQUIRE(j.at("c_r").size() == 2);
    CHECK(j.at("c_r").at(0).get<double>() == rep.c_r.real());
    CHECK(j.at("c_r").at(1).get<double>() == rep.c_r.imag());
}

TEST_CASE("manifest hash is stable and excludes wall clock") {
    RunManifest m;
    m.command = "evaluate";
    m.input_files = {"scheme.json"};
    m.seed = 7;
    m.overrides = {{"eta", "0.25"}};
    m.output_directory = "out";
    m.version = "0.1.0";

    // Frozen FNV-1a value: the interchange contract for artifact provenance.
    CHECK(m.hash() == "429e4abda01476c7");
    CHECK(m.hash().size() == 16);

    RunManifest timed = m;
    timed.wall_clock_seconds = 12.5;
    CHECK(timed.hash() == m.hash());

    RunManifest reseeded = m;
    reseeded.seed = 8;
    CHECK(reseeded.hash() != m.hash());

    // Override order is significant.
    RunManifest two = m;
    two.overrides = {{"eta", "0.25"}, {"nbar", "0.2"}};
    CHECK(two.hash() == "a8628a44752a272a");
    RunManifest swapped = m;
    swapped.overrides = {{"nbar", "0.2"}, {"eta", "0.25"}};
    CHECK(swapped.hash() == "f91522a1efadb652");

    const json j = manifest_to_json(timed);
    CHECK(j.at("manifest_hash").get<std::string>() == m.hash());
    CHECK(j.at("command").get<std::string>() == "evaluate");
    CHECK(j.at("tool_version").get<std::string>() == "0.1.0");
    CHECK(j.at("wall_clock_seconds").get<double>() == 12.5);
    CHECK(j.at("overrides").at(0).at("name").get<std::string>() == "eta");
}

TEST_CASE("fidelity row and sweep summary shapes") {
    const json row = fidelity_row("scheme-3", 2e-3, 0.9991, 0.9987, 145.4,
                                  {"non_quadratic"});
    CHECK(row.at("scheme").get<std::string>() == "scheme-3");
    CHECK(row.at("epsilon").get<double>() == 2e-3);
    CHECK(row.at("f_p").get<double>() == 0.9991);
    CHECK(row.at("f_w").get<double>() == 0.9987);
    CHECK(row.at("c").get<double>() == 145.4);
    CHECK(row.at("flags").at(0).get<std::string>() == "non_quadratic");

    SweepResult sweep;
    sweep.kind = "angle";
    sweep.model = "transverse_accumulation";
    sweep.threshold_budget = 1e-4;
    sweep.threshold = 0.0111;
    sweep.threshold_found = true;
    sweep.first_non_monotone = -1;
    const json summary = sweep_summary_json(sweep, "deadbeefdeadbeef");
    CHECK(summary.at("kind").get<std::string>() == "angle");
    CHECK(summary.at("model").get<std::string>() == "transverse_accumulation");
    CHECK(summary.at("budget").get<double>() == 1e-4);
    CHECK(summary.at("threshold").get<double>() == 0.0111);
    CHECK(summary.at("threshold_found").get<bool>());
    CHECK(summary.at("first_non_monotone").get<int>() == -1);
    CHECK(summary.at("manifest_hash").get<std::string>() == "deadbeefdeadbeef");
}

TEST_CASE("csv emitters carry provenance and full precision") {
    const std::string hash = "0123456789abcdef";

    std::ostringstream land;
    write_landscape_csv(land, {{2.5, 1.75, -3.0629874123456789}, {2.6, 1.75, 1.25}},
                        hash);
    auto lines = split_lines(land.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# manifest_hash: 0123456789abcdef");
    CHECK(lines[1] == "var1,var2,logJ");
    // 17 significant digits survive a parse round trip.
    const auto comma = lines[2].rfind(',');
    CHECK(std::stod(lines[2].substr(comma + 1)) == -3.0629874123456789);

    SweepResult sweep;
    sweep.rows = {{0.0, 1e-6, true, 0.0}, {1e-3, 2e-4, false, 0.0}};
    std::ostringstream sw;
    write_sweep_csv(sw, sweep, hash);
    lines = split_lines(sw.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "parameter,error,pass");
    CHECK(lines[2].substr(lines[2].size() - 2) == ",1");
    CHECK(lines[3].substr(lines[3].size() - 2) == ",0");

    IncidentPulseTrain train;
    train.entries.push_back({0.0, 1, pi, 0});
    train.entries.push_back({7.1e-8, -1, pi, 1});
    std::ostringstream tr;
    write_train_csv(tr, train, hash);
    lines = split_lines(tr.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[1] == "time_s,direction,area_over_pi,source_pulse");
    CHECK(lines[2].find(",1,1,0") != std::string::npos);

    ScalingStudy study;
    study.rows.resize(1);
    study.rows[0].n = 2;
    study.rows[0].n_pairs = 20;
    study.rows[0].gate_time = 0.695;
    study.rows[0].e_total = 1.2e-8;
    study.rows[0].j = 0.695;
    study.rows[0].seed = 11;
    std::ostringstream sc;
    write_scaling_csv(sc, study, hash);
    lines = split_lines(sc.str());
    REQUIRE(lines.size() == 3);
    CHECK(lines[1] == "n,N_pairs,T_G,E,J,seed");

    TrapParams trap;
    const KickScheme s{{{1, 0.0}}};
    const Trajectory traj = trajectory(s, trap, MotionalMode::centre_of_mass);
    std::ostringstream tj;
    write_trajectory_csv(tj, {traj}, hash);
    lines = split_lines(tj.str());
    REQUIRE(lines.size() == 2 + traj.points.size());
    CHECK(lines[1] == "index,time,X,P,branch,frame");
    CHECK(lines[2].find("|00>") != std::string::npos);
    CHECK(lines[2].find("rotating") != std::string::npos);
}

TEST_CASE("whole-file helpers") {
    CHECK_THROWS_AS(load_json_file("/nonexistent/missing.json"), json::exception);

    const std::string path = "serialize_test_roundtrip.json";
    save_text_file(path, "{\"alpha\": 3}");
    const json j = load_json_file(path);
    CHECK(j.at("alpha").get<int>() == 3);
    std::remove(path.c_str());

    CHECK_THROWS_AS(save_text_file("/nonexistent-dir/x.json", "{}"),
                    std::runtime_error);
}

}  // TEST_SUITE("serialize")
