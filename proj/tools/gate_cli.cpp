// Single-binary command-line front end.  Every subcommand is file-driven and
// seeded, emits its artifacts into --out together with a run manifest, and
// embeds the manifest hash in each artifact so provenance travels with the
// data.  Exit codes: 0 ok, 1 parse error, 2 invariant violation, 3 infeasible
// request, 4 internal error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "splitgate/conditions.hpp"
#include "splitgate/manifest.hpp"
#include "splitgate/optics.hpp"
#include "splitgate/optimizer.hpp"
#include "splitgate/oracle.hpp"
#include "splitgate/phase_space.hpp"
#include "splitgate/robustness.hpp"
#include "splitgate/schemes.hpp"
#include "splitgate/serialize.hpp"
#include "splitgate/trap.hpp"

namespace sg = splitgate;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Options shared by every subcommand: parameter files, physics overrides,
// output directory, seed, and tabular format.

struct CommonOpts {
    std::string params_file;
    std::string laser_file;
    std::string out_dir = ".";
    std::string format = "json";
    std::uint64_t seed = 1;

    double eta = 0.0, nu = 0.0, nbar = 0.0;
    double rep_rate = 0.0, max_area = 0.0;
    CLI::Option* o_eta = nullptr;
    CLI::Option* o_nu = nullptr;
    CLI::Option* o_nbar = nullptr;
    CLI::Option* o_rep_rate = nullptr;
    CLI::Option* o_max_area = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--params", c.params_file, "trap parameter JSON file (base values)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--laser", c.laser_file, "laser parameter JSON file (base values)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out_dir, "output directory for artifacts")
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "seed for every randomized stage")
        ->capture_default_str();
    cmd->add_option("--format", c.format, "tabular artifact format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    c.o_eta = cmd->add_option("--eta", c.eta, "override: Lamb-Dicke parameter");
    c.o_nu = cmd->add_option("--nu", c.nu, "override: COM angular trap frequency (rad/s)");
    c.o_nbar = cmd->add_option("--nbar", c.nbar, "override: thermal occupation per mode");
    c.o_rep_rate =
        cmd->add_option("--rep-rate", c.rep_rate, "override: laser repetition rate (Hz)");
    c.o_max_area =
        cmd->add_option("--max-area", c.max_area, "override: emitted pulse area (rad)");
}

sg::TrapParams make_trap(const CommonOpts& c) {
    sg::TrapParams trap;
    if (!c.params_file.empty())
        trap = sg::trap_from_json(sg::load_json_file(c.params_file), trap);
    if (c.o_eta->count() > 0) trap.eta = c.eta;
    if (c.o_nu->count() > 0) trap.nu = c.nu;
    if (c.o_nbar->count() > 0) trap.nbar = c.nbar;
    trap.validate();
    return trap;
}

sg::LaserParams make_laser(const CommonOpts& c) {
    sg::LaserParams laser;
    if (!c.laser_file.empty())
        laser = sg::laser_from_json(sg::load_json_file(c.laser_file), laser);
    if (c.o_rep_rate->count() > 0) laser.rep_rate = c.rep_rate;
    if (c.o_max_area->count() > 0) laser.max_area = c.max_area;
    laser.validate();
    return laser;
}

// A scheme file is either the raw group list or a symmetric descriptor.
sg::KickScheme load_scheme_file(const std::string& path) {
    const json j = sg::load_json_file(path);
    if (j.contains("abc")) {
        sg::SymmetricScheme s = sg::symmetric_from_json(j);
        s.validate();
        return sg::expand_symmetric(s);
    }
    sg::KickScheme scheme = sg::scheme_from_json(j);
    scheme.validate();
    return scheme;
}

// ---------------------------------------------------------------------------
// Run bookkeeping: manifest assembly, output directory, artifact writers.

struct RunContext {
    sg::RunManifest manifest;
    fs::path out;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    RunContext(std::string command, const CommonOpts& c, const CLI::App* cmd,
               std::vector<std::string> inputs) {
        manifest.command = std::move(command);
        manifest.seed = c.seed;
        manifest.output_directory = c.out_dir;
        for (std::string& in : inputs)
            if (!in.empty()) manifest.input_files.push_back(std::move(in));
        for (const CLI::Option* opt : cmd->get_options()) {
            if (opt->count() == 0) continue;
            const std::string name = opt->get_name();
            if (name.rfind("--", 0) != 0) continue;  // positionals are input_files
            std::string joined;
            for (const std::string& r : opt->results()) {
                if (!joined.empty()) joined += ",";
                joined += r;
            }
            manifest.overrides.emplace_back(name, joined);
        }
        out = fs::path(c.out_dir);
        if (!out.empty()) fs::create_directories(out);
    }

    std::string hash() const { return manifest.hash(); }

    void write_json(const std::string& name, const json& j) const {
        std::ofstream f(out / name);
        if (!f) throw std::runtime_error("cannot write " + (out / name).string());
        f << j.dump(2) << "\n";
    }

    template <class Writer>
    void write_csv(const std::string& name, const Writer& writer) const {
        std::ofstream f(out / name);
        if (!f) throw std::runtime_error("cannot write " + (out / name).string());
        writer(f);
    }

    // Wall clock is informational and excluded from the hash; everything else
    // in the artifacts is a deterministic function of the hashed fields.
    void finish() {
        manifest.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        write_json("manifest.json", sg::manifest_to_json(manifest));
    }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// Family selection: a name with inline shape flags, or a descriptor file.

struct FamilyOpts {
    std::string family;
    std::vector<int> abc;
    int n = 1;
    bool negate = false;
    int pulses = 1;
    int delays = 3;
    int free_times = 3;
    CLI::Option* o_abc = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_negate = nullptr;
    CLI::Option* o_pulses = nullptr;
    CLI::Option* o_delays = nullptr;
    CLI::Option* o_free_times = nullptr;
};

void add_family(CLI::App* cmd, FamilyOpts& f, bool scaling_list = false) {
    cmd->add_option("--family", f.family,
                    "family name (gzc|symmetric|direct|alternating|free) or descriptor file")
        ->required();
    f.o_abc = cmd->add_option("--abc", f.abc, "symmetric kick multiplicities a,b,c")
                  ->delimiter(',')
                  ->expected(3);
    if (!scaling_list)
        f.o_n = cmd->add_option("--n", f.n, "family multiplicity n");
    f.o_negate = cmd->add_flag("--negate", f.negate, "negate all kicks of the sequence");
    f.o_pulses = cmd->add_option("--pulses", f.pulses, "laser pulse count (split families)");
    f.o_delays = cmd->add_option("--delays", f.delays, "delay loop count (split families)");
    f.o_free_times =
        cmd->add_option("--free-times", f.free_times, "free kick times (free family)");
}

sg::SchemeFamily make_family(const FamilyOpts& fo) {
    sg::SchemeFamily fam;
    if (fs::is_regular_file(fo.family)) {
        fam = sg::family_from_json(sg::load_json_file(fo.family));
    } else if (fo.family == "gzc") {
        fam.kind = sg::FamilyKind::gzc;
    } else if (fo.family == "symmetric" || fo.family == "symmetric_abc") {
        fam.kind = sg::FamilyKind::symmetric_abc;
    } else if (fo.family == "direct" || fo.family == "direct_split") {
        fam.kind = sg::FamilyKind::direct_split;
    } else if (fo.family == "alternating" || fo.family == "alternating_split") {
        fam.kind = sg::FamilyKind::alternating_split;
    } else if (fo.family == "free" || fo.family == "free_times") {
        fam.kind = sg::FamilyKind::free_times;
    } else {
        throw sg::invariant_error("unknown family '" + fo.family +
                                  "' (expected gzc, symmetric, direct, alternating, "
                                  "free, or a descriptor file)");
    }
    if (fo.o_abc->count() > 0) {
        fam.a = fo.abc[0];
        fam.b = fo.abc[1];
        fam.c = fo.abc[2];
    }
    if (fo.o_n != nullptr && fo.o_n->count() > 0) fam.n = fo.n;
    if (fo.o_negate->count() > 0) fam.negate = fo.negate;
    if (fo.o_pulses->count() > 0) fam.pulse_count = fo.pulses;
    if (fo.o_delays->count() > 0) fam.n_delays = fo.delays;
    if (fo.o_free_times->count() > 0) fam.n_free_times = fo.free_times;
    fam.validate();
    return fam;
}

std::string family_input_file(const FamilyOpts& fo) {
    return fs::is_regular_file(fo.family) ? fo.family : std::string{};
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
    CommonOpts common;
    std::string scheme_file;
};

void run_evaluate(const EvaluateOpts& o, const CLI::App* cmd) {
    RunContext ctx("evaluate", o.common, cmd,
                   {o.scheme_file, o.common.params_file, o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::KickScheme scheme = load_scheme_file(o.scheme_file);
    const sg::ConditionReport report = sg::condition_error(scheme, trap);

    json out = sg::report_to_json(report);
    out["j"] = sg::cost_from_report(report);
    out["n_pairs"] = scheme.n_pairs();
    out["manifest_hash"] = ctx.hash();
    emit(out);
    ctx.write_json("report.json", out);
    ctx.finish();
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeOpts {
    CommonOpts common;
    FamilyOpts family;
    long budget = 20000;
    int starts = 16;
    int population = 0;
};

void add_budget(CLI::App* cmd, OptimizeOpts& o) {
    cmd->add_option("--budget", o.budget, "objective evaluations per start")
        ->capture_default_str();
    cmd->add_option("--starts", o.starts, "independent search starts")
        ->capture_default_str();
    cmd->add_option("--population", o.population, "population size (0: 10·(d+1))")
        ->capture_default_str();
}

sg::OptimizerConfig make_config(const OptimizeOpts& o) {
    sg::OptimizerConfig config;
    config.max_evaluations = o.budget;
    config.multi_start = o.starts;
    config.population_size = o.population;
    config.seed = o.common.seed;
    config.validate();
    return config;
}

json solution_json(const sg::SchemeFamily& family, const sg::OptimizeResult& result,
                   const sg::OptimizerConfig& config, std::uint64_t seed,
                   const std::string& hash) {
    json bounds = json::array();
    const std::size_t arity = result.best_delays.size();
    for (std::size_t i = 0; i < arity; ++i) {
        const auto [lo, hi] = config.bounds.empty() ? std::make_pair(1e-3, 5.0)
                                                    : config.bounds[i];
        bounds.push_back({lo, hi});
    }
    json sol;
    sol["family"] = sg::family_to_json(family);
    sol["bounds"] = bounds;
    sol["seed"] = seed;
    sol["evaluations"] = result.evaluations;
    sol["best_point"] = result.best_delays;
    sol["scheme"] = sg::scheme_to_json(result.scheme);
    sol["report"] = sg::report_to_json(result.report);
    sol["gate_time"] = result.report.gate_time;
    sol["e_total"] = result.report.e_total;
    sol["j"] = result.j;
    sol["feasible"] = result.feasible;
    sol["manifest_hash"] = hash;
    return sol;
}

void run_optimize(const OptimizeOpts& o, const CLI::App* cmd) {
    RunContext ctx("optimize", o.common, cmd,
                   {family_input_file(o.family), o.common.params_file,
                    o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::LaserParams laser = make_laser(o.common);
    const sg::SchemeFamily family = make_family(o.family);
    const sg::OptimizerConfig config = make_config(o);

    sg::OptimizeResult result;
    try {
        result = sg::optimize(family, trap, laser, config);
    } catch (const sg::infeasible_error& e) {
        json failure = {{"family", sg::family_to_json(family)},
                        {"feasible", false},
                        {"error", e.what()},
                        {"manifest_hash", ctx.hash()}};
        ctx.write_json("solution.json", failure);
        ctx.finish();
        throw;
    }

    const json sol = solution_json(family, result, config, o.common.seed, ctx.hash());
    ctx.write_json("solution.json", sol);
    json scheme_file = sg::scheme_to_json(result.scheme);
    scheme_file["manifest_hash"] = ctx.hash();
    ctx.write_json("scheme.json", scheme_file);

    emit({{"family", family.name()},
          {"gate_time", result.report.gate_time},
          {"e_total", result.report.e_total},
          {"j", result.j},
          {"feasible", result.feasible},
          {"best_point", result.best_delays},
          {"evaluations", result.evaluations},
          {"manifest_hash", ctx.hash()}});
    ctx.finish();
}

// ---------------------------------------------------------------------------
// scaling

struct ScalingOpts {
    CommonOpts common;
    FamilyOpts family;
    OptimizeOpts budget_holder;  // reuses --budget/--starts/--population
    std::vector<int> n_values;
};

void run_scaling(const ScalingOpts& o, const CLI::App* cmd) {
    RunContext ctx("scaling", o.common, cmd,
                   {family_input_file(o.family), o.common.params_file,
                    o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::LaserParams laser = make_laser(o.common);
    const sg::SchemeFamily family = make_family(o.family);
    const sg::OptimizerConfig config = make_config(o.budget_holder);

    const sg::ScalingStudy study = sg::scaling_study(family, o.n_values, trap, laser, config);

    ctx.write_csv("scaling.csv", [&](std::ostream& os) {
        sg::write_scaling_csv(os, study, ctx.hash());
    });
    json rows = json::array();
    for (const sg::ScalingRow& row : study.rows)
        rows.push_back({{"n", row.n},
                        {"n_pairs", row.n_pairs},
                        {"gate_time", row.gate_time},
                        {"e_total", row.e_total},
                        {"j", row.j},
                        {"seed", row.seed},
                        {"feasible", row.feasible},
                        {"best_point", row.best_delays}});
    const json summary = {{"family", family.name()},
                          {"fit",
                           {{"exponent", study.fit.exponent},
                            {"prefactor", study.fit.prefactor},
                            {"residual", study.fit.residual}}},
                          {"rows", rows},
                          {"manifest_hash", ctx.hash()}};
    ctx.write_json("summary.json", summary);
    emit({{"family", family.name()},
          {"exponent", study.fit.exponent},
          {"prefactor", study.fit.prefactor},
          {"residual", study.fit.residual},
          {"manifest_hash", ctx.hash()}});
    ctx.finish();
}

// ---------------------------------------------------------------------------
// trajectory

struct TrajectoryOpts {
    CommonOpts common;
    std::string scheme_file;
    FamilyOpts family;
    std::vector<double> delays;
    std::string mode = "both";
    std::string frame = "rotating";
};

void run_trajectory(const TrajectoryOpts& o, const CLI::App* cmd) {
    RunContext ctx("trajectory", o.common, cmd,
                   {o.scheme_file, family_input_file(o.family), o.common.params_file,
                    o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::LaserParams laser = make_laser(o.common);

    sg::KickScheme scheme;
    if (!o.scheme_file.empty()) {
        scheme = load_scheme_file(o.scheme_file);
    } else if (!o.family.family.empty()) {
        scheme = sg::generate(make_family(o.family), o.delays, trap, laser);
    } else {
        throw CLI::ValidationError("trajectory",
                                   "provide a scheme file or --family with --tau");
    }

    std::vector<sg::MotionalMode> modes;
    if (o.mode == "com" || o.mode == "both") modes.push_back(sg::MotionalMode::centre_of_mass);
    if (o.mode == "stretch" || o.mode == "both") modes.push_back(sg::MotionalMode::stretch);
    std::vector<bool> frames;
    if (o.frame == "rotating" || o.frame == "both") frames.push_back(false);
    if (o.frame == "lab" || o.frame == "both") frames.push_back(true);

    std::vector<sg::Trajectory> trajectories;
    for (const sg::MotionalMode mode : modes)
        for (const bool lab : frames)
            trajectories.push_back(sg::trajectory(scheme, trap, mode, {0.0, 0.0}, lab));

    ctx.write_csv("trajectory.csv", [&](std::ostream& os) {
        sg::write_trajectory_csv(os, trajectories, ctx.hash());
    });

    json branches = json::array();
    for (const sg::Trajectory& t : trajectories)
        branches.push_back(
            {{"branch", t.branch_label()},
             {"frame", t.frame_label()},
             {"net_displacement", {t.net_displacement.real(), t.net_displacement.imag()}},
             {"accumulated_phase", t.accumulated_phase},
             {"points", t.points.size()}});
    emit({{"branches", branches},
          {"phase_difference", sg::geometric_phase_difference(scheme, trap)},
          {"theta", sg::phase_theta(scheme, trap)},
          {"peak_excursion", sg::peak_excursion(scheme, trap)},
          {"manifest_hash", ctx.hash()}});
    ctx.finish();
}

// ---------------------------------------------------------------------------
// landscape

struct LandscapeOpts {
    CommonOpts common;
    FamilyOpts family;
    std::vector<double> base;
    int var1 = 0;
    double lo1 = 0.1, hi1 = 1.0;
    int steps1 = 50;
    int var2 = -1;
    double lo2 = 0.1, hi2 = 1.0;
    int steps2 = 1;
};

void run_landscape(const LandscapeOpts& o, const CLI::App* cmd) {
    RunContext ctx("landscape", o.common, cmd,
                   {family_input_file(o.family), o.common.params_file,
                    o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::LaserParams laser = make_laser(o.common);

    sg::LandscapeSpec spec;
    spec.family = make_family(o.family);
    spec.base = o.base;
    spec.var1 = o.var1;
    spec.lo1 = o.lo1;
    spec.hi1 = o.hi1;
    spec.steps1 = o.steps1;
    spec.var2 = o.var2;
    spec.lo2 = o.lo2;
    spec.hi2 = o.hi2;
    spec.steps2 = o.steps2;

    const std::vector<sg::LandscapePoint> points = sg::landscape_scan(spec, trap, laser);
    ctx.write_csv("landscape.csv", [&](std::ostream& os) {
        sg::write_landscape_csv(os, points, ctx.hash());
    });
    emit({{"family", spec.family.name()},
          {"points", points.size()},
          {"manifest_hash", ctx.hash()}});
    ctx.finish();
}

// ---------------------------------------------------------------------------
// oracle

struct OracleOpts {
    CommonOpts common;
    std::string scheme_file;
    int n_max = 40;
    double epsilon = 0.0;
    int grid = 5;
    double alpha_max = 2.0;
    bool worst_case = false;
    bool perturbation = false;
};

void run_oracle(const OracleOpts& o, const CLI::App* cmd) {
    RunContext ctx("oracle", o.common, cmd,
                   {o.scheme_file, o.common.params_file, o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::KickScheme scheme = load_scheme_file(o.scheme_file);

    sg::OracleConfig config;
    config.n_max = o.n_max;
    config.nbar = trap.nbar;
    config.epsilon = o.epsilon;
    config.search_grid = o.grid;
    config.alpha_max = o.alpha_max;
    config.validate();

    const sg::GateUnitary gate = sg::evolve_scheme(scheme, config, trap);
    const sg::ProcessFidelity process = sg::process_fidelity_detail(gate, config);

    double f_w = quiet_nan;
    std::array<double, 4> alpha{0.0, 0.0, 0.0, 0.0};
    if (o.worst_case) {
        const sg::WorstCase worst = sg::worst_case_fidelity_detail(gate, config);
        f_w = worst.fidelity;
        alpha = worst.alpha;
    }

    sg::PerturbationFit fit;
    fit.c = quiet_nan;
    std::vector<std::string> flags;
    if (gate.truncation_warning()) flags.push_back("truncation_warning");
    if (o.perturbation) {
        fit = sg::perturbation_coefficient(scheme, config, trap);
        if (fit.non_quadratic) flags.push_back("non_quadratic");
        if (fit.linear_term) flags.push_back("linear_term");
    }

    json row = sg::fidelity_row(o.scheme_file, o.epsilon, process.fidelity, f_w,
                                fit.c, flags);
    row["leakage"] = process.leakage;
    row["excursion"] = gate.excursion();
    if (o.worst_case) row["worst_alpha"] = alpha;
    if (o.perturbation) {
        json samples = json::array();
        for (const auto& [eps, fw] : fit.samples) samples.push_back({eps, fw});
        row["perturbation"] = {{"c", fit.c},
                               {"b", fit.b},
                               {"residual", fit.residual},
                               {"samples", samples}};
    }
    row["manifest_hash"] = ctx.hash();
    emit(row);
    ctx.write_json("fidelity.json", row);
    ctx.finish();
}

// ---------------------------------------------------------------------------
// robustness

struct RobustnessOpts {
    CommonOpts common;
    std::string sweep;
    std::string scheme_file;
    std::string network_file;
    int pulses = 1;
    double low = 0.0, high = 0.0;
    int steps = 41;
    double budget = 1e-4;
    std::string model = "transverse_accumulation";
    int n_max = 24;
    CLI::Option* o_low = nullptr;
    CLI::Option* o_high = nullptr;
};

void run_robustness(const RobustnessOpts& o, const CLI::App* cmd) {
    RunContext ctx("robustness", o.common, cmd,
                   {o.scheme_file, o.network_file, o.common.params_file,
                    o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::LaserParams laser = make_laser(o.common);

    double low = o.low, high = o.high;
    sg::SweepResult sweep;
    if (o.sweep == "timing") {
        if (o.network_file.empty())
            throw CLI::ValidationError("robustness", "timing sweeps need --network");
        if (o.o_low->count() == 0) low = -50e-12;
        if (o.o_high->count() == 0) high = 50e-12;
        const auto network = sg::network_from_json(sg::load_json_file(o.network_file));
        sweep = std::visit(
            [&](const auto& net) {
                return sg::timing_sweep(net, laser, o.pulses, low, high, o.steps, trap,
                                        o.budget);
            },
            network);
    } else if (o.sweep == "area") {
        if (o.scheme_file.empty())
            throw CLI::ValidationError("robustness", "area sweeps need a scheme file");
        if (o.o_low->count() == 0) low = -2e-2;
        if (o.o_high->count() == 0) high = 2e-2;
        const sg::KickScheme scheme = load_scheme_file(o.scheme_file);
        sg::OracleConfig config;
        config.n_max = o.n_max;
        config.nbar = trap.nbar;
        config.validate();
        sweep = sg::area_sweep(scheme, low, high, o.steps, config, trap, o.budget);
    } else if (o.sweep == "angle") {
        if (o.scheme_file.empty())
            throw CLI::ValidationError("robustness", "angle sweeps need a scheme file");
        if (o.o_low->count() == 0) low = 0.0;
        if (o.o_high->count() == 0) high = 2e-2;
        const sg::KickScheme scheme = load_scheme_file(o.scheme_file);
        sweep = sg::angle_sweep(scheme, low, high, o.steps, trap,
                                sg::parse_angle_model(o.model), o.budget);
    } else {
        throw CLI::ValidationError("robustness",
                                   "--sweep must be timing, area, or angle");
    }

    ctx.write_csv("sweep.csv", [&](std::ostream& os) {
        sg::write_sweep_csv(os, sweep, ctx.hash());
    });
    const json summary = sg::sweep_summary_json(sweep, ctx.hash());
    ctx.write_json("summary.json", summary);
    emit(summary);
    ctx.finish();
}

// ---------------------------------------------------------------------------
// optics compile / check / budget

struct OpticsOpts {
    CommonOpts common;
    std::string network_file;
    std::string scheme_file;
    int pulses = 1;
    double shift = 0.0;
    long pairs = 0;
    double area = 0.0;
    double overhead = 2.0;
    CLI::Option* o_pairs = nullptr;
    CLI::Option* o_area = nullptr;
};

sg::IncidentPulseTrain compile_network_file(const OpticsOpts& o,
                                            const sg::LaserParams& laser) {
    const auto network = sg::network_from_json(sg::load_json_file(o.network_file));
    return std::visit(
        [&](const auto& net) { return sg::compile(net, laser, o.pulses, o.shift); },
        network);
}

void run_optics_compile(const OpticsOpts& o, const CLI::App* cmd) {
    RunContext ctx("optics compile", o.common, cmd,
                   {o.network_file, o.common.params_file, o.common.laser_file});
    const sg::LaserParams laser = make_laser(o.common);
    const sg::IncidentPulseTrain train = compile_network_file(o, laser);

    ctx.write_csv("train.csv", [&](std::ostream& os) {
        sg::write_train_csv(os, train, ctx.hash());
    });
    emit({{"entries", train.entries.size()},
          {"total_energy", train.total_energy()},
          {"duration_s", train.entries.empty()
                             ? 0.0
                             : train.entries.back().time_s - train.entries.front().time_s},
          {"manifest_hash", ctx.hash()}});
    ctx.finish();
}

void run_optics_check(const OpticsOpts& o, const CLI::App* cmd) {
    RunContext ctx("optics check", o.common, cmd,
                   {o.network_file, o.scheme_file, o.common.params_file,
                    o.common.laser_file});
    const sg::TrapParams trap = make_trap(o.common);
    const sg::LaserParams laser = make_laser(o.common);
    const sg::KickScheme scheme = load_scheme_file(o.scheme_file);
    const sg::IncidentPulseTrain train = compile_network_file(o, laser);
    const sg::RealizabilityReport report = sg::check_realizability(scheme, train, trap);

    const json out = {{"ok", report.ok},
                      {"matched_groups", report.matched_groups},
                      {"unmatched_groups", report.unmatched_groups},
                      {"unmatched_entries", report.unmatched_entries},
                      {"failures", report.failures},
                      {"manifest_hash", ctx.hash()}};
    emit(out);
    ctx.write_json("realizability.json", out);
    ctx.finish();
}

void run_optics_budget(const OpticsOpts& o, const CLI::App* cmd) {
    RunContext ctx("optics budget", o.common, cmd,
                   {o.scheme_file, o.common.params_file, o.common.laser_file});
    json out;
    out["overhead"] = o.overhead;
    if (!o.scheme_file.empty()) {
        const sg::KickScheme scheme = load_scheme_file(o.scheme_file);
        out["n_pairs"] = scheme.n_pairs();
        out["required_area"] = sg::required_area(scheme, o.overhead);
    } else if (o.o_pairs->count() > 0) {
        if (o.pairs < 1) throw sg::invariant_error("--pairs must be positive");
        sg::KickScheme synthetic;
        for (long k = 0; k < o.pairs; ++k)
            synthetic.groups.push_back({1, 0.01 * static_cast<double>(k)});
        out["n_pairs"] = synthetic.n_pairs();
        out["required_area"] = sg::required_area(synthetic, o.overhead);
    }
    if (o.o_area->count() > 0)
        out["max_pairs"] = sg::max_pairs_for_area(o.area, o.overhead);
    if (!out.contains("required_area") && !out.contains("max_pairs"))
        throw CLI::ValidationError("optics budget",
                                   "provide a scheme file, --pairs, or --area");
    out["manifest_hash"] = ctx.hash();
    emit(out);
    ctx.write_json("budget.json", out);
    ctx.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"split-pulse geometric gate toolkit: evaluate, optimize, and "
                 "stress-test pulsed two-ion gate schemes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sg::tool_version));

    auto ev = std::make_shared<EvaluateOpts>();
    CLI::App* evaluate = app.add_subcommand("evaluate",
                                            "closed-form conditions of a scheme file");
    evaluate->add_option("scheme", ev->scheme_file, "scheme or symmetric descriptor JSON")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(evaluate, ev->common);
    evaluate->callback([ev, evaluate] { run_evaluate(*ev, evaluate); });

    auto op = std::make_shared<OptimizeOpts>();
    CLI::App* optimize = app.add_subcommand("optimize", "search a family's free delays");
    add_family(optimize, op->family);
    add_common(optimize, op->common);
    add_budget(optimize, *op);
    optimize->callback([op, optimize] { run_optimize(*op, optimize); });

    auto sc = std::make_shared<ScalingOpts>();
    CLI::App* scaling = app.add_subcommand("scaling",
                                           "gate time versus pair count for a family");
    add_family(scaling, sc->family, /*scaling_list=*/true);
    scaling->add_option("--n", sc->n_values, "multiplicities to optimize, e.g. 2,4,8")
        ->delimiter(',')
        ->required();
    add_common(scaling, sc->common);
    add_budget(scaling, sc->budget_holder);
    scaling->callback([sc, scaling] {
        sc->budget_holder.common = sc->common;
        run_scaling(*sc, scaling);
    });

    auto tr = std::make_shared<TrajectoryOpts>();
    CLI::App* trajectory = app.add_subcommand("trajectory",
                                              "phase-space polyline of both modes");
    trajectory->add_option("scheme", tr->scheme_file, "scheme JSON (or use --family)")
        ->check(CLI::ExistingFile);
    add_family(trajectory, tr->family);
    trajectory->get_option("--family")->required(false);
    trajectory->add_option("--tau", tr->delays, "free delays for --family")
        ->delimiter(',');
    trajectory->add_option("--mode", tr->mode, "com|stretch|both")
        ->check(CLI::IsMember({"com", "stretch", "both"}))
        ->capture_default_str();
    trajectory->add_option("--frame", tr->frame, "rotating|lab|both")
        ->check(CLI::IsMember({"rotating", "lab", "both"}))
        ->capture_default_str();
    add_common(trajectory, tr->common);
    trajectory->callback([tr, trajectory] { run_trajectory(*tr, trajectory); });

    auto la = std::make_shared<LandscapeOpts>();
    CLI::App* landscape = app.add_subcommand("landscape",
                                             "cost surface over one or two delays");
    add_family(landscape, la->family);
    landscape->add_option("--base", la->base, "full free-delay vector")
        ->delimiter(',')
        ->required();
    landscape->add_option("--var1", la->var1, "first scanned variable index")
        ->capture_default_str();
    landscape->add_option("--lo1", la->lo1)->capture_default_str();
    landscape->add_option("--hi1", la->hi1)->capture_default_str();
    landscape->add_option("--steps1", la->steps1)->capture_default_str();
    landscape->add_option("--var2", la->var2, "second variable index (-1: 1-D scan)")
        ->capture_default_str();
    landscape->add_option("--lo2", la->lo2)->capture_default_str();
    landscape->add_option("--hi2", la->hi2)->capture_default_str();
    landscape->add_option("--steps2", la->steps2)->capture_default_str();
    add_common(landscape, la->common);
    landscape->callback([la, landscape] { run_landscape(*la, landscape); });

    auto orc = std::make_shared<OracleOpts>();
    CLI::App* oracle = app.add_subcommand("oracle",
                                          "truncated-Fock simulation of a scheme");
    oracle->add_option("scheme", orc->scheme_file, "scheme JSON")
        ->required()
        ->check(CLI::ExistingFile);
    oracle->add_option("--nmax", orc->n_max, "Fock truncation per mode")
        ->capture_default_str();
    oracle->add_option("--epsilon", orc->epsilon, "pulse-area error")
        ->capture_default_str();
    oracle->add_option("--grid", orc->grid, "worst-case grid density")
        ->capture_default_str();
    oracle->add_option("--alpha-max", orc->alpha_max, "worst-case search radius")
        ->capture_default_str();
    oracle->add_flag("--worst-case", orc->worst_case, "also minimize over product states");
    oracle->add_flag("--perturbation", orc->perturbation,
                     "also fit the pulse-area error law");
    add_common(oracle, orc->common);
    oracle->callback([orc, oracle] { run_oracle(*orc, oracle); });

    auto rb = std::make_shared<RobustnessOpts>();
    CLI::App* robustness = app.add_subcommand("robustness",
                                              "systematic-error sweeps against a budget");
    robustness->add_option("scheme", rb->scheme_file, "scheme JSON (area/angle sweeps)")
        ->check(CLI::ExistingFile);
    robustness->add_option("--sweep", rb->sweep, "timing|area|angle")
        ->required()
        ->check(CLI::IsMember({"timing", "area", "angle"}));
    robustness->add_option("--network", rb->network_file, "network JSON (timing sweeps)")
        ->check(CLI::ExistingFile);
    robustness->add_option("--pulses", rb->pulses, "laser pulses through the network")
        ->capture_default_str();
    rb->o_low = robustness->add_option("--low", rb->low, "sweep start (s or rad)");
    rb->o_high = robustness->add_option("--high", rb->high, "sweep end (s or rad)");
    robustness->add_option("--steps", rb->steps)->capture_default_str();
    robustness->add_option("--budget", rb->budget, "error budget")->capture_default_str();
    robustness->add_option("--model", rb->model, "angle model")
        ->check(CLI::IsMember({"transverse_accumulation", "axial_projection"}))
        ->capture_default_str();
    robustness->add_option("--nmax", rb->n_max, "Fock truncation (area sweeps)")
        ->capture_default_str();
    add_common(robustness, rb->common);
    robustness->callback([rb, robustness] { run_robustness(*rb, robustness); });

    auto oc = std::make_shared<OpticsOpts>();
    CLI::App* optics = app.add_subcommand("optics",
                                          "delay-network compilation and budgets");
    optics->require_subcommand(1);
    CLI::App* compile = optics->add_subcommand("compile",
                                               "network to incident pulse train");
    compile->add_option("--network", oc->network_file, "network JSON")
        ->required()
        ->check(CLI::ExistingFile);
    compile->add_option("--pulses", oc->pulses, "laser pulse count")->capture_default_str();
    compile->add_option("--shift", oc->shift, "common delay shift (s)")
        ->capture_default_str();
    add_common(compile, oc->common);
    compile->callback([oc, compile] { run_optics_compile(*oc, compile); });

    CLI::App* check = optics->add_subcommand("check",
                                             "match a compiled train against a scheme");
    check->add_option("scheme", oc->scheme_file, "scheme JSON")
        ->required()
        ->check(CLI::ExistingFile);
    check->add_option("--network", oc->network_file, "network JSON")
        ->required()
        ->check(CLI::ExistingFile);
    check->add_option("--pulses", oc->pulses, "laser pulse count")->capture_default_str();
    check->add_option("--shift", oc->shift, "common delay shift (s)")
        ->capture_default_str();
    add_common(check, oc->common);
    check->callback([oc, check] { run_optics_check(*oc, check); });

    CLI::App* budget = optics->add_subcommand("budget", "pulse-area energy accounting");
    budget->add_option("scheme", oc->scheme_file, "scheme JSON (for required area)")
        ->check(CLI::ExistingFile);
    oc->o_pairs = budget->add_option("--pairs", oc->pairs, "pair count (for required area)");
    oc->o_area = budget->add_option("--area", oc->area, "available area (for max pairs)");
    budget->add_option("--overhead", oc->overhead, "energy overhead factor")
        ->capture_default_str();
    add_common(budget, oc->common);
    budget->callback([oc, budget] { run_optics_budget(*oc, budget); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help / --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const sg::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const sg::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
