#include "splitgate/serialize.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace splitgate {

json scheme_to_json(const KickScheme& scheme) {
    json groups = json::array();
    for (const auto& g : scheme.groups) groups.push_back({{"z", g.z}, {"t", g.t}});
    return {{"groups", groups}, {"units", "trap_periods"}};
}

KickScheme scheme_from_json(const json& j) {
    if (j.contains("units") && j.at("units").get<std::string>() != "trap_periods")
        throw invariant_error("scheme times must be in trap_periods");
    KickScheme scheme;
    for (const auto& g : j.at("groups"))
        scheme.groups.push_back({g.at("z").get<int>(), g.at("t").get<double>()});
    scheme.validate();
    return scheme;
}

json symmetric_to_json(const SymmetricScheme& s) {
    return {{"abc", {s.a, s.b, s.c}},
            {"n", s.n},
            {"tau", {s.tau1, s.tau2, s.tau3}},
            {"negate", s.negate}};
}

SymmetricScheme symmetric_from_json(const json& j) {
    SymmetricScheme s;
    const auto& abc = j.at("abc");
    s.a = abc.at(0).get<int>();
    s.b = abc.at(1).get<int>();
    s.c = abc.at(2).get<int>();
    s.n = j.value("n", 1);
    const auto& tau = j.at("tau");
    s.tau1 = tau.at(0).get<double>();
    s.tau2 = tau.at(1).get<double>();
    s.tau3 = tau.at(2).get<double>();
    s.negate = j.value("negate", false);
    s.validate();
    return s;
}

json trap_to_json(const TrapParams& params) {
    return {{"eta", params.eta}, {"nu", params.nu}, {"nbar", params.nbar}};
}

TrapParams trap_from_json(const json& j, const TrapParams& base) {
    TrapParams params = base;
    params.eta = j.value("eta", base.eta);
    params.nu = j.value("nu", base.nu);
    params.nbar = j.value("nbar", base.nbar);
    params.validate();
    return params;
}

json laser_to_json(const LaserParams& params) {
    return {{"rep_rate", params.rep_rate},
            {"max_area", params.max_area},
            {"pulse_duration", params.pulse_duration}};
}

LaserParams laser_from_json(const json& j, const LaserParams& base) {
    LaserParams params = base;
    params.rep_rate = j.value("rep_rate", base.rep_rate);
    params.max_area = j.value("max_area", base.max_area);
    params.pulse_duration = j.value("pulse_duration", base.pulse_duration);
    params.validate();
    return params;
}

namespace {

const char* kind_label(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::gzc: return "gzc";
        case FamilyKind::symmetric_abc: return "symmetric_abc";
        case FamilyKind::direct_split: return "direct_split";
        case FamilyKind::alternating_split: return "alternating_split";
        case FamilyKind::free_times: return "free_times";
    }
    throw invariant_error("unknown family kind");
}

FamilyKind kind_from_label(const std::string& label) {
    if (label == "gzc") return FamilyKind::gzc;
    if (label == "symmetric_abc") return FamilyKind::symmetric_abc;
    if (label == "direct_split") return FamilyKind::direct_split;
    if (label == "alternating_split") return FamilyKind::alternating_split;
    if (label == "free_times") return FamilyKind::free_times;
    throw invariant_error("unknown family kind: " + label);
}

}  // namespace

json family_to_json(const SchemeFamily& family) {
    json params = json::object();
    switch (family.kind) {
        case FamilyKind::gzc:
            params["n"] = family.n;
            break;
        case FamilyKind::symmetric_abc:
            params["abc"] = {family.a, family.b, family.c};
            params["n"] = family.n;
            params["negate"] = family.negate;
            break;
        case FamilyKind::direct_split:
        case FamilyKind::alternating_split:
            params["pulse_count"] = family.pulse_count;
            params["n_delays"] = family.n_delays;
            if (family.rep_rate > 0.0) params["rep_rate"] = family.rep_rate;
            break;
        case FamilyKind::free_times:
            params["n_free_times"] = family.n_free_times;
            break;
    }
    return {{"kind", kind_label(family.kind)}, {"params", params}};
}

SchemeFamily family_from_json(const json& j) {
    SchemeFamily family;
    family.kind = kind_from_label(j.at("kind").get<std::string>());
    const json params = j.value("params", json::object());
    switch (family.kind) {
        case FamilyKind::gzc:
            family.n = params.value("n", 1);
            break;
        case FamilyKind::symmetric_abc: {
            if (params.contains("abc")) {
                const auto& abc = params.at("abc");
                family.a = abc.at(0).get<int>();
                family.b = abc.at(1).get<int>();
                family.c = abc.at(2).get<int>();
            }
            family.n = params.value("n", 1);
            family.negate = params.value("negate", false);
            break;
        }
        case FamilyKind::direct_split:
        case FamilyKind::alternating_split:
            family.pulse_count = params.value("pulse_count", 1);
            family.n_delays = params.value("n_delays", 3);
            family.rep_rate = params.value("rep_rate", 0.0);
            break;
        case FamilyKind::free_times:
            family.n_free_times = params.value("n_free_times", 3);
            break;
    }
    family.validate();
    return family;
}

json network_to_json(const SplitterNetwork& network) {
    json stages = json::array();
    for (const auto& s : network.stages)
        stages.push_back(
            {{"delay_s", s.delay_s}, {"ratio", s.ratio}, {"flip", s.flip}});
    return {{"stages", stages}, {"overhead", network.overhead_factor}};
}

json network_to_json(const TappedNetwork& network) {
    json exits = json::array();
    for (const auto& e : network.exits)
        exits.push_back({{"multiplicity", e.multiplicity}, {"flip", e.flip}});
    return {{"chain_delays_s", network.chain_delays_s},
            {"exits", exits},
            {"overhead", network.overhead_factor}};
}

std::variant<SplitterNetwork, TappedNetwork> network_from_json(const json& j) {
    if (j.contains("stages")) {
        SplitterNetwork network;
        for (const auto& s : j.at("stages")) {
            SplitterStage stage;
            stage.delay_s = s.at("delay_s").get<double>();
            stage.ratio = s.at("ratio").get<double>();
            stage.flip = s.value("flip", false);
            network.stages.push_back(stage);
        }
        network.overhead_factor = j.value("overhead", 2.0);
        network.validate();
        return network;
    }
    if (j.contains("exits")) {
        TappedNetwork network;
        network.chain_delays_s = j.value("chain_delays_s", std::vector<double>{});
        for (const auto& e : j.at("exits"))
            network.exits.push_back(
                {e.at("multiplicity").get<int>(), e.value("flip", false)});
        network.overhead_factor = j.value("overhead", 2.0);
        network.validate();
        return network;
    }
    throw invariant_error("network file needs either \"stages\" or \"exits\"");
}

json report_to_json(const ConditionReport& report) {
    return {{"theta", report.theta},
            {"c_c", {report.c_c.real(), report.c_c.imag()}},
            {"c_r", {report.c_r.real(), report.c_r.imag()}},
            {"e_motional", report.e_motional},
            {"e_phase", report.e_phase},
            {"e_total", report.e_total},
            {"gate_time", report.gate_time}};
}

json manifest_to_json(const RunManifest& manifest) {
    json overrides = json::array();
    for (const auto& [name, value] : manifest.overrides)
        overrides.push_back({{"name", name}, {"value", value}});
    return {{"command", manifest.command},
            {"input_files", manifest.input_files},
            {"seed", manifest.seed},
            {"overrides", overrides},
            {"output_directory", manifest.output_directory},
            {"tool_version", manifest.version},
            {"wall_clock_seconds", manifest.wall_clock_seconds},
            {"manifest_hash", manifest.hash()}};
}

json fidelity_row(const std::string& scheme_id, double epsilon, double f_p, double f_w,
                  double c, const std::vector<std::string>& flags) {
    return {{"scheme", scheme_id}, {"epsilon", epsilon}, {"f_p", f_p},
            {"f_w", f_w},         {"c", c},             {"flags", flags}};
}

json sweep_summary_json(const SweepResult& sweep, const std::string& manifest_hash) {
    return {{"kind", sweep.kind},
            {"model", sweep.model},
            {"budget", sweep.threshold_budget},
            {"threshold", sweep.threshold},
            {"threshold_found", sweep.threshold_found},
            {"first_non_monotone", sweep.first_non_monotone},
            {"manifest_hash", manifest_hash}};
}

namespace {

void begin_csv(std::ostream& os, const std::string& manifest_hash, const char* header) {
    os << "# manifest_hash: " << manifest_hash << "\n" << header << "\n";
    os << std::setprecision(17);
}

}  // namespace

void write_landscape_csv(std::ostream& os, const std::vector<LandscapePoint>& points,
                         const std::string& manifest_hash) {
    begin_csv(os, manifest_hash, "var1,var2,logJ");
    for (const auto& p : points)
        os << p.var1 << "," << p.var2 << "," << p.log_j << "\n";
}

void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& trajectories,
                          const std::string& manifest_hash) {
    begin_csv(os, manifest_hash, "index,time,X,P,branch,frame");
    for (const auto& traj : trajectories)
        for (const auto& pt : traj.points)
            os << pt.index << "," << pt.time << "," << pt.x << "," << pt.p << ","
               << traj.branch_label() << "," << traj.frame_label() << "\n";
}

void write_train_csv(std::ostream& os, const IncidentPulseTrain& train,
                     const std::string& manifest_hash) {
    begin_csv(os, manifest_hash, "time_s,direction,area_over_pi,source_pulse");
    for (const auto& entry : train.entries)
        os << entry.time_s << "," << entry.direction << "," << entry.area / pi << ","
           << entry.source_pulse << "\n";
}

void write_scaling_csv(std::ostream& os, const ScalingStudy& study,
                       const std::string& manifest_hash) {
    begin_csv(os, manifest_hash, "n,N_pairs,T_G,E,J,seed");
    for (const auto& row : study.rows)
        os << row.n << "," << row.n_pairs << "," << row.gate_time << "," << row.e_total
           << "," << row.j << "," << row.seed << "\n";
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep,
                     const std::string& manifest_hash) {
    begin_csv(os, manifest_hash, "parameter,error,pass");
    for (const auto& row : sweep.rows)
        os << row.parameter << "," << row.error << "," << (row.pass ? 1 : 0) << "\n";
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw json::parse_error::create(101, 0, "cannot open " + path, nullptr);
    return json::parse(in);
}

void save_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace splitgate
