#pragma once
// File formats: JSON readers/writers for every value object the CLI moves
// around, and CSV emitters for the plot-ready tables.  Field names here are
// the interchange contract — do not rename casually.
//
// Error mapping convention: malformed JSON or missing/mistyped fields throw
// nlohmann exceptions (CLI exit 1); values that parse but violate domain
// invariants throw invariant_error (exit 2).

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "splitgate/conditions.hpp"
#include "splitgate/manifest.hpp"
#include "splitgate/optics.hpp"
#include "splitgate/optimizer.hpp"
#include "splitgate/phase_space.hpp"
#include "splitgate/robustness.hpp"
#include "splitgate/schemes.hpp"
#include "splitgate/trap.hpp"

namespace splitgate {

using json = nlohmann::json;

// {"groups":[{"z":int,"t":float}...],"units":"trap_periods"}
json scheme_to_json(const KickScheme& scheme);
KickScheme scheme_from_json(const json& j);

// {"abc":[a,b,c],"n":int,"tau":[tau1,tau2,tau3],"negate":bool}
json symmetric_to_json(const SymmetricScheme& s);
SymmetricScheme symmetric_from_json(const json& j);

// {"eta":..,"nu":..,"nbar":..} — absent fields keep the base values, so a
// partial file (or flag overrides applied on top) composes naturally.
json trap_to_json(const TrapParams& params);
TrapParams trap_from_json(const json& j, const TrapParams& base = {});

// {"rep_rate":..,"max_area":..,"pulse_duration":..}
json laser_to_json(const LaserParams& params);
LaserParams laser_from_json(const json& j, const LaserParams& base = {});

// {"kind":string,"params":{...}} with per-kind parameter keys.
json family_to_json(const SchemeFamily& family);
SchemeFamily family_from_json(const json& j);

// Cascade: {"stages":[{"delay_s":float,"ratio":float,"flip":bool}...],
//           "overhead":float}
// Tapped chain: {"chain_delays_s":[...],
//                "exits":[{"multiplicity":int,"flip":bool}...],
//                "overhead":float}
json network_to_json(const SplitterNetwork& network);
json network_to_json(const TappedNetwork& network);
std::variant<SplitterNetwork, TappedNetwork> network_from_json(const json& j);

// All seven fields; complex values as [re, im].
json report_to_json(const ConditionReport& report);

json manifest_to_json(const RunManifest& manifest);  // embeds "manifest_hash"

// {"scheme":id,"epsilon":..,"f_p":..,"f_w":..,"c":..,"flags":[...]}
json fidelity_row(const std::string& scheme_id, double epsilon, double f_p, double f_w,
                  double c, const std::vector<std::string>& flags);

json sweep_summary_json(const SweepResult& sweep, const std::string& manifest_hash);

// CSV emitters.  Every table starts with "# manifest_hash: <hex>" so the
// artifact's provenance travels with it, then a header row.
void write_landscape_csv(std::ostream& os, const std::vector<LandscapePoint>& points,
                         const std::string& manifest_hash);
void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& trajectories,
                          const std::string& manifest_hash);
void write_train_csv(std::ostream& os, const IncidentPulseTrain& train,
                     const std::string& manifest_hash);
void write_scaling_csv(std::ostream& os, const ScalingStudy& study,
                       const std::string& manifest_hash);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep,
                     const std::string& manifest_hash);

// Whole-file helpers.
json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& content);

}  // namespace splitgate
