#pragma once
// Beam-splitter delay networks: compile laser pulses into timed, directed
// trains of ion-incident pulses, check that a kick scheme is realizable by a
// given train, and account the pulse-area (energy) budget.
//
// Two network shapes are supported.  A SplitterNetwork is a flat cascade:
// every stage splits each component into a short-arm and a delayed long-arm
// copy, so one laser pulse yields 2^(#stages) components whose times are the
// subset sums of the stage delays.  A TappedNetwork is a serial delay chain
// with one exit per kick group; each exit carries a multiplicity realized by
// nominally zero-delay grouping loops and an optional direction flip.  The
// chain shape is what symmetric (a,b,c) schemes need: their group times are
// consecutive gaps, not subset sums, and their pair counts are not powers of
// two.
//
// Energy accounting uses area ∝ √energy with lossless splitters.  A pair of
// counter-propagating π pulses costs 2π² in area-squared units, times a
// configurable overhead factor (default 2).

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "splitgate/trap.hpp"

namespace splitgate {

struct SplitterStage {
    double delay_s = 0.0;  // extra path delay of the long arm
    double ratio = 0.5;    // energy fraction sent to the long arm
    bool flip = false;     // long-arm components flip pair direction

    void validate() const;
};

struct SplitterNetwork {
    std::vector<SplitterStage> stages;
    double overhead_factor = 2.0;

    void validate() const;
};

// Serial chain with one tap per kick group.  Exit k sits after the first k
// chain links; its multiplicity m is produced by grouping loops whose depths
// follow the halving pattern depths(m) = depths(⌈m/2⌉) ∪ (1 + depths(⌊m/2⌋)).
// The loops are nominally zero-delay; a common shift (see compile) models
// their finite length for robustness studies.
struct TapExit {
    int multiplicity = 1;
    bool flip = false;  // exit emits direction −1, one loop deeper
};

struct TappedNetwork {
    std::vector<double> chain_delays_s;  // size exits.size() − 1
    std::vector<TapExit> exits;
    double overhead_factor = 2.0;

    void validate() const;
};

struct TrainEntry {
    double time_s = 0.0;
    int direction = 1;      // ±1
    double area = 0.0;      // radians
    int source_pulse = 0;   // index of the originating laser pulse
};

struct IncidentPulseTrain {
    std::vector<TrainEntry> entries;

    void validate() const;  // areas > 0, time-sorted
    double total_energy() const;  // Σ area² (energy ∝ area²)
};

// Loop depths used to realize a multiplicity-m exit: depths(1) = {0},
// depths(m) = depths(⌈m/2⌉) ∪ (1 + depths(⌊m/2⌋)).  Sorted ascending.
std::vector<int> grouping_depths(int multiplicity);

// Split n_laser_pulses pulses of area laser.max_area, emitted at the laser
// repetition rate, through the cascade.  A component taking the long arm of
// stage i accrues delay_i, energy fraction ratio_i, and a direction flip if
// flagged; its area is the laser area times √(product of energy fractions).
// common_delay_shift_s is added to every stage delay (a uniform timing error
// in each loop).  Output is time-sorted.
IncidentPulseTrain compile(const SplitterNetwork& network, const LaserParams& laser,
                           int n_laser_pulses, double common_delay_shift_s = 0.0);

// Chain version: the chain emits the train one tap per component — exit k's
// multiplicity π-area components fire together at Σ_{j<k} chain_delay_j after
// their source pulse (grouping loops are nominally zero-delay), and flipped
// exits emit direction −1.  Every delay element, grouping loops included,
// carries the same placement error: the j-th component of each source pulse
// sits behind j elements and accrues j · common_delay_shift_s.
IncidentPulseTrain compile(const TappedNetwork& network, const LaserParams& laser,
                           int n_laser_pulses, double common_delay_shift_s = 0.0);

// Collapse a train back into a kick scheme: entries within merge_tol trap
// periods of each other form one group with summed signed direction (empty
// groups cancel away); times convert to trap periods.
KickScheme scheme_from_train(const IncidentPulseTrain& train, const TrapParams& params,
                             double merge_tol_tp = 1e-9);

struct RealizabilityReport {
    bool ok = false;
    std::size_t matched_groups = 0;
    std::vector<std::size_t> unmatched_groups;   // indices into scheme.groups
    std::vector<std::size_t> unmatched_entries;  // indices into train.entries
    std::vector<std::string> failures;
};

// Match scheme groups to train entries by time relative to each sequence's
// start (tolerance 1e-9 trap periods), direction = sign(z), with |z| entries
// of area π (within 1e-9) per group.  Unmatched groups or leftover entries
// fail the report; nothing throws.
RealizabilityReport check_realizability(const KickScheme& scheme,
                                        const IncidentPulseTrain& train,
                                        const TrapParams& params);

// Minimum initial pulse area for a scheme of N pairs: π·√(2·N·overhead).
double required_area(const KickScheme& scheme, double overhead_factor = 2.0);

// Largest pair count affordable at a given area: floor(area²/(2π²·overhead)).
long max_pairs_for_area(double area, double overhead_factor = 2.0);

// Catalogued builders.  Delays are in trap periods and convert via the trap
// frequency; the returned networks compile to trains matching the
// corresponding scheme families exactly (check_realizability passes).
SplitterNetwork direct_split_network(const std::vector<double>& delays_tp,
                                     const TrapParams& params,
                                     double overhead_factor = 2.0);
SplitterNetwork alternating_split_network(const std::vector<double>& delays_tp,
                                          const TrapParams& params,
                                          double overhead_factor = 2.0);
TappedNetwork symmetric_network(const SymmetricScheme& symmetric,
                                const TrapParams& params,
                                double overhead_factor = 2.0);

}  // namespace splitgate
