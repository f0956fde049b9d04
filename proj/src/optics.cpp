#include "splitgate/optics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace splitgate {

void SplitterStage::validate() const {
    if (delay_s < 0.0) throw invariant_error("splitter stage delay must be >= 0");
    if (!(ratio > 0.0) || !(ratio < 1.0))
        throw invariant_error("splitter ratio must lie in (0, 1)");
}

void SplitterNetwork::validate() const {
    if (stages.empty()) throw invariant_error("splitter network needs at least one stage");
    if (overhead_factor < 1.0) throw invariant_error("overhead factor must be >= 1");
    for (const auto& s : stages) s.validate();
}

void TappedNetwork::validate() const {
    if (exits.empty()) throw invariant_error("tapped network needs at least one exit");
    if (chain_delays_s.size() + 1 != exits.size())
        throw invariant_error("tapped network needs one chain delay between consecutive exits");
    if (overhead_factor < 1.0) throw invariant_error("overhead factor must be >= 1");
    for (double d : chain_delays_s)
        if (d < 0.0) throw invariant_error("chain delay must be >= 0");
    for (const auto& e : exits) {
        if (e.multiplicity < 1) throw invariant_error("exit multiplicity must be >= 1");
    }
}

void IncidentPulseTrain::validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!(entries[i].area > 0.0)) throw invariant_error("train entry area must be > 0");
        if (entries[i].direction != 1 && entries[i].direction != -1)
            throw invariant_error("train entry direction must be +1 or -1");
        if (i > 0 && entries[i].time_s < entries[i - 1].time_s)
            throw invariant_error("train entries must be time-sorted");
    }
}

double IncidentPulseTrain::total_energy() const {
    double e = 0.0;
    for (const auto& t : entries) e += t.area * t.area;
    return e;
}

std::vector<int> grouping_depths(int multiplicity) {
    if (multiplicity < 1) throw invariant_error("multiplicity must be >= 1");
    if (multiplicity == 1) return {0};
    std::vector<int> hi = grouping_depths((multiplicity + 1) / 2);
    std::vector<int> lo = grouping_depths(multiplicity / 2);
    for (int& d : lo) ++d;
    hi.insert(hi.end(), lo.begin(), lo.end());
    std::sort(hi.begin(), hi.end());
    return hi;
}

namespace {

void sort_entries(IncidentPulseTrain& train) {
    std::stable_sort(train.entries.begin(), train.entries.end(),
                     [](const TrainEntry& a, const TrainEntry& b) {
                         return a.time_s < b.time_s;
                     });
}

}  // namespace

IncidentPulseTrain compile(const SplitterNetwork& network, const LaserParams& laser,
                           int n_laser_pulses, double common_delay_shift_s) {
    network.validate();
    laser.validate();
    if (n_laser_pulses < 1) throw invariant_error("need at least one laser pulse");

    IncidentPulseTrain train;
    const std::size_t m = network.stages.size();
    train.entries.reserve(static_cast<std::size_t>(n_laser_pulses) << m);

    for (int p = 0; p < n_laser_pulses; ++p) {
        const double t0 = static_cast<double>(p) / laser.rep_rate;
        // Component `mask` took the long arm at every set-bit stage.
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
            double t = t0;
            double energy_fraction = 1.0;
            int direction = 1;
            for (std::size_t i = 0; i < m; ++i) {
                const auto& stage = network.stages[i];
                if (mask >> i & 1) {
                    t += stage.delay_s + common_delay_shift_s;
                    energy_fraction *= stage.ratio;
                    if (stage.flip) direction = -direction;
                } else {
                    energy_fraction *= 1.0 - stage.ratio;
                }
            }
            train.entries.push_back(
                {t, direction, laser.max_area * std::sqrt(energy_fraction), p});
        }
    }
    sort_entries(train);
    return train;
}

IncidentPulseTrain compile(const TappedNetwork& network, const LaserParams& laser,
                           int n_laser_pulses, double common_delay_shift_s) {
    network.validate();
    laser.validate();
    if (n_laser_pulses < 1) throw invariant_error("need at least one laser pulse");

    IncidentPulseTrain train;
    for (int p = 0; p < n_laser_pulses; ++p) {
        double nominal = static_cast<double>(p) / laser.rep_rate;
        int tap = 0;  // delay elements behind the next emitted component
        for (std::size_t k = 0; k < network.exits.size(); ++k) {
            const auto& exit = network.exits[k];
            for (int i = 0; i < exit.multiplicity; ++i) {
                train.entries.push_back({nominal + tap * common_delay_shift_s,
                                         exit.flip ? -1 : 1, pi, p});
                ++tap;
            }
            if (k + 1 < network.exits.size()) nominal += network.chain_delays_s[k];
        }
    }
    sort_entries(train);
    return train;
}

KickScheme scheme_from_train(const IncidentPulseTrain& train, const TrapParams& params,
                             double merge_tol_tp) {
    train.validate();
    params.validate();
    if (train.entries.empty()) throw invariant_error("cannot build a scheme from an empty train");

    const double period_s = params.trap_period();
    KickScheme scheme;
    for (const auto& entry : train.entries) {
        const double t = entry.time_s / period_s;
        if (!scheme.groups.empty() && t - scheme.groups.back().t <= merge_tol_tp) {
            scheme.groups.back().z += entry.direction;
        } else {
            scheme.groups.push_back({entry.direction, t});
        }
    }
    std::erase_if(scheme.groups, [](const KickGroup& g) { return g.z == 0; });
    if (scheme.groups.empty())
        throw invariant_error("train cancels out: no net kicks remain");
    scheme.validate();
    return scheme;
}

RealizabilityReport check_realizability(const KickScheme& scheme,
                                        const IncidentPulseTrain& train,
                                        const TrapParams& params) {
    scheme.validate();
    train.validate();
    params.validate();

    RealizabilityReport report;
    const double period_s = params.trap_period();
    const double time_tol_s = 1e-9 * period_s;
    const double area_tol = 1e-9;

    // Absolute emission epoch is arbitrary: compare times relative to the
    // start of each sequence.
    const double scheme_start_s = scheme.groups.front().t * period_s;
    double train_start_s = 0.0;
    if (!train.entries.empty()) train_start_s = train.entries.front().time_s;

    std::vector<bool> used(train.entries.size(), false);
    for (std::size_t g = 0; g < scheme.groups.size(); ++g) {
        const auto& group = scheme.groups[g];
        const double want_t = group.t * period_s - scheme_start_s;
        const int want_dir = group.z > 0 ? 1 : -1;
        int need = std::abs(group.z);
        for (std::size_t e = 0; e < train.entries.size() && need > 0; ++e) {
            if (used[e]) continue;
            const auto& entry = train.entries[e];
            if (std::abs(entry.time_s - train_start_s - want_t) > time_tol_s) continue;
            if (entry.direction != want_dir) continue;
            if (std::abs(entry.area - pi) > area_tol) continue;
            used[e] = true;
            --need;
        }
        if (need > 0) {
            report.unmatched_groups.push_back(g);
            std::ostringstream msg;
            msg << "group " << g << " at t=" << group.t << " (z=" << group.z
                << ") is short " << need << " matching pulse(s)";
            report.failures.push_back(msg.str());
        } else {
            ++report.matched_groups;
        }
    }
    for (std::size_t e = 0; e < train.entries.size(); ++e) {
        if (used[e]) continue;
        report.unmatched_entries.push_back(e);
        std::ostringstream msg;
        msg << "train entry " << e << " at t=" << train.entries[e].time_s
            << " s (direction " << train.entries[e].direction << ", area/pi "
            << train.entries[e].area / pi << ") matches no group";
        report.failures.push_back(msg.str());
    }
    report.ok = report.unmatched_groups.empty() && report.unmatched_entries.empty();
    return report;
}

double required_area(const KickScheme& scheme, double overhead_factor) {
    scheme.validate();
    if (overhead_factor < 1.0) throw invariant_error("overhead factor must be >= 1");
    return pi * std::sqrt(2.0 * scheme.n_pairs() * overhead_factor);
}

long max_pairs_for_area(double area, double overhead_factor) {
    if (!(area > 0.0)) throw invariant_error("area must be > 0");
    if (overhead_factor < 1.0) throw invariant_error("overhead factor must be >= 1");
    const double value = area * area / (2.0 * pi * pi * overhead_factor);
    // Counts sitting an ulp below an integer (e.g. (100π)²/(4π²)) must not
    // round down; nudge by one part in 1e12 before flooring.
    return static_cast<long>(std::floor(value * (1.0 + 1e-12) + 1e-12));
}

namespace {

SplitterNetwork cascade(const std::vector<double>& delays_tp, const TrapParams& params,
                        double overhead_factor, bool flip_last) {
    params.validate();
    if (delays_tp.empty()) throw invariant_error("cascade needs at least one delay");
    SplitterNetwork network;
    network.overhead_factor = overhead_factor;
    const double period_s = params.trap_period();
    for (std::size_t i = 0; i < delays_tp.size(); ++i) {
        SplitterStage stage;
        stage.delay_s = delays_tp[i] * period_s;
        stage.ratio = 0.5;
        stage.flip = flip_last && i + 1 == delays_tp.size();
        network.stages.push_back(stage);
    }
    network.validate();
    return network;
}

}  // namespace

SplitterNetwork direct_split_network(const std::vector<double>& delays_tp,
                                     const TrapParams& params, double overhead_factor) {
    return cascade(delays_tp, params, overhead_factor, false);
}

SplitterNetwork alternating_split_network(const std::vector<double>& delays_tp,
                                          const TrapParams& params,
                                          double overhead_factor) {
    return cascade(delays_tp, params, overhead_factor, true);
}

TappedNetwork symmetric_network(const SymmetricScheme& symmetric,
                                const TrapParams& params, double overhead_factor) {
    const KickScheme scheme = expand_symmetric(symmetric);
    params.validate();

    TappedNetwork network;
    network.overhead_factor = overhead_factor;
    const double period_s = params.trap_period();
    for (std::size_t k = 0; k < scheme.groups.size(); ++k) {
        const auto& group = scheme.groups[k];
        network.exits.push_back({std::abs(group.z), group.z < 0});
        if (k + 1 < scheme.groups.size())
            network.chain_delays_s.push_back(
                (scheme.groups[k + 1].t - group.t) * period_s);
    }
    network.validate();
    return network;
}

}  // namespace splitgate
