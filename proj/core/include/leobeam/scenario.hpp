#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "leobeam/baselines.hpp"
#include "leobeam/geometry.hpp"
#include "leobeam/linkmodel.hpp"
#include "leobeam/scheduler.hpp"
#include "leobeam/traffic.hpp"

// Scenario configuration: a single JSON file describing the world, the link
// budget, traffic, and scheduler parameters; derived quantities (h_min, S_max,
// theta_3dB, traffic rates) are resolved at load time.
namespace leobeam {

struct ScenarioError : std::runtime_error {
    std::string key;
    int line = 0;
    ScenarioError(std::string key_, int line_, const std::string& msg)
        : std::runtime_error(msg), key(std::move(key_)), line(line_) {}
};

struct SchedulerParams {
    double tradeoff_v = 1000.0;
    double d_max_slots = 50.0;
    int slots_per_epoch = 15;
    int satellite_realloc_period = 600;
    SaConfig sa;
};

struct BaselineChoice {
    TimeFrequencyScheme time_frequency = TimeFrequencyScheme::Proposed;
    SatelliteScheme satellite = SatelliteScheme::ProposedSa;
};

struct RunParams {
    int epochs = 2000;
    uint64_t seed = 1;
    std::string output_dir = "runs/out";
    bool dump_plans = false;
    bool dump_ephemeris = false;
    bool dump_tuples = false;
};

struct Scenario {
    std::string name;
    uint64_t scenario_hash = 0;

    ConstellationSpec constellation;
    CellGridSpec grid_spec;
    double min_elevation_deg = 40.0;

    SpectrumPlan spectrum;
    AntennaConfig antenna;
    LinkBudget budget;
    TrafficSpec traffic;
    SchedulerParams scheduler;
    BaselineChoice baseline;
    RunParams run;

    // resolved at load time
    CellGrid grid;
    std::vector<OrbitalElements> elements;

    double slot_duration_s() const {
        return constellation.epoch_duration_ms * 1e-3 / scheduler.slots_per_epoch;
    }
    // uniform rate implied by the power-controlled target SNR
    double nominal_rate_packets_per_slot() const;
};

// Parses, validates, and resolves a scenario file. Errors carry the offending
// key path (semantic errors) or line (syntax errors).
Scenario load_scenario(const std::string& path);
Scenario load_scenario_from_string(const std::string& text, const std::string& name);
Scenario load_scenario_from_string(const std::string& text, const std::string& name,
                                   const std::string& base_dir);

std::string time_frequency_name(TimeFrequencyScheme s);
std::string satellite_scheme_name(SatelliteScheme s);

}  // namespace leobeam
