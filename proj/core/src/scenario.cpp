#include "leobeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leobeam/rng.hpp"

namespace leobeam {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw ScenarioError(key, 0, "scenario: " + key + ": " + msg);
}

const json* find(const json& j, const std::string& key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double get_num(const json& j, const std::string& path, const std::string& key, double def,
               bool required = false) {
    const json* v = find(j, key);
    if (!v) {
        if (required) fail(path + "." + key, "missing required key");
        return def;
    }
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key, int def,
            bool required = false) {
    const json* v = find(j, key);
    if (!v) {
        if (required) fail(path + "." + key, "missing required key");
        return def;
    }
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<int>();
}

uint64_t get_u64(const json& j, const std::string& path, const std::string& key, uint64_t def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_number_unsigned() && !v->is_number_integer())
        fail(path + "." + key, "expected an integer");
    return v->get<uint64_t>();
}

std::string get_str(const json& j, const std::string& path, const std::string& key,
                    const std::string& def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

bool get_bool(const json& j, const std::string& path, const std::string& key, bool def) {
    const json* v = find(j, key);
    if (!v) return def;
    if (!v->is_boolean()) fail(path + "." + key, "expected a boolean");
    return v->get<bool>();
}

const json& get_obj(const json& j, const std::string& path, const std::string& key,
                    bool required = true) {
    static const json empty = json::object();
    const json* v = find(j, key);
    if (!v) {
        if (required) fail(path.empty() ? key : path + "." + key, "missing required table");
        return empty;
    }
    if (!v->is_object()) fail(path.empty() ? key : path + "." + key, "expected a table");
    return *v;
}

// geometric extreme of the serving/victim channel-gain ratio over the
// visibility cone: (min slant / max slant)^2
double geometric_h_min(double altitude_km, double min_elevation_deg) {
    double a = EARTH_RADIUS_KM + altitude_km;
    double el = min_elevation_deg * DEG2RAD;
    double horiz = EARTH_RADIUS_KM * std::cos(el);
    double max_slant = std::sqrt(a * a - horiz * horiz) - EARTH_RADIUS_KM * std::sin(el);
    double r = altitude_km / max_slant;
    return r * r;
}

int sampled_s_max(const Scenario& s) {
    double period = orbital_period_s(s.constellation.altitude_km);
    double epoch_s = s.constellation.epoch_duration_ms * 1e-3;
    long long per_epoch = static_cast<long long>(std::ceil(period / epoch_s));
    // per-epoch sampling, capped for very large constellations
    long long samples = std::min<long long>(per_epoch, 4096);
    int s_max = 1;
    for (long long i = 0; i < samples; ++i) {
        double t = period * static_cast<double>(i) / static_cast<double>(samples);
        for (const auto& cell : s.grid.cells) {
            int count = 0;
            for (const auto& el : s.elements) {
                SatelliteState st = propagate_one(el, t);
                if (elevation_angle_deg(cell.center_ecef_km, st.position_ecef_km) >=
                    s.min_elevation_deg)
                    ++count;
            }
            s_max = std::max(s_max, count);
        }
    }
    return s_max;
}

std::vector<double> generate_traffic_field(const Scenario& s, double load_factor,
                                           uint64_t shape_seed, double cap_fraction,
                                           double floor_fraction, double contrast) {
    const int C = static_cast<int>(s.grid.cells.size());
    const double rate = s.nominal_rate_packets_per_slot();
    const int T = s.scheduler.slots_per_epoch;

    // capacity: the patch can drain at most min(C, visible beams) cells per
    // slot; queue stability is governed by the average over the run
    double capacity_sum = 0.0;
    int capacity_n = 0;
    int samples = std::min(16, std::max(1, s.run.epochs));
    int first = 1 + s.run.epochs / 10;  // skip the cold-start transient
    if (first >= s.run.epochs) first = 1;
    for (int i = 0; i < samples; ++i) {
        int f = first + static_cast<int>(static_cast<double>(i) * (s.run.epochs - first) /
                                         std::max(1, samples - 1));
        EpochGeometry geo = propagate(s.elements, f, s.constellation.epoch_duration_ms, s.grid,
                                      s.min_elevation_deg);
        int sats_seen = 0;
        for (int sat = 0; sat < static_cast<int>(s.elements.size()); ++sat) {
            bool seen = false;
            for (int c = 0; c < C && !seen; ++c) seen = geo.visible[c][sat];
            sats_seen += seen;
        }
        capacity_sum += std::min(C, sats_seen * s.spectrum.beams_per_sat) * T * rate;
        ++capacity_n;
    }
    // derate the raw bound: one beam per cell, window integrality and
    // interference serialization keep realized throughput below it
    double utilization = 0.85;
    double capacity = capacity_n > 0 ? utilization * capacity_sum / capacity_n : 0.0;
    if (!(capacity > 0.0))
        fail("traffic.load_factor", "no satellite is visible in sampled epochs; cannot size traffic");

    // smooth random field over the tangent-plane cell coordinates
    rng::Stream st(rng::stream_key(shape_seed, "traffic-shape"));
    std::vector<double> w(C, 0.0);
    const double d = s.grid_spec.inter_center_km;
    for (int k = 0; k < 3; ++k) {
        double psi = st.next_unit() * 2.0 * PI;
        double wavelength = d * (2.0 + 4.0 * st.next_unit());
        double phase = st.next_unit() * 2.0 * PI;
        for (int r = 0; r < s.grid_spec.rows; ++r) {
            for (int c = 0; c < s.grid_spec.cols; ++c) {
                double east = (c - (s.grid_spec.cols - 1) / 2.0) * d + ((r % 2) ? d / 2.0 : 0.0);
                double north = (r - (s.grid_spec.rows - 1) / 2.0) * d * std::sqrt(3.0) / 2.0;
                double u = (east * std::cos(psi) + north * std::sin(psi)) / wavelength;
                w[r * s.grid_spec.cols + c] += std::cos(2.0 * PI * u + phase);
            }
        }
    }
    for (double& v : w) v = std::exp(contrast * v);

    // scale so the total hits load_factor * capacity with every cell kept
    // individually drainable
    const double target = load_factor * capacity;
    const double cap_per_cell = cap_fraction * T * rate;
    const double floor_per_cell = floor_fraction * cap_per_cell;
    if (target > 0.99 * cap_per_cell * C)
        fail("traffic.load_factor", "requested load exceeds per-cell drainable traffic");
    if (floor_per_cell * C > target)
        fail("traffic.per_cell_floor_fraction", "floor exceeds the requested aggregate load");
    double lo = 0.0, hi = 1.0;
    auto total_at = [&](double scale) {
        double t = 0.0;
        for (double v : w) t += std::clamp(scale * v, floor_per_cell, cap_per_cell);
        return t;
    };
    while (total_at(hi) < target) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (total_at(mid) < target ? lo : hi) = mid;
    }
    std::vector<double> rates(C);
    for (int c = 0; c < C; ++c) rates[c] = std::clamp(hi * w[c], floor_per_cell, cap_per_cell);
    return rates;
}

std::vector<double> load_traffic_csv(const std::string& path, const std::string& base_dir,
                                     int cell_count) {
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty() &&
        std::filesystem::exists(std::filesystem::path(base_dir) / p))
        p = std::filesystem::path(base_dir) / p;
    std::ifstream in(p);
    if (!in) fail("traffic.csv", "cannot open '" + path + "'");
    std::vector<double> rates(cell_count, -1.0);
    std::string linebuf;
    while (std::getline(in, linebuf)) {
        if (linebuf.empty()) continue;
        if (linebuf.rfind("cell_id", 0) == 0) continue;  // header
        std::istringstream ls(linebuf);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) continue;
        int id = std::stoi(a);
        if (id < 0 || id >= cell_count) fail("traffic.csv", "cell id " + a + " out of range");
        rates[id] = std::stod(b);
    }
    for (int c = 0; c < cell_count; ++c)
        if (rates[c] < 0.0) fail("traffic.csv", "missing rate for cell " + std::to_string(c));
    return rates;
}

TimeFrequencyScheme parse_tf(const std::string& s, const std::string& key) {
    if (s == "proposed") return TimeFrequencyScheme::Proposed;
    if (s == "greedy") return TimeFrequencyScheme::Greedy;
    if (s == "swap") return TimeFrequencyScheme::Swap;
    fail(key, "expected one of proposed|greedy|swap, got '" + s + "'");
}

SatelliteScheme parse_sat(const std::string& s, const std::string& key) {
    if (s == "proposed_sa") return SatelliteScheme::ProposedSa;
    if (s == "minload") return SatelliteScheme::Minload;
    if (s == "maxtime") return SatelliteScheme::Maxtime;
    if (s == "topsis") return SatelliteScheme::Topsis;
    fail(key, "expected one of proposed_sa|minload|maxtime|topsis, got '" + s + "'");
}

}  // namespace

double Scenario::nominal_rate_packets_per_slot() const {
    return service_rate_packets_per_slot(budget.target_snr_db, spectrum.beam_bandwidth_hz,
                                         slot_duration_s(), traffic.packet_size_bits);
}

std::string time_frequency_name(TimeFrequencyScheme s) {
    switch (s) {
        case TimeFrequencyScheme::Proposed: return "proposed";
        case TimeFrequencyScheme::Greedy: return "greedy";
        case TimeFrequencyScheme::Swap: return "swap";
    }
    return "?";
}

std::string satellite_scheme_name(SatelliteScheme s) {
    switch (s) {
        case SatelliteScheme::ProposedSa: return "proposed_sa";
        case SatelliteScheme::Minload: return "minload";
        case SatelliteScheme::Maxtime: return "maxtime";
        case SatelliteScheme::Topsis: return "topsis";
    }
    return "?";
}

Scenario load_scenario_from_string(const std::string& text, const std::string& name) {
    return load_scenario_from_string(text, name, "");
}

Scenario load_scenario_from_string(const std::string& text, const std::string& name,
                                   const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        int line = 1;
        for (size_t i = 0; i < std::min(text.size(), e.byte); ++i)
            if (text[i] == '\n') ++line;
        throw ScenarioError("", line,
                            "scenario: parse error at line " + std::to_string(line) + ": " + e.what());
    }

    Scenario s;
    s.name = name;

    {
        const json& c = get_obj(j, "", "constellation");
        s.constellation.orbit_count = get_int(c, "constellation", "orbit_count", 1, true);
        s.constellation.sats_per_orbit = get_int(c, "constellation", "sats_per_orbit", 1, true);
        s.constellation.altitude_km = get_num(c, "constellation", "altitude_km", 600.0, true);
        s.constellation.inclination_deg = get_num(c, "constellation", "inclination_deg", 50.0);
        s.constellation.epoch_duration_ms = get_num(c, "constellation", "epoch_duration_ms", 120.0);
        s.constellation.raan0_deg = get_num(c, "constellation", "raan0_deg", 0.0);
        s.constellation.arg_lat0_deg = get_num(c, "constellation", "arg_lat0_deg", 0.0);
        if (find(c, "phasing_offset"))
            s.constellation.phasing_offset = get_num(c, "constellation", "phasing_offset", 0.0);
        else
            s.constellation.phasing_offset =
                get_num(c, "constellation", "walker_f", 1.0) / s.constellation.orbit_count;
        if (!(s.constellation.epoch_duration_ms > 0.0))
            fail("constellation.epoch_duration_ms", "must be > 0");
    }
    {
        const json& g = get_obj(j, "", "grid");
        s.grid_spec.rows = get_int(g, "grid", "rows", 1, true);
        s.grid_spec.cols = get_int(g, "grid", "cols", 1, true);
        s.grid_spec.center_lat_deg = get_num(g, "grid", "center_lat_deg", 26.67);
        s.grid_spec.center_lon_deg = get_num(g, "grid", "center_lon_deg", 110.6);
        s.grid_spec.inter_center_km = get_num(g, "grid", "inter_center_km", 50.0);
        s.grid_spec.cell_radius_km = get_num(g, "grid", "cell_radius_km", 0.0);
    }
    s.min_elevation_deg = get_num(j, "", "min_elevation_deg", 40.0);

    {
        const json& sp = get_obj(j, "", "spectrum", false);
        int beams = get_int(sp, "spectrum", "beams_per_sat", 4);
        int subbands = get_int(sp, "spectrum", "subband_count", beams);
        double bw = get_num(sp, "spectrum", "beam_bandwidth_hz", 5e8);
        double fc = get_num(sp, "spectrum", "center_frequency_hz", 3e10);
        int sat_count = s.constellation.orbit_count * s.constellation.sats_per_orbit;
        s.spectrum = make_spectrum_plan(sat_count, beams, subbands, bw, fc);
    }
    {
        const json& a = get_obj(j, "", "antenna", false);
        s.antenna.g_max_dbi = get_num(a, "antenna", "g_max_dbi", 38.5);
        double ratio = get_num(a, "antenna", "gain_ratio_db", 30.0);
        s.antenna.g_min_dbi = s.antenna.g_max_dbi - ratio;
        s.antenna.g_user_boresight_dbi = get_num(a, "antenna", "g_user_boresight_dbi", 35.0);
        s.antenna.ue_dish_diameter_m = get_num(a, "antenna", "ue_dish_diameter_m", 0.6);
        s.antenna.wavelength_m = s.spectrum.wavelength_m();
        double footprint = get_num(a, "antenna", "beam_footprint_radius_km", 0.0);
        double theta = get_num(a, "antenna", "theta_3db_deg", 0.0);
        if (theta > 0.0) {
            s.antenna.theta_3db_deg = theta;
        } else {
            if (footprint <= 0.0)
                footprint = s.grid_spec.cell_radius_km > 0.0
                                ? s.grid_spec.cell_radius_km
                                : s.grid_spec.inter_center_km / std::sqrt(3.0);
            s.antenna.theta_3db_deg =
                std::atan(footprint / s.constellation.altitude_km) * RAD2DEG;
        }
    }
    {
        const json& b = get_obj(j, "", "budget", false);
        s.budget.target_snr_db = get_num(b, "budget", "target_snr_db", 20.0);
        s.budget.noise_power_dbw = get_num(b, "budget", "noise_power_dbw", -117.0);
        s.budget.inr_threshold_db = get_num(b, "budget", "inr_threshold_db", -10.0);
        s.budget.atmospheric_margin_db = get_num(b, "budget", "atmospheric_margin_db", 0.0);
        s.budget.h_min = get_num(b, "budget", "h_min", 0.0);
        s.budget.s_max = get_int(b, "budget", "s_max", 0);
        if (find(b, "h_min") && !(s.budget.h_min > 0.0 && s.budget.h_min <= 1.0))
            fail("budget.h_min", "must be in (0, 1]");
        if (find(b, "s_max") && s.budget.s_max < 1) fail("budget.s_max", "must be >= 1");
    }
    {
        const json& sc = get_obj(j, "", "scheduler", false);
        s.scheduler.tradeoff_v = get_num(sc, "scheduler", "V", 1000.0);
        s.scheduler.d_max_slots = get_num(sc, "scheduler", "d_max_slots", 50.0);
        s.scheduler.slots_per_epoch = get_int(sc, "scheduler", "slots_per_epoch", 15);
        s.scheduler.satellite_realloc_period = get_int(sc, "scheduler", "satellite_realloc_period", 600);
        if (s.scheduler.tradeoff_v < 0.0) fail("scheduler.V", "must be >= 0");
        if (s.scheduler.d_max_slots < 1.0) fail("scheduler.d_max_slots", "must be >= 1");
        if (s.scheduler.slots_per_epoch < 1) fail("scheduler.slots_per_epoch", "must be >= 1");
        if (s.scheduler.satellite_realloc_period < 1)
            fail("scheduler.satellite_realloc_period", "must be >= 1");
        const json& sa = get_obj(sc, "scheduler", "sa", false);
        s.scheduler.sa.t1 = get_num(sa, "scheduler.sa", "t1", 100.0);
        s.scheduler.sa.t2 = get_num(sa, "scheduler.sa", "t2", 1.0);
        s.scheduler.sa.rho = get_num(sa, "scheduler.sa", "rho", 0.95);
        s.scheduler.sa.moves_per_temperature = get_int(sa, "scheduler.sa", "moves_per_temperature", 1);
        if (!(s.scheduler.sa.t1 > s.scheduler.sa.t2 && s.scheduler.sa.t2 > 0.0))
            fail("scheduler.sa", "requires t1 > t2 > 0");
        if (!(s.scheduler.sa.rho > 0.0 && s.scheduler.sa.rho < 1.0))
            fail("scheduler.sa.rho", "must be in (0, 1)");
        if (s.scheduler.sa.moves_per_temperature < 1)
            fail("scheduler.sa.moves_per_temperature", "must be >= 1");
    }
    {
        const json& b = get_obj(j, "", "baseline", false);
        s.baseline.time_frequency =
            parse_tf(get_str(b, "baseline", "time_frequency", "proposed"), "baseline.time_frequency");
        s.baseline.satellite =
            parse_sat(get_str(b, "baseline", "satellite", "proposed_sa"), "baseline.satellite");
    }
    {
        const json& r = get_obj(j, "", "run", false);
        s.run.epochs = get_int(r, "run", "epochs", 2000);
        s.run.seed = get_u64(r, "run", "seed", 1);
        s.run.output_dir = get_str(r, "run", "output_dir", "runs/" + name);
        s.run.dump_plans = get_bool(r, "run", "dump_plans", false);
        s.run.dump_ephemeris = get_bool(r, "run", "dump_ephemeris", false);
        s.run.dump_tuples = get_bool(r, "run", "dump_tuples", false);
        if (s.run.epochs < 1) fail("run.epochs", "must be >= 1");
    }

    // resolve world
    s.elements = build_constellation(s.constellation);
    s.grid = build_cell_grid(s.grid_spec);
    if (s.budget.h_min <= 0.0)
        s.budget.h_min = geometric_h_min(s.constellation.altitude_km, s.min_elevation_deg);
    if (s.budget.s_max < 1) s.budget.s_max = sampled_s_max(s);

    // traffic
    {
        const json& t = get_obj(j, "", "traffic", false);
        s.traffic.packet_size_bits = get_num(t, "traffic", "packet_size_bits", 1e6);
        if (!(s.traffic.packet_size_bits > 0.0)) fail("traffic.packet_size_bits", "must be > 0");
        s.traffic.rng_seed = get_u64(t, "traffic", "seed", s.run.seed);
        const int C = static_cast<int>(s.grid.cells.size());
        if (const json* mr = find(t, "mean_rates")) {
            if (!mr->is_array() || static_cast<int>(mr->size()) != C)
                fail("traffic.mean_rates", "expected an array of " + std::to_string(C) + " rates");
            s.traffic.mean_rates.resize(C);
            for (int c = 0; c < C; ++c) {
                if (!(*mr)[c].is_number()) fail("traffic.mean_rates", "expected numbers");
                s.traffic.mean_rates[c] = (*mr)[c].get<double>();
                if (s.traffic.mean_rates[c] < 0.0) fail("traffic.mean_rates", "rates must be >= 0");
            }
        } else if (find(t, "csv")) {
            s.traffic.mean_rates = load_traffic_csv(get_str(t, "traffic", "csv", ""), base_dir, C);
        } else {
            double lf = get_num(t, "traffic", "load_factor", 0.7);
            if (!(lf >= 0.0)) fail("traffic.load_factor", "must be >= 0");
            uint64_t shape_seed = get_u64(t, "traffic", "shape_seed", 3);
            double cap_fraction = get_num(t, "traffic", "per_cell_cap_fraction", 0.85);
            if (!(cap_fraction > 0.0 && cap_fraction <= 1.0))
                fail("traffic.per_cell_cap_fraction", "must be in (0, 1]");
            double contrast = get_num(t, "traffic", "shape_contrast", 0.5);
            double floor_fraction = get_num(t, "traffic", "per_cell_floor_fraction", 0.0);
            if (floor_fraction < 0.0 || floor_fraction >= 1.0)
                fail("traffic.per_cell_floor_fraction", "must be in [0, 1)");
            s.traffic.mean_rates =
                lf > 0.0 ? generate_traffic_field(s, lf, shape_seed, cap_fraction,
                                                  floor_fraction, contrast)
                         : std::vector<double>(C, 0.0);
        }
        for (auto& c : s.grid.cells) c.mean_arrival_rate = s.traffic.mean_rates[c.id];
    }

    // canonical hash over the resolved configuration
    {
        json r;
        r["constellation"] = {s.constellation.orbit_count, s.constellation.sats_per_orbit,
                              s.constellation.altitude_km, s.constellation.inclination_deg,
                              s.constellation.phasing_offset, s.constellation.epoch_duration_ms,
                              s.constellation.raan0_deg, s.constellation.arg_lat0_deg};
        r["grid"] = {s.grid_spec.rows, s.grid_spec.cols, s.grid_spec.center_lat_deg,
                     s.grid_spec.center_lon_deg, s.grid_spec.inter_center_km, s.grid.cell_radius_km};
        r["spectrum"] = {s.spectrum.beams_per_sat, s.spectrum.subband_count,
                         s.spectrum.beam_bandwidth_hz, s.spectrum.center_frequency_hz};
        r["antenna"] = {s.antenna.g_max_dbi, s.antenna.g_min_dbi, s.antenna.theta_3db_deg,
                        s.antenna.g_user_boresight_dbi, s.antenna.ue_dish_diameter_m};
        r["budget"] = {s.budget.target_snr_db, s.budget.noise_power_dbw, s.budget.inr_threshold_db,
                       s.budget.atmospheric_margin_db, s.budget.h_min, s.budget.s_max};
        r["traffic"] = {s.traffic.packet_size_bits, s.traffic.rng_seed, s.traffic.mean_rates};
        r["scheduler"] = {s.scheduler.tradeoff_v, s.scheduler.d_max_slots,
                          s.scheduler.slots_per_epoch, s.scheduler.satellite_realloc_period,
                          s.scheduler.sa.t1, s.scheduler.sa.t2, s.scheduler.sa.rho,
                          s.scheduler.sa.moves_per_temperature};
        r["baseline"] = {time_frequency_name(s.baseline.time_frequency),
                         satellite_scheme_name(s.baseline.satellite)};
        r["min_elevation_deg"] = s.min_elevation_deg;
        s.scenario_hash = rng::fnv1a(r.dump());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path, 0, "scenario: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string name = std::filesystem::path(path).stem().string();
    std::string dir = std::filesystem::path(path).parent_path().string();
    return load_scenario_from_string(buf.str(), name, dir);
}

}  // namespace leobeam
