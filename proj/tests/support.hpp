#pragma once

// Shared fixtures for the unit suites: small synthetic worlds with satellites
// pinned at chosen spots so scheduler behavior is easy to reason about.

#include <memory>
#include <vector>

#include "leobeam/linkmodel.hpp"
#include "leobeam/metrics.hpp"
#include "leobeam/scheduler.hpp"

namespace testsupport {

using namespace leobeam;

struct ToyWorld {
    CellGrid grid;
    std::vector<SatelliteState> sats;
    EpochGeometry geo;
    SpectrumPlan spectrum;
    LinkBudget budget;
    AntennaConfig antenna;
    InterferenceTupleSet jf;
    MetricsTracker tracker = MetricsTracker::create(1, 1, 1.0);
    std::vector<double> queues;
    std::vector<double> rates;
    EpochContext ctx;

    ToyWorld(const ToyWorld&) = delete;
    ToyWorld() = default;
};

// `cell_lon_deg` / `sat_lon_deg` place everything on the equator; satellites
// at `altitude_km`. All satellites are visible to all cells unless they fall
// below `min_elevation_deg`.
inline std::unique_ptr<ToyWorld> make_toy(const std::vector<double>& cell_lon_deg,
                                          const std::vector<double>& sat_lon_deg,
                                          int beams_per_sat, int T, double altitude_km = 1000.0,
                                          double min_elevation_deg = 5.0) {
    auto w = std::make_unique<ToyWorld>();
    w->grid.rows = 1;
    w->grid.cols = static_cast<int>(cell_lon_deg.size());
    w->grid.inter_center_km = 50.0;
    w->grid.cell_radius_km = 50.0 / std::sqrt(3.0);
    for (size_t i = 0; i < cell_lon_deg.size(); ++i) {
        Cell c;
        c.id = static_cast<int>(i);
        c.center_ecef_km = lat_lon_to_ecef(0.0, cell_lon_deg[i]);
        w->grid.cells.push_back(c);
    }
    for (size_t s = 0; s < sat_lon_deg.size(); ++s) {
        SatelliteState st;
        st.sat_id = static_cast<int>(s);
        st.position_ecef_km = lat_lon_to_ecef(0.0, sat_lon_deg[s], EARTH_RADIUS_KM + altitude_km);
        w->sats.push_back(st);
    }
    w->geo.epoch_index = 1;
    w->geo.sats = w->sats;
    const int C = static_cast<int>(cell_lon_deg.size());
    const int S = static_cast<int>(sat_lon_deg.size());
    w->geo.elevation_deg.assign(C, std::vector<double>(S, 0.0));
    w->geo.visible.assign(C, std::vector<uint8_t>(S, 0));
    for (int c = 0; c < C; ++c)
        for (int s = 0; s < S; ++s) {
            double el = elevation_angle_deg(w->grid.cells[c].center_ecef_km,
                                            w->sats[s].position_ecef_km);
            w->geo.elevation_deg[c][s] = el;
            w->geo.visible[c][s] = el >= min_elevation_deg;
        }
    w->spectrum = make_spectrum_plan(S, beams_per_sat, beams_per_sat, 5e8, 3e10);
    w->antenna.theta_3db_deg = std::atan(w->grid.cell_radius_km / altitude_km) * RAD2DEG;
    w->budget.h_min = 0.25;
    w->budget.s_max = std::max(2, S);
    w->tracker = MetricsTracker::create(C, T, 50.0);
    w->queues.assign(C, 10.0);
    w->rates.assign(C, 1.0);
    w->jf.epoch_index = 1;

    w->ctx.geo = &w->geo;
    w->ctx.grid = &w->grid;
    w->ctx.spectrum = &w->spectrum;
    w->ctx.jf = &w->jf;
    w->ctx.tracker = &w->tracker;
    w->ctx.queues = &w->queues;
    w->ctx.rates = &w->rates;
    w->ctx.T = T;
    w->ctx.d_max = 50.0;
    w->ctx.tradeoff_v = 100.0;
    w->ctx.f = 1;
    return w;
}

}  // namespace testsupport
