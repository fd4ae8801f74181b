#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "leobeam/geometry.hpp"
#include "leobeam/rng.hpp"

using namespace leobeam;

TEST_CASE("walker constellation counts and spacing") {
    ConstellationSpec spec;
    spec.orbit_count = 40;
    spec.sats_per_orbit = 30;
    spec.altitude_km = 600.0;
    spec.inclination_deg = 50.0;
    auto els = build_constellation(spec);
    CHECK(els.size() == 1200);

    spec.orbit_count = 1;
    spec.sats_per_orbit = 1;
    els = build_constellation(spec);
    CHECK(els.size() == 1);
    CHECK(els[0].arg_lat0_rad == doctest::Approx(0.0));

    spec.orbit_count = 2;
    spec.sats_per_orbit = 3;
    els = build_constellation(spec);
    CHECK(els.size() == 6);
    // even in-plane spacing of 120 degrees
    CHECK(els[1].arg_lat0_rad - els[0].arg_lat0_rad == doctest::Approx(2.0 * PI / 3.0));
    CHECK(els[2].arg_lat0_rad - els[1].arg_lat0_rad == doctest::Approx(2.0 * PI / 3.0));

    spec.orbit_count = 0;
    CHECK_THROWS_AS(build_constellation(spec), std::invalid_argument);
}

TEST_CASE("propagate at f=1 returns initial positions") {
    ConstellationSpec spec;
    spec.orbit_count = 2;
    spec.sats_per_orbit = 2;
    spec.altitude_km = 600.0;
    auto els = build_constellation(spec);
    CellGridSpec gs;
    gs.rows = 1;
    gs.cols = 1;
    CellGrid grid = build_cell_grid(gs);
    EpochGeometry geo = propagate(els, 1, 120.0, grid, 40.0);
    for (size_t i = 0; i < els.size(); ++i) {
        SatelliteState s0 = propagate_one(els[i], 0.0);
        CHECK(norm(geo.sats[i].position_ecef_km - s0.position_ecef_km) == doctest::Approx(0.0));
        CHECK(norm(s0.position_ecef_km) ==
              doctest::Approx(EARTH_RADIUS_KM + spec.altitude_km).epsilon(1e-9));
    }
    CHECK_THROWS_AS(propagate(els, 0, 120.0, grid, 40.0), std::invalid_argument);
}

TEST_CASE("orbital period and return-to-start") {
    // Kepler with mu = 398600.4418, a = 6971 km
    double period = orbital_period_s(600.0);
    CHECK(period == doctest::Approx(5792.33).epsilon(1e-4));

    OrbitalElements el;
    el.radius_km = EARTH_RADIUS_KM + 600.0;
    el.inclination_rad = 50.0 * DEG2RAD;
    el.raan_rad = 1.0;
    el.arg_lat0_rad = 0.3;
    el.mean_motion_rad_s = std::sqrt(EARTH_MU_KM3_S2 / std::pow(el.radius_km, 3));
    // compare in the inertial frame: undo the earth-rotation applied at t = T
    SatelliteState a = propagate_one(el, 0.0);
    SatelliteState b = propagate_one(el, period);
    double th = EARTH_ROTATION_RAD_S * period;
    Vec3 b_eci{std::cos(th) * b.position_ecef_km.x - std::sin(th) * b.position_ecef_km.y,
               std::sin(th) * b.position_ecef_km.x + std::cos(th) * b.position_ecef_km.y,
               b.position_ecef_km.z};
    CHECK(norm(b_eci - a.position_ecef_km) < 1.0);  // within 1 km after one period
}

TEST_CASE("elevation angle") {
    Vec3 cell = lat_lon_to_ecef(0.0, 0.0);
    SUBCASE("zenith") {
        Vec3 sat = lat_lon_to_ecef(0.0, 0.0, EARTH_RADIUS_KM + 600.0);
        CHECK(elevation_angle_deg(cell, sat) == doctest::Approx(90.0));
    }
    SUBCASE("horizon plane") {
        // a point in the local horizon plane: tangent direction from the cell
        Vec3 east{0.0, 1.0, 0.0};
        Vec3 sat = cell + 500.0 * east;
        CHECK(elevation_angle_deg(cell, sat) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("satellite 5 degrees east at 600 km") {
        Vec3 sat = lat_lon_to_ecef(0.0, 5.0, EARTH_RADIUS_KM + 600.0);
        CHECK(elevation_angle_deg(cell, sat) == doctest::Approx(43.3467).epsilon(1e-4));
    }
}

TEST_CASE("off-axis angles") {
    Vec3 victim = lat_lon_to_ecef(0.0, 0.0);
    Vec3 sat_above = lat_lon_to_ecef(0.0, 0.0, EARTH_RADIUS_KM + 600.0);

    SUBCASE("tx: boresight on victim is zero") {
        Vec3 bore = beam_boresight(sat_above, victim);
        CHECK(offaxis_tx_deg(bore, sat_above, victim) == doctest::Approx(0.0));
    }
    SUBCASE("tx: antiparallel is 180") {
        Vec3 bore = normalized(sat_above - victim);
        CHECK(offaxis_tx_deg(bore, sat_above, victim) == doctest::Approx(180.0));
    }
    SUBCASE("tx: beam aimed 50 km away, sat overhead") {
        double ang = 50.0 / EARTH_RADIUS_KM;
        Vec3 target{EARTH_RADIUS_KM * std::cos(ang), EARTH_RADIUS_KM * std::sin(ang), 0.0};
        Vec3 bore = beam_boresight(sat_above, target);
        CHECK(offaxis_tx_deg(bore, sat_above, victim) ==
              doctest::Approx(std::atan(50.0 / 600.0) * RAD2DEG).epsilon(5e-3));
    }
    SUBCASE("rx: coincident satellites give zero") {
        CHECK(offaxis_rx_deg(sat_above, sat_above, victim) == doctest::Approx(0.0));
    }
    SUBCASE("rx: zenith vs horizon direction is 90") {
        Vec3 east{0.0, 1.0, 0.0};
        Vec3 at_horizon = victim + 800.0 * east;
        CHECK(offaxis_rx_deg(sat_above, at_horizon, victim) == doctest::Approx(90.0).epsilon(1e-9));
    }
    SUBCASE("rx: two satellites 10 degrees apart, cell under the first") {
        Vec3 s2 = lat_lon_to_ecef(0.0, 10.0, EARTH_RADIUS_KM + 600.0);
        CHECK(offaxis_rx_deg(sat_above, s2, victim) == doctest::Approx(67.796).epsilon(1e-4));
    }
    SUBCASE("rx symmetry") {
        rng::Stream st(42);
        for (int i = 0; i < 50; ++i) {
            Vec3 s1 = lat_lon_to_ecef(st.next_unit() * 120 - 60, st.next_unit() * 360 - 180,
                                      EARTH_RADIUS_KM + 400 + 2000 * st.next_unit());
            Vec3 s2 = lat_lon_to_ecef(st.next_unit() * 120 - 60, st.next_unit() * 360 - 180,
                                      EARTH_RADIUS_KM + 400 + 2000 * st.next_unit());
            double a = offaxis_rx_deg(s1, s2, victim);
            double b = offaxis_rx_deg(s2, s1, victim);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
            CHECK(a >= 0.0);
            CHECK(a <= 180.0);
        }
    }
}

TEST_CASE("cell grid layout") {
    CellGridSpec gs;
    gs.rows = 6;
    gs.cols = 7;
    gs.center_lat_deg = 26.67;
    gs.center_lon_deg = 110.6;
    gs.inter_center_km = 50.0;
    CellGrid g = build_cell_grid(gs);
    CHECK(g.cells.size() == 42);
    CHECK(g.cell_radius_km == doctest::Approx(50.0 / std::sqrt(3.0)));
    // adjacent centers in one row are inter_center apart (chord vs arc < 1e-3)
    double d = norm(g.cells[1].center_ecef_km - g.cells[0].center_ecef_km);
    CHECK(d == doctest::Approx(50.0).epsilon(1e-3));
    // hex row offset: first cell of row 1 sits between the first two of row 0
    double d2 = norm(g.cells[7 + 0].center_ecef_km - g.cells[0].center_ecef_km);
    CHECK(d2 == doctest::Approx(50.0).epsilon(1e-3));
}

TEST_CASE("visibility respects the elevation threshold") {
    ConstellationSpec spec;
    spec.orbit_count = 2;
    spec.sats_per_orbit = 3;
    spec.altitude_km = 2800.0;
    spec.inclination_deg = 40.0;
    spec.phasing_offset = 0.5;
    auto els = build_constellation(spec);
    CellGridSpec gs;
    gs.rows = 2;
    gs.cols = 5;
    gs.center_lat_deg = 26.67;
    gs.center_lon_deg = 110.6;
    CellGrid grid = build_cell_grid(gs);
    for (int f : {1, 7, 100}) {
        EpochGeometry geo = propagate(els, f, 1000.0, grid, 10.0);
        for (size_t c = 0; c < grid.cells.size(); ++c)
            for (size_t s = 0; s < els.size(); ++s)
                CHECK(static_cast<bool>(geo.visible[c][s]) == (geo.elevation_deg[c][s] >= 10.0));
    }
}

TEST_CASE("determinism and epoch-to-epoch continuity") {
    ConstellationSpec spec;
    spec.orbit_count = 3;
    spec.sats_per_orbit = 4;
    spec.altitude_km = 1200.0;
    spec.inclination_deg = 53.0;
    auto els = build_constellation(spec);
    CellGridSpec gs;
    gs.rows = 1;
    gs.cols = 2;
    CellGrid grid = build_cell_grid(gs);

    EpochGeometry a = propagate(els, 17, 120.0, grid, 40.0);
    EpochGeometry b = propagate(els, 17, 120.0, grid, 40.0);
    for (size_t s = 0; s < els.size(); ++s) {
        CHECK(a.sats[s].position_ecef_km.x == b.sats[s].position_ecef_km.x);
        CHECK(a.sats[s].position_ecef_km.y == b.sats[s].position_ecef_km.y);
        CHECK(a.sats[s].position_ecef_km.z == b.sats[s].position_ecef_km.z);
    }

    // inertial motion over one epoch stays under orbital_speed * dt + 1 m
    double dt = 0.120;
    double v = std::sqrt(EARTH_MU_KM3_S2 / els[0].radius_km);
    EpochGeometry c = propagate(els, 18, 120.0, grid, 40.0);
    double th = EARTH_ROTATION_RAD_S * dt;
    for (size_t s = 0; s < els.size(); ++s) {
        Vec3 p1 = a.sats[s].position_ecef_km;
        Vec3 p2 = c.sats[s].position_ecef_km;
        // rotate p2 back into p1's earth-fixed frame to compare inertially
        Vec3 p2i{std::cos(th) * p2.x - std::sin(th) * p2.y,
                 std::sin(th) * p2.x + std::cos(th) * p2.y, p2.z};
        CHECK(norm(p2i - p1) <= v * dt + 1e-3);
    }
}

TEST_CASE("remaining visibility epochs") {
    ConstellationSpec spec;
    spec.orbit_count = 1;
    spec.sats_per_orbit = 1;
    spec.altitude_km = 600.0;
    spec.inclination_deg = 0.0;
    auto els = build_constellation(spec);
    CellGridSpec gs;
    gs.center_lat_deg = 0.0;
    gs.center_lon_deg = 0.0;
    CellGrid grid = build_cell_grid(gs);
    // equatorial satellite starts overhead and drifts away
    int n = remaining_visibility_epochs(els, grid, 0, 0, 1, 1000.0, 40.0, 5000);
    CHECK(n > 0);
    CHECK(n < 5000);
    // not visible -> 0
    OrbitalElements far = els[0];
    far.arg_lat0_rad = PI;  // antipode
    int m = remaining_visibility_epochs({far}, grid, 0, 0, 1, 1000.0, 40.0, 100);
    CHECK(m == 0);
}
