#include "leobeam/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace leobeam {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    if (n == 0.0) return {0.0, 0.0, 0.0};
    return (1.0 / n) * v;
}

double angle_between_deg(const Vec3& a, const Vec3& b) {
    double c = norm(cross(a, b));
    double d = dot(a, b);
    if (c == 0.0 && d == 0.0) return 0.0;  // degenerate zero vector
    return std::atan2(c, d) * RAD2DEG;
}

Vec3 lat_lon_to_ecef(double lat_deg, double lon_deg, double radius_km) {
    double lat = lat_deg * DEG2RAD, lon = lon_deg * DEG2RAD;
    return {radius_km * std::cos(lat) * std::cos(lon),
            radius_km * std::cos(lat) * std::sin(lon),
            radius_km * std::sin(lat)};
}

double orbital_period_s(double altitude_km) {
    double a = EARTH_RADIUS_KM + altitude_km;
    return 2.0 * PI * std::sqrt(a * a * a / EARTH_MU_KM3_S2);
}

std::vector<OrbitalElements> build_constellation(const ConstellationSpec& spec) {
    if (spec.orbit_count < 1) throw std::invalid_argument("constellation: orbit_count must be >= 1");
    if (spec.sats_per_orbit < 1) throw std::invalid_argument("constellation: sats_per_orbit must be >= 1");
    if (!(spec.altitude_km > 0.0)) throw std::invalid_argument("constellation: altitude_km must be > 0");
    if (spec.inclination_deg < 0.0 || spec.inclination_deg > 180.0)
        throw std::invalid_argument("constellation: inclination_deg must be in [0, 180]");

    const double a = EARTH_RADIUS_KM + spec.altitude_km;
    const double n = std::sqrt(EARTH_MU_KM3_S2 / (a * a * a));
    const double in_plane_step = 2.0 * PI / spec.sats_per_orbit;
    const double raan_step = 2.0 * PI / spec.orbit_count;

    std::vector<OrbitalElements> out;
    out.reserve(static_cast<size_t>(spec.orbit_count) * spec.sats_per_orbit);
    for (int p = 0; p < spec.orbit_count; ++p) {
        for (int k = 0; k < spec.sats_per_orbit; ++k) {
            OrbitalElements el;
            el.sat_id = p * spec.sats_per_orbit + k;
            el.radius_km = a;
            el.inclination_rad = spec.inclination_deg * DEG2RAD;
            el.raan_rad = spec.raan0_deg * DEG2RAD + p * raan_step;
            el.arg_lat0_rad = spec.arg_lat0_deg * DEG2RAD + k * in_plane_step +
                              p * spec.phasing_offset * in_plane_step;
            el.mean_motion_rad_s = n;
            out.push_back(el);
        }
    }
    return out;
}

SatelliteState propagate_one(const OrbitalElements& el, double t_s) {
    const double u = el.arg_lat0_rad + el.mean_motion_rad_s * t_s;
    const double cu = std::cos(u), su = std::sin(u);
    const double ci = std::cos(el.inclination_rad), si = std::sin(el.inclination_rad);
    const double co = std::cos(el.raan_rad), so = std::sin(el.raan_rad);

    // ECI position/velocity of a circular orbit, then rotate into the
    // earth-fixed frame by the accumulated rotation angle.
    Vec3 r_eci{el.radius_km * (cu * co - su * ci * so),
               el.radius_km * (cu * so + su * ci * co),
               el.radius_km * (su * si)};
    const double v = el.radius_km * el.mean_motion_rad_s;
    Vec3 v_eci{v * (-su * co - cu * ci * so),
               v * (-su * so + cu * ci * co),
               v * (cu * si)};

    const double theta = EARTH_ROTATION_RAD_S * t_s;
    const double ct = std::cos(theta), st = std::sin(theta);
    auto rot = [&](const Vec3& w) { return Vec3{ct * w.x + st * w.y, -st * w.x + ct * w.y, w.z}; };

    SatelliteState s;
    s.sat_id = el.sat_id;
    s.position_ecef_km = rot(r_eci);
    Vec3 v_rot = rot(v_eci);
    // transport term: v_ecef = R v_eci - omega x r_ecef
    s.velocity_ecef_km_s = {v_rot.x + EARTH_ROTATION_RAD_S * s.position_ecef_km.y,
                            v_rot.y - EARTH_ROTATION_RAD_S * s.position_ecef_km.x,
                            v_rot.z};
    return s;
}

double elevation_angle_deg(const Vec3& cell_center_ecef, const Vec3& sat_pos_ecef) {
    Vec3 up = normalized(cell_center_ecef);
    Vec3 d = sat_pos_ecef - cell_center_ecef;
    double r = norm(d);
    if (r == 0.0) return 90.0;
    double s = dot(d, up) / r;
    if (s > 1.0) s = 1.0;
    if (s < -1.0) s = -1.0;
    return std::asin(s) * RAD2DEG;
}

double slant_range_km(const Vec3& sat_pos, const Vec3& cell_center) {
    return norm(sat_pos - cell_center);
}

Vec3 beam_boresight(const Vec3& sat_pos, const Vec3& target_cell_center) {
    return normalized(target_cell_center - sat_pos);
}

double offaxis_tx_deg(const Vec3& boresight_unit, const Vec3& sat_pos, const Vec3& victim_cell_center) {
    return angle_between_deg(boresight_unit, victim_cell_center - sat_pos);
}

double offaxis_rx_deg(const Vec3& serving_sat_pos, const Vec3& interfering_sat_pos, const Vec3& cell_center) {
    if (norm(serving_sat_pos - interfering_sat_pos) < 1e-9) return 0.0;
    return angle_between_deg(serving_sat_pos - cell_center, interfering_sat_pos - cell_center);
}

CellGrid build_cell_grid(const CellGridSpec& spec) {
    if (spec.rows < 1 || spec.cols < 1) throw std::invalid_argument("grid: rows and cols must be >= 1");
    if (!(spec.inter_center_km > 0.0)) throw std::invalid_argument("grid: inter_center_km must be > 0");

    CellGrid g;
    g.rows = spec.rows;
    g.cols = spec.cols;
    g.center_lat_deg = spec.center_lat_deg;
    g.center_lon_deg = spec.center_lon_deg;
    g.inter_center_km = spec.inter_center_km;
    g.cell_radius_km = spec.cell_radius_km > 0.0 ? spec.cell_radius_km
                                                 : spec.inter_center_km / std::sqrt(3.0);

    const double row_step = spec.inter_center_km * std::sqrt(3.0) / 2.0;
    g.cells.reserve(static_cast<size_t>(spec.rows) * spec.cols);
    for (int r = 0; r < spec.rows; ++r) {
        for (int c = 0; c < spec.cols; ++c) {
            double east = (c - (spec.cols - 1) / 2.0) * spec.inter_center_km +
                          ((r % 2) ? spec.inter_center_km / 2.0 : 0.0);
            double north = (r - (spec.rows - 1) / 2.0) * row_step;
            double lat = spec.center_lat_deg + (north / EARTH_RADIUS_KM) * RAD2DEG;
            // east offsets measured along the cell's own parallel
            double lon = spec.center_lon_deg +
                         (east / (EARTH_RADIUS_KM * std::cos(lat * DEG2RAD))) * RAD2DEG;
            Cell cell;
            cell.id = r * spec.cols + c;
            cell.center_ecef_km = lat_lon_to_ecef(lat, lon);
            g.cells.push_back(cell);
        }
    }
    return g;
}

int EpochGeometry::visible_count(int cell) const {
    int n = 0;
    for (uint8_t v : visible[cell]) n += v;
    return n;
}

EpochGeometry propagate(const std::vector<OrbitalElements>& elements, int epoch_index,
                        double epoch_duration_ms, const CellGrid& grid,
                        double min_elevation_deg) {
    if (epoch_index < 1) throw std::invalid_argument("propagate: epoch_index must be >= 1");
    const double t = (epoch_index - 1) * epoch_duration_ms * 1e-3;

    EpochGeometry geo;
    geo.epoch_index = epoch_index;
    geo.sats.reserve(elements.size());
    for (const auto& el : elements) geo.sats.push_back(propagate_one(el, t));

    const size_t C = grid.cells.size(), S = elements.size();
    geo.elevation_deg.assign(C, std::vector<double>(S, 0.0));
    geo.visible.assign(C, std::vector<uint8_t>(S, 0));
    for (size_t c = 0; c < C; ++c) {
        for (size_t s = 0; s < S; ++s) {
            double el = elevation_angle_deg(grid.cells[c].center_ecef_km, geo.sats[s].position_ecef_km);
            geo.elevation_deg[c][s] = el;
            geo.visible[c][s] = el >= min_elevation_deg ? 1 : 0;
        }
    }
    return geo;
}

int remaining_visibility_epochs(const std::vector<OrbitalElements>& elements, const CellGrid& grid,
                                int cell, int sat, int from_epoch, double epoch_duration_ms,
                                double min_elevation_deg, int max_epochs) {
    const Vec3& center = grid.cells[cell].center_ecef_km;
    int count = 0;
    for (int k = 0; k < max_epochs; ++k) {
        double t = (from_epoch - 1 + k) * epoch_duration_ms * 1e-3;
        SatelliteState s = propagate_one(elements[sat], t);
        if (elevation_angle_deg(center, s.position_ecef_km) < min_elevation_deg) break;
        ++count;
    }
    return count;
}

}  // namespace leobeam
