#pragma once

#include <cstdint>
#include <vector>

// Walker constellation, earth-fixed hex cell grid, circular two-body
// propagation and the angle machinery (elevation, off-axis angles) the link
// model is built on. Spherical Earth, uniform rotation, no perturbations.
namespace leobeam {

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double DEG2RAD = PI / 180.0;
inline constexpr double RAD2DEG = 180.0 / PI;
inline constexpr double EARTH_RADIUS_KM = 6371.0;
inline constexpr double EARTH_MU_KM3_S2 = 398600.4418;
inline constexpr double EARTH_ROTATION_RAD_S = 7.2921159e-5;
inline constexpr double SPEED_OF_LIGHT_M_S = 299792458.0;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v);
// robust near 0 and 180 (atan2 of cross/dot), result in degrees
double angle_between_deg(const Vec3& a, const Vec3& b);

Vec3 lat_lon_to_ecef(double lat_deg, double lon_deg, double radius_km = EARTH_RADIUS_KM);

struct ConstellationSpec {
    int orbit_count = 1;
    int sats_per_orbit = 1;
    double altitude_km = 600.0;
    double inclination_deg = 50.0;
    // phase offset between adjacent planes as a fraction of the in-plane
    // spacing; Walker-delta F corresponds to F / orbit_count
    double phasing_offset = 0.0;
    double epoch_duration_ms = 120.0;
    double raan0_deg = 0.0;
    double arg_lat0_deg = 0.0;
};

struct OrbitalElements {
    int sat_id = 0;
    double radius_km = 0.0;
    double inclination_rad = 0.0;
    double raan_rad = 0.0;
    double arg_lat0_rad = 0.0;      // argument of latitude at t = 0
    double mean_motion_rad_s = 0.0;
};

std::vector<OrbitalElements> build_constellation(const ConstellationSpec& spec);
double orbital_period_s(double altitude_km);

struct Cell {
    int id = 0;
    Vec3 center_ecef_km;
    double mean_arrival_rate = 0.0;  // packets / epoch
};

struct CellGridSpec {
    int rows = 1;
    int cols = 1;
    double center_lat_deg = 0.0;
    double center_lon_deg = 0.0;
    double inter_center_km = 50.0;
    double cell_radius_km = 0.0;     // <=0: inter_center_km / sqrt(3)
};

struct CellGrid {
    std::vector<Cell> cells;
    int rows = 0, cols = 0;
    double center_lat_deg = 0.0, center_lon_deg = 0.0;
    double inter_center_km = 0.0;
    double cell_radius_km = 0.0;
};

// Hex-packed grid laid out on the local tangent plane then mapped to the
// sphere; odd rows are shifted half a spacing east.
CellGrid build_cell_grid(const CellGridSpec& spec);

struct SatelliteState {
    int sat_id = 0;
    Vec3 position_ecef_km;
    Vec3 velocity_ecef_km_s;
};

struct EpochGeometry {
    int epoch_index = 1;
    std::vector<SatelliteState> sats;
    std::vector<std::vector<double>> elevation_deg;  // [cell][sat]
    std::vector<std::vector<uint8_t>> visible;       // rho_{c,s,f}
    int visible_count(int cell) const;
};

SatelliteState propagate_one(const OrbitalElements& el, double t_s);

// Epoch f snapshot at t = (f-1) * epoch_duration. Positions are held fixed
// within the epoch.
EpochGeometry propagate(const std::vector<OrbitalElements>& elements, int epoch_index,
                        double epoch_duration_ms, const CellGrid& grid,
                        double min_elevation_deg);

double elevation_angle_deg(const Vec3& cell_center_ecef, const Vec3& sat_pos_ecef);
double slant_range_km(const Vec3& sat_pos, const Vec3& cell_center);

// unit vector from the satellite toward the cell it serves
Vec3 beam_boresight(const Vec3& sat_pos, const Vec3& target_cell_center);

// transmit-side off-axis angle: interfering beam boresight vs the satellite ->
// victim-cell direction
double offaxis_tx_deg(const Vec3& boresight_unit, const Vec3& sat_pos, const Vec3& victim_cell_center);

// receive-side off-axis angle at the cell: serving-satellite direction vs
// interfering-satellite direction; 0 when the two satellites coincide
double offaxis_rx_deg(const Vec3& serving_sat_pos, const Vec3& interfering_sat_pos, const Vec3& cell_center);

// consecutive epochs (including `from_epoch`) during which `sat` stays above
// the elevation threshold at `cell`, capped at `max_epochs`
int remaining_visibility_epochs(const std::vector<OrbitalElements>& elements, const CellGrid& grid,
                                int cell, int sat, int from_epoch, double epoch_duration_ms,
                                double min_elevation_deg, int max_epochs);

}  // namespace leobeam
