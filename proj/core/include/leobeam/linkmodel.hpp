#pragma once

#include <array>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "leobeam/geometry.hpp"

// Antenna gain masks, link budget, SNR/INR arithmetic and the off-axis-angle
// interference tuple set that stands in for the raw per-epoch INR constraints.
namespace leobeam {

struct AntennaConfig {
    double g_max_dbi = 38.5;             // beam peak gain
    double g_min_dbi = 8.5;              // max side-lobe gain (peak - 30 dB)
    double theta_3db_deg = 4.128;        // beam 3 dB half-angle
    double g_user_boresight_dbi = 35.0;  // G_user(0); mask below theta_th returns this
    double ue_dish_diameter_m = 0.6;
    double wavelength_m = 0.009993081933333333;

    // inner edge of the 36 - 25 log10(theta) branch; ITU-style, keyed on the
    // dish diameter in wavelengths
    double theta_th_deg() const;
};

// Receive mask: 36 - 25 log10(theta) on [theta_th, 44), -5 dBi on [44, 75),
// 0 dBi on [75, 180]; boresight gain below theta_th. Rejects theta outside
// [0, 180].
double g_user_dbi(double theta_deg, const AntennaConfig& cfg);

// Transmit mask: G_max inside the 3 dB cone, G_min outside (closed at 3 dB).
double g_beam_dbi(double theta_deg, const AntennaConfig& cfg);

struct SpectrumBeam {
    int beam_id = 0;
    int sat_id = 0;
    int subband = 0;
};

// Each satellite's beams occupy pairwise-distinct subbands; the subband set
// is shared by all satellites. Beam ids are contiguous per satellite.
struct SpectrumPlan {
    int sat_count = 0;
    int beams_per_sat = 0;  // max over satellites (B_s^max)
    int subband_count = 0;
    double beam_bandwidth_hz = 5e8;
    double center_frequency_hz = 3e10;
    std::vector<SpectrumBeam> beams;
    std::vector<int> sat_first;  // index of each satellite's first beam, plus sentinel

    int beam_count() const { return static_cast<int>(beams.size()); }
    int first_beam_of(int sat) const { return sat_first[sat]; }
    int beam_count_of(int sat) const { return sat_first[sat + 1] - sat_first[sat]; }
    const SpectrumBeam& beam(int id) const { return beams[id]; }
    bool co_frequency(int b1, int b2) const { return beams[b1].subband == beams[b2].subband; }
    double wavelength_m() const { return SPEED_OF_LIGHT_M_S / center_frequency_hz; }
};

SpectrumPlan make_spectrum_plan(int sat_count, int beams_per_sat, int subband_count,
                                double beam_bandwidth_hz, double center_frequency_hz);
// heterogeneous beam counts per satellite
SpectrumPlan make_spectrum_plan(const std::vector<int>& beams_per_satellite, int subband_count,
                                double beam_bandwidth_hz, double center_frequency_hz);

struct LinkBudget {
    double target_snr_db = 20.0;
    double noise_power_dbw = -117.0;
    double inr_threshold_db = -10.0;
    double atmospheric_margin_db = 0.0;
    double h_min = 0.5;  // min serving/victim channel-gain ratio, linear
    int s_max = 8;       // max simultaneously visible satellites
};

double free_space_path_loss_db(double distance_km, double wavelength_m);

// h = (lambda / 4 pi d)^2 * 10^(-margin/10), linear
double channel_gain_linear(const Vec3& sat_pos, const Vec3& cell_center,
                           double wavelength_m, double margin_db);

// P_b (dBW) achieving the target SNR at the cell center, inverted from the
// boresight link equation
double required_tx_power_dbw(const Vec3& cell_center, const Vec3& sat_pos,
                             const LinkBudget& budget, const AntennaConfig& cfg,
                             double wavelength_m);

struct ActiveTransmission {
    int beam_id = 0;
    Vec3 sat_pos;
    Vec3 boresight_unit;
    double tx_power_dbw = 0.0;
};

// Aggregate INR (dB) at a cell served from serving_sat_pos; interferers are
// assumed co-frequency and simultaneously active. -inf when the list is empty.
double inr_db(const Vec3& cell_center, const Vec3& serving_sat_pos,
              const std::vector<ActiveTransmission>& interferers,
              const LinkBudget& budget, const AntennaConfig& cfg, double wavelength_m);

// pairwise angle-rule threshold G^th (dB):
//   INR_th - SNR - 10 log10(S_max) + G_beam(0) + G_user(0) + 10 log10(h_min)
double gain_threshold_db(double inr_threshold_db, double target_snr_db, int s_max,
                         double h_min, double g_beam0_dbi, double g_user0_dbi);
double gain_threshold_db(const LinkBudget& budget, const AntennaConfig& cfg);

struct InterferenceTupleSet {
    int epoch_index = 1;
    std::unordered_set<uint64_t> tuples;

    static uint64_t key(int c, int b, int c2, int b2) {
        return (static_cast<uint64_t>(static_cast<uint16_t>(c)) << 48) |
               (static_cast<uint64_t>(static_cast<uint16_t>(b)) << 32) |
               (static_cast<uint64_t>(static_cast<uint16_t>(c2)) << 16) |
               static_cast<uint64_t>(static_cast<uint16_t>(b2));
    }
    bool conflicts(int c, int b, int c2, int b2) const {
        return tuples.count(key(c, b, c2, b2)) != 0;
    }
    void insert_symmetric(int c, int b, int c2, int b2) {
        tuples.insert(key(c, b, c2, b2));
        tuples.insert(key(c2, b2, c, b));
    }
    size_t size() const { return tuples.size(); }
    // canonical ordering for dumps and tests
    std::vector<std::array<int, 4>> sorted_tuples() const;
};

// (c,b,c',b') is included iff b,b' share a subband on different satellites,
// both serving satellites are visible to their cells, and the gain-product
// angle test fails for either victim. Symmetric by construction.
InterferenceTupleSet build_tuple_set(const EpochGeometry& geo, const CellGrid& grid,
                                     const SpectrumPlan& spectrum, const LinkBudget& budget,
                                     const AntennaConfig& cfg);

}  // namespace leobeam
