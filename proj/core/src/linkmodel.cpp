#include "leobeam/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leobeam {

double AntennaConfig::theta_th_deg() const {
    // dish diameter in wavelengths
    double ratio = ue_dish_diameter_m / wavelength_m;
    if (ratio >= 50.0) return std::max(1.0, 100.0 / ratio);
    return std::max(2.0, 144.0 * std::pow(ratio, -1.09));
}

double g_user_dbi(double theta_deg, const AntennaConfig& cfg) {
    if (theta_deg < 0.0 || theta_deg > 180.0)
        throw std::invalid_argument("g_user: off-axis angle must be in [0, 180] deg");
    double th = cfg.theta_th_deg();
    if (theta_deg < th) return cfg.g_user_boresight_dbi;
    if (theta_deg < 44.0) return 36.0 - 25.0 * std::log10(theta_deg);
    if (theta_deg < 75.0) return -5.0;
    return 0.0;
}

double g_beam_dbi(double theta_deg, const AntennaConfig& cfg) {
    return theta_deg < cfg.theta_3db_deg ? cfg.g_max_dbi : cfg.g_min_dbi;
}

SpectrumPlan make_spectrum_plan(const std::vector<int>& beams_per_satellite, int subband_count,
                                double beam_bandwidth_hz, double center_frequency_hz) {
    if (beams_per_satellite.empty()) throw std::invalid_argument("spectrum: need >= 1 satellite");
    SpectrumPlan p;
    p.sat_count = static_cast<int>(beams_per_satellite.size());
    p.subband_count = subband_count;
    p.beam_bandwidth_hz = beam_bandwidth_hz;
    p.center_frequency_hz = center_frequency_hz;
    int id = 0;
    for (int s = 0; s < p.sat_count; ++s) {
        int n = beams_per_satellite[s];
        if (n < 1) throw std::invalid_argument("spectrum: each satellite needs >= 1 beam");
        if (subband_count < n)
            throw std::invalid_argument(
                "spectrum: subband_count must cover each satellite's beams (distinct bands)");
        p.beams_per_sat = std::max(p.beams_per_sat, n);
        p.sat_first.push_back(id);
        for (int j = 0; j < n; ++j) p.beams.push_back({id++, s, j});
    }
    p.sat_first.push_back(id);
    return p;
}

SpectrumPlan make_spectrum_plan(int sat_count, int beams_per_sat, int subband_count,
                                double beam_bandwidth_hz, double center_frequency_hz) {
    if (sat_count < 1) throw std::invalid_argument("spectrum: counts must be >= 1");
    return make_spectrum_plan(std::vector<int>(sat_count, beams_per_sat), subband_count,
                              beam_bandwidth_hz, center_frequency_hz);
}

double free_space_path_loss_db(double distance_km, double wavelength_m) {
    return 20.0 * std::log10(4.0 * PI * distance_km * 1e3 / wavelength_m);
}

double channel_gain_linear(const Vec3& sat_pos, const Vec3& cell_center,
                           double wavelength_m, double margin_db) {
    double d_m = slant_range_km(sat_pos, cell_center) * 1e3;
    if (!(d_m > 0.0)) throw std::invalid_argument("channel_gain: slant range must be > 0");
    double f = wavelength_m / (4.0 * PI * d_m);
    return f * f * std::pow(10.0, -margin_db / 10.0);
}

double required_tx_power_dbw(const Vec3& cell_center, const Vec3& sat_pos,
                             const LinkBudget& budget, const AntennaConfig& cfg,
                             double wavelength_m) {
    double h = channel_gain_linear(sat_pos, cell_center, wavelength_m, budget.atmospheric_margin_db);
    return budget.target_snr_db + budget.noise_power_dbw - cfg.g_max_dbi -
           cfg.g_user_boresight_dbi - 10.0 * std::log10(h);
}

double inr_db(const Vec3& cell_center, const Vec3& serving_sat_pos,
              const std::vector<ActiveTransmission>& interferers,
              const LinkBudget& budget, const AntennaConfig& cfg, double wavelength_m) {
    if (interferers.empty()) return -std::numeric_limits<double>::infinity();
    // accumulate in the linear domain, convert once
    double total_w = 0.0;
    for (const auto& tx : interferers) {
        double theta_tr = offaxis_tx_deg(tx.boresight_unit, tx.sat_pos, cell_center);
        double theta_re = offaxis_rx_deg(serving_sat_pos, tx.sat_pos, cell_center);
        double h = channel_gain_linear(tx.sat_pos, cell_center, wavelength_m,
                                       budget.atmospheric_margin_db);
        double gain_db = tx.tx_power_dbw + g_beam_dbi(theta_tr, cfg) + g_user_dbi(theta_re, cfg);
        total_w += std::pow(10.0, gain_db / 10.0) * h;
    }
    return 10.0 * std::log10(total_w) - budget.noise_power_dbw;
}

double gain_threshold_db(double inr_threshold_db, double target_snr_db, int s_max,
                         double h_min, double g_beam0_dbi, double g_user0_dbi) {
    if (!(h_min > 0.0)) throw std::invalid_argument("gain_threshold: h_min must be > 0");
    if (s_max < 1) throw std::invalid_argument("gain_threshold: s_max must be >= 1");
    return inr_threshold_db - target_snr_db - 10.0 * std::log10(static_cast<double>(s_max)) +
           g_beam0_dbi + g_user0_dbi + 10.0 * std::log10(h_min);
}

double gain_threshold_db(const LinkBudget& budget, const AntennaConfig& cfg) {
    return gain_threshold_db(budget.inr_threshold_db, budget.target_snr_db, budget.s_max,
                             budget.h_min, cfg.g_max_dbi, cfg.g_user_boresight_dbi);
}

std::vector<std::array<int, 4>> InterferenceTupleSet::sorted_tuples() const {
    std::vector<std::array<int, 4>> out;
    out.reserve(tuples.size());
    for (uint64_t k : tuples) {
        out.push_back({static_cast<int>((k >> 48) & 0xffff), static_cast<int>((k >> 32) & 0xffff),
                       static_cast<int>((k >> 16) & 0xffff), static_cast<int>(k & 0xffff)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

InterferenceTupleSet build_tuple_set(const EpochGeometry& geo, const CellGrid& grid,
                                     const SpectrumPlan& spectrum, const LinkBudget& budget,
                                     const AntennaConfig& cfg) {
    const double g_th = gain_threshold_db(budget, cfg);
    const int C = static_cast<int>(grid.cells.size());

    // candidate (cell, beam) pairs: the beam's satellite must be visible
    struct Candidate {
        int cell, beam, sat;
        Vec3 boresight;  // beam aimed at its candidate cell
    };
    std::vector<Candidate> cand;
    for (int c = 0; c < C; ++c) {
        for (const auto& b : spectrum.beams) {
            if (!geo.visible[c][b.sat_id]) continue;
            cand.push_back({c, b.beam_id, b.sat_id,
                            beam_boresight(geo.sats[b.sat_id].position_ecef_km,
                                           grid.cells[c].center_ecef_km)});
        }
    }

    InterferenceTupleSet jf;
    jf.epoch_index = geo.epoch_index;
    auto victim_test = [&](const Candidate& victim, const Candidate& itf) {
        // gain product seen by the victim when itf's beam transmits toward its own cell
        double theta_tr = offaxis_tx_deg(itf.boresight, geo.sats[itf.sat].position_ecef_km,
                                         grid.cells[victim.cell].center_ecef_km);
        double theta_re = offaxis_rx_deg(geo.sats[victim.sat].position_ecef_km,
                                         geo.sats[itf.sat].position_ecef_km,
                                         grid.cells[victim.cell].center_ecef_km);
        return g_beam_dbi(theta_tr, cfg) + g_user_dbi(theta_re, cfg) >= g_th;
    };
    for (size_t i = 0; i < cand.size(); ++i) {
        for (size_t j = i + 1; j < cand.size(); ++j) {
            const Candidate &a = cand[i], &b = cand[j];
            if (a.cell == b.cell) continue;
            if (a.sat == b.sat) continue;  // distinct subbands within a satellite
            if (!spectrum.co_frequency(a.beam, b.beam)) continue;
            if (victim_test(a, b) || victim_test(b, a))
                jf.insert_symmetric(a.cell, a.beam, b.cell, b.beam);
        }
    }
    return jf;
}

}  // namespace leobeam
