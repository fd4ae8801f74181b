#pragma once

#include <cstdint>
#include <vector>

namespace leobeam {

struct TrafficSpec {
    std::vector<double> mean_rates;  // a_c, packets / epoch
    double packet_size_bits = 1e6;
    uint64_t rng_seed = 0;
};

// Independent Poisson(a_c) draws, reproducible per (seed, cell, epoch) and
// invariant to whatever else consumes randomness.
std::vector<double> draw_arrivals(const TrafficSpec& spec, int epoch_index);

// Shannon-capped rate in packets per slot; 0 when the cell has no serving
// satellite (handled by the caller passing snr for served cells only).
double service_rate_packets_per_slot(double snr_db, double beam_bandwidth_hz,
                                     double slot_duration_s, double packet_size_bits);

struct QueueState {
    std::vector<double> q;  // Q_{c,f}, fractional packets
    int epoch_index = 1;
};

// Q_{c,f+1} = max(Q_{c,f} - t_{c,f} R_{c,f}, 0) + A_{c,f}
QueueState update_queues(const QueueState& state, const std::vector<int>& service_slots,
                         const std::vector<double>& rates, const std::vector<double>& arrivals);

}  // namespace leobeam
