#include "leobeam/traffic.hpp"

#include <cmath>
#include <stdexcept>

#include "leobeam/rng.hpp"

namespace leobeam {

std::vector<double> draw_arrivals(const TrafficSpec& spec, int epoch_index) {
    std::vector<double> a(spec.mean_rates.size(), 0.0);
    for (size_t c = 0; c < spec.mean_rates.size(); ++c) {
        rng::Stream s(rng::stream_key(spec.rng_seed, "arrivals", c, static_cast<uint64_t>(epoch_index)));
        a[c] = rng::poisson(s, spec.mean_rates[c]);
    }
    return a;
}

double service_rate_packets_per_slot(double snr_db, double beam_bandwidth_hz,
                                     double slot_duration_s, double packet_size_bits) {
    if (!(packet_size_bits > 0.0)) throw std::invalid_argument("traffic: packet_size_bits must be > 0");
    double snr = std::pow(10.0, snr_db / 10.0);
    return beam_bandwidth_hz * std::log2(1.0 + snr) * slot_duration_s / packet_size_bits;
}

QueueState update_queues(const QueueState& state, const std::vector<int>& service_slots,
                         const std::vector<double>& rates, const std::vector<double>& arrivals) {
    const size_t C = state.q.size();
    if (service_slots.size() != C || rates.size() != C || arrivals.size() != C)
        throw std::invalid_argument("update_queues: size mismatch");
    QueueState next;
    next.epoch_index = state.epoch_index + 1;
    next.q.resize(C);
    for (size_t c = 0; c < C; ++c) {
        double drained = state.q[c] - service_slots[c] * rates[c];
        next.q[c] = (drained > 0.0 ? drained : 0.0) + arrivals[c];
    }
    return next;
}

}  // namespace leobeam
