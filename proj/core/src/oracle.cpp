#include "leobeam/oracle.hpp"

#include <stdexcept>

namespace leobeam::oracle {

std::pair<double, std::vector<int>> exact_mwis(int n, const std::vector<double>& weights,
                                               const std::vector<std::pair<int, int>>& edges) {
    if (n < 0 || n > 24) throw std::invalid_argument("exact_mwis: n must be in [0, 24]");
    std::vector<uint32_t> neighbor(n, 0);
    for (auto [a, b] : edges) {
        neighbor[a] |= 1u << b;
        neighbor[b] |= 1u << a;
    }
    double best = 0.0;
    uint32_t best_set = 0;
    const uint32_t limit = n == 0 ? 1u : (1u << n);
    for (uint32_t set = 0; set < limit; ++set) {
        bool independent = true;
        double w = 0.0;
        for (int v = 0; v < n && independent; ++v) {
            if (!(set & (1u << v))) continue;
            if (neighbor[v] & set) independent = false;
            w += weights[v];
        }
        if (independent && w > best) {
            best = w;
            best_set = set;
        }
    }
    std::vector<int> chosen;
    for (int v = 0; v < n; ++v)
        if (best_set & (1u << v)) chosen.push_back(v);
    return {best, chosen};
}

double revisit_direct(int t_start, int t_end_prev, int T) {
    return static_cast<double>(t_start) + T - t_end_prev - 1;
}

double queue_update_direct(double q, double t, double r, double a) {
    double left = q - t * r;
    return (left > 0.0 ? left : 0.0) + a;
}

double eta_direct(const std::vector<double>& d_history, const std::vector<double>& delta_history,
                  int cell_count) {
    if (d_history.size() != delta_history.size())
        throw std::invalid_argument("eta_direct: history size mismatch");
    if (d_history.empty()) return 0.0;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < d_history.size(); ++i) {
        num += d_history[i];
        den += 1.0 + cell_count - delta_history[i];
    }
    return den != 0.0 ? num / den : 0.0;
}

double gamma_direct(const std::vector<double>& dtilde, const std::vector<double>& eta,
                    double delta_tilde, const std::vector<double>& rates,
                    const std::vector<double>& queues, const std::vector<double>& durations,
                    double tradeoff_v) {
    const size_t C = dtilde.size();
    double g = 0.0;
    for (size_t c = 0; c < C; ++c) {
        g += tradeoff_v * (dtilde[c] - eta[c] * (1.0 + static_cast<double>(C) - delta_tilde));
        g -= rates[c] * queues[c] * durations[c];
    }
    return g;
}

}  // namespace leobeam::oracle
