#include "leobeam/metrics.hpp"

#include <stdexcept>

namespace leobeam {

double revisit_time(int t_start, int t_end_prev, int T) {
    return static_cast<double>(t_start + T - t_end_prev - 1);
}

int handover_count(const std::vector<int>& sat_prev, const std::vector<int>& sat_now) {
    if (sat_prev.size() != sat_now.size())
        throw std::invalid_argument("handover_count: size mismatch");
    int d = 0;
    for (size_t c = 0; c < sat_prev.size(); ++c) {
        bool kept = sat_prev[c] >= 0 && sat_prev[c] == sat_now[c];
        d += kept ? 0 : 1;
    }
    return d;
}

MetricsTracker MetricsTracker::create(int cell_count, int slots_per_epoch, double d_max) {
    if (cell_count < 1 || slots_per_epoch < 1)
        throw std::invalid_argument("metrics: cell_count and slots_per_epoch must be >= 1");
    MetricsTracker t;
    t.cell_count_ = cell_count;
    t.slots_ = slots_per_epoch;
    t.d_max_ = d_max;
    t.d_sum_.assign(cell_count, 0.0);
    // virtual end at slot T-1 of "epoch 0" so first-epoch weights reduce to
    // D_max - t_start
    t.last_end_slot_.assign(cell_count, slots_per_epoch - 1);
    t.last_served_epoch_.assign(cell_count, 0);
    t.current_sat_.assign(cell_count, -1);
    return t;
}

double MetricsTracker::dtilde(int cell) const {
    return committed_ == 0 ? 0.0 : d_sum_[cell] / committed_;
}

double MetricsTracker::delta_tilde() const {
    return committed_ == 0 ? 0.0 : delta_sum_ / committed_;
}

double MetricsTracker::mean_dtilde() const {
    double s = 0.0;
    for (int c = 0; c < cell_count_; ++c) s += dtilde(c);
    return s / cell_count_;
}

double MetricsTracker::eta(int cell) const {
    if (committed_ == 0) return 0.0;  // eta_{c,1} = 0
    return d_sum_[cell] / eta_den_sum_;
}

double MetricsTracker::p0_objective() const {
    if (committed_ == 0) return 0.0;
    double num = 0.0;
    for (int c = 0; c < cell_count_; ++c) num += dtilde(c);
    return num / (1.0 + cell_count_ - delta_tilde());
}

double MetricsTracker::booked_revisit(int cell, int t_start) const {
    int fe = committed_ + 1;
    if (fe == 1) return 0.0;
    int epochs_since = fe - last_served_epoch_[cell];
    return static_cast<double>(t_start + epochs_since * slots_ - last_end_slot_[cell] - 1);
}

double MetricsTracker::vertex_weight(int cell, int t_start) const {
    int fe = committed_ + 1;
    double local = revisit_time(t_start, last_end_slot_[cell], slots_);
    return d_max_ - (d_sum_[cell] + local) / fe;
}

double MetricsTracker::compute_delta(const BeamPlan& plan) const {
    if (committed_ == 0) return 0.0;  // delta_1 = 0
    int d = 0;
    for (int c = 0; c < cell_count_; ++c) {
        const auto& a = plan.cells[c];
        bool kept = a.served() && current_sat_[c] == a.sat;
        d += kept ? 0 : 1;
    }
    return static_cast<double>(d);
}

MetricsTracker::CandidateEval MetricsTracker::evaluate(const BeamPlan& plan,
                                                       const std::vector<double>& queues,
                                                       const std::vector<double>& rates,
                                                       double tradeoff_v) const {
    if (static_cast<int>(plan.cells.size()) != cell_count_)
        throw std::invalid_argument("metrics: plan size mismatch");
    const int fe = committed_ + 1;
    const double delta_f = compute_delta(plan);
    const double delta_tilde_cand = (delta_sum_ + delta_f) / fe;

    double gamma = 0.0;
    for (int c = 0; c < cell_count_; ++c) {
        const auto& a = plan.cells[c];
        double booked = (a.served() && fe > 1) ? booked_revisit(c, a.t_start) : 0.0;
        double dtilde_cand = (d_sum_[c] + booked) / fe;
        gamma += tradeoff_v * (dtilde_cand - eta(c) * (1.0 + cell_count_ - delta_tilde_cand));
        gamma -= rates[c] * queues[c] * a.duration();
    }
    return {gamma, delta_f};
}

MetricsTracker::CommitInfo MetricsTracker::commit(const BeamPlan& plan) {
    if (static_cast<int>(plan.cells.size()) != cell_count_)
        throw std::invalid_argument("metrics: plan size mismatch");
    const int fe = committed_ + 1;
    CommitInfo info;
    info.delta_f = compute_delta(plan);

    for (int c = 0; c < cell_count_; ++c) {
        const auto& a = plan.cells[c];
        if (a.served()) {
            double booked = fe > 1 ? booked_revisit(c, a.t_start) : 0.0;
            d_sum_[c] += booked;
            if (booked >= d_max_) ++info.dmax_violations;
            last_end_slot_[c] = a.t_end;
            last_served_epoch_[c] = fe;
            current_sat_[c] = a.sat;
        } else {
            current_sat_[c] = -1;  // unserved epochs book D = 0
        }
    }
    delta_sum_ += info.delta_f;
    eta_den_sum_ += 1.0 + cell_count_ - info.delta_f;
    handovers_cum_ += static_cast<long long>(info.delta_f);
    ++committed_;
    return info;
}

}  // namespace leobeam
