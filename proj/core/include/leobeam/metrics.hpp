#pragma once

#include <vector>

#include "leobeam/plan.hpp"

// Revisit-time and handover accounting, the eta auxiliary ratio, and the
// per-epoch drift-plus-penalty objective gamma_f.
namespace leobeam {

// D_{c,f} = t_start + T - t_end_prev - 1
double revisit_time(int t_start, int t_end_prev, int T);

// delta_f = sum_c (1 - sum_s beta_{c,s,f-1} beta_{c,s,f}); -1 marks unserved,
// which counts as a change on either side
int handover_count(const std::vector<int>& sat_prev, const std::vector<int>& sat_now);

// Carries the committed history up to some epoch f and scores candidate plans
// for epoch f+1. Unserved epochs book D = 0; the whole gap since the last
// actual service end is booked at the next service epoch. D_{c,1} = 0 and
// delta_1 = 0 by definition.
class MetricsTracker {
  public:
    static MetricsTracker create(int cell_count, int slots_per_epoch, double d_max);

    int committed_epochs() const { return committed_; }
    int cell_count() const { return cell_count_; }
    int planning_epoch() const { return committed_ + 1; }

    double dtilde(int cell) const;   // running average revisit, Eq. 17
    double delta_tilde() const;
    double mean_dtilde() const;
    long long handovers_cum() const { return handovers_cum_; }
    const std::vector<int>& current_sat() const { return current_sat_; }
    int last_end_slot(int cell) const { return last_end_slot_[cell]; }
    int last_served_epoch(int cell) const { return last_served_epoch_[cell]; }

    // eta_{c,f} for the epoch being planned (history through f-1), Eq. 19
    double eta(int cell) const;

    // sum_c Dtilde_c / (1 + C - delta_tilde), the running P0 objective
    double p0_objective() const;

    // revisit the metric books if the cell is served at t_start in the
    // planning epoch (spans skipped epochs)
    double booked_revisit(int cell, int t_start) const;

    // Eq. 34 vertex weight; the local D term uses the last actual end slot
    double vertex_weight(int cell, int t_start) const;

    struct CandidateEval {
        double gamma = 0.0;
        double delta_f = 0.0;
    };
    // gamma_f of a candidate plan for the planning epoch with Dtilde/delta
    // recomputed under that plan, history frozen (Eq. 24)
    CandidateEval evaluate(const BeamPlan& plan, const std::vector<double>& queues,
                           const std::vector<double>& rates, double tradeoff_v) const;

    struct CommitInfo {
        double delta_f = 0.0;
        int dmax_violations = 0;
    };
    CommitInfo commit(const BeamPlan& plan);

  private:
    int cell_count_ = 0;
    int slots_ = 1;
    double d_max_ = 0.0;
    int committed_ = 0;
    std::vector<double> d_sum_;           // sum of booked D per cell
    double delta_sum_ = 0.0;
    double eta_den_sum_ = 0.0;            // sum of (1 + C - delta_f')
    long long handovers_cum_ = 0;
    std::vector<int> last_end_slot_;      // T-1 virtual end before first service
    std::vector<int> last_served_epoch_;  // 0 before first service
    std::vector<int> current_sat_;        // beta of the last committed epoch

    double compute_delta(const BeamPlan& plan) const;
};

}  // namespace leobeam
