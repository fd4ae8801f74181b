#pragma once

#include <string>
#include <vector>

#include "leobeam/scenario.hpp"

// Epoch loop: geometry -> tuple set -> scheduling -> queue update -> metrics,
// with crash-safe per-epoch persistence and paired-comparison support.
namespace leobeam {

struct EpochMetricsRow {
    int f = 0;
    double mean_revisit = 0.0;  // mean_c Dtilde_{c,f}
    double mean_queue = 0.0;    // mean_c Q_{c,f} (start of epoch)
    double delta_f = 0.0;
    long long handovers_cum = 0;
    double gamma = 0.0;
    double p0 = 0.0;
    int served_cells = 0;
    int dmax_violations = 0;
};

struct StageTimings {
    double geometry_s = 0.0;
    double tuple_set_s = 0.0;
    double scheduling_s = 0.0;
    double bookkeeping_s = 0.0;
};

struct RunSummary {
    std::string scenario_name;
    uint64_t scenario_hash = 0;
    uint64_t seed = 0;
    uint64_t traffic_seed = 0;
    int epochs = 0;
    int cells = 0;
    std::string time_frequency_scheme;
    std::string satellite_scheme;
    double tradeoff_v = 0.0;

    double mean_revisit_final = 0.0;
    double mean_queue = 0.0;
    double queue_p50 = 0.0, queue_p90 = 0.0, queue_p99 = 0.0;
    double final_queue_max_over_f = 0.0;  // max_c Q_{c,F} / F
    long long handover_total = 0;
    double handover_frequency = 0.0;
    double mean_p0 = 0.0;
    double mean_gamma = 0.0;
    double served_ratio = 0.0;
    long long dmax_violations_total = 0;

    // interference soundness audit (Eq. 7-8 against the angle rule)
    long long inr_checks = 0;
    long long inr_violations = 0;
    double max_inr_db = -999.0;
    long long precond_smax_violations = 0;
    long long precond_hmin_violations = 0;

    // Algorithm 2 descent instrumentation
    long long finetune_steps = 0;
    double finetune_max_delta = 0.0;

    StageTimings timings;
};

struct RunRecord {
    RunSummary summary;
    std::vector<EpochMetricsRow> rows;
    std::string output_dir;  // empty when outputs were not written
};

struct RunOptions {
    bool write_outputs = true;
    std::string output_dir_override;
};

// Runs the whole scenario. Throws on internal feasibility-guard failures.
RunRecord run_simulation(const Scenario& scenario, const RunOptions& options = {});

RunSummary load_run_summary(const std::string& run_dir);

struct ComparisonTable {
    std::vector<std::string> labels;
    std::vector<std::string> metrics;
    std::vector<std::vector<double>> values;  // [metric][record]
    bool paired_traffic = true;
    std::string render() const;
};

// Per-metric values and relative deltas vs the first record; flags unpaired
// traffic seeds.
ComparisonTable compare_runs(const std::vector<RunSummary>& records);

}  // namespace leobeam
