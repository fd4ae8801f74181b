#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leobeam/geometry.hpp"
#include "leobeam/linkmodel.hpp"
#include "leobeam/metrics.hpp"
#include "leobeam/plan.hpp"

// The three-stage beam manager: conflict-graph serving-beam allocation,
// beam service time fine-tuning, and simulated-annealing serving-satellite
// allocation.
namespace leobeam {

struct SaConfig {
    double t1 = 100.0;  // initial temperature
    double t2 = 1.0;    // final temperature
    double rho = 0.95;  // cooling factor
    int moves_per_temperature = 1;
    uint64_t rng_seed = 0;
};

// Immutable per-epoch inputs shared by the schedulers and baselines.
struct EpochContext {
    const EpochGeometry* geo = nullptr;
    const CellGrid* grid = nullptr;
    const SpectrumPlan* spectrum = nullptr;
    const InterferenceTupleSet* jf = nullptr;
    const MetricsTracker* tracker = nullptr;
    const std::vector<double>* queues = nullptr;  // Q_{c,f}
    const std::vector<double>* rates = nullptr;   // R_{c,f}, packets/slot
    int T = 15;
    double d_max = 50.0;
    double tradeoff_v = 1000.0;
    int f = 1;  // epoch being planned

    int cell_count() const { return static_cast<int>(grid->cells.size()); }
};

struct ConflictVertex {
    int cell = 0;
    int beam = 0;
    int t_start = 1;
    int duration = 1;
    double weight = 0.0;  // Eq. 34
    double tau = 0.0;     // Eq. 35 weight ratio
};

struct ConflictGraph {
    std::vector<ConflictVertex> vertices;
    std::vector<std::vector<int32_t>> adj;

    int vertex_count_for_cell(int cell) const;
    bool has_edge(int i, int j) const;
};

// One vertex per feasible (cell, beam-of-serving-satellite, start slot) with
// duration fixed; edges: same cell, same beam with overlapping windows, or an
// interference tuple with overlapping windows.
ConflictGraph build_conflict_graph(const EpochContext& ctx, const std::vector<int>& serving_sat,
                                   const std::vector<int>& durations);

// Greedy descending-weight-ratio independent set; maximal by construction.
// Returns selected vertex indices in pick order.
std::vector<int> greedy_mwis(const ConflictGraph& graph);

// Algorithm 1: graph + greedy MWIS + one-slot fallback for unselected cells.
BeamPlan serving_beam_allocation(const EpochContext& ctx, const std::vector<int>& serving_sat,
                                 const std::vector<int>& durations);

struct FineTuneStep {
    int cell_end = -1;    // cell whose t_end moved
    int cell_start = -1;  // cell whose t_start moved
    double objective_before = 0.0;
    double objective_after = 0.0;
    double delta() const { return objective_after - objective_before; }
};

// Algorithm 2: per-subband pair fine-tuning; each step is an exact argmin over
// the feasible box with the incumbent included, so gamma never increases.
BeamPlan service_time_allocation(const EpochContext& ctx, const BeamPlan& initial,
                                 std::vector<FineTuneStep>* recorder = nullptr);

// Algorithm 3 line 4: t_{c,f} = min(Q_c T B_s / Q_s, ceil(Q_c / R_c)), clamped
// to [1, T] for loaded cells; 0 for empty queues or no serving satellite.
std::vector<int> requested_durations(const EpochContext& ctx, const std::vector<int>& serving_sat);

// Algorithm 3: simulated annealing over serving-satellite assignments, each
// candidate scored by Algorithms 1+2 and Eq. 24. Returns the best plan found.
BeamPlan serving_satellite_allocation(const EpochContext& ctx, const SaConfig& sa,
                                      const std::vector<int>& prev_sat,
                                      double* best_gamma = nullptr, int* evaluations = nullptr);

struct Violation {
    int cell = -1;
    std::string constraint;
    std::string detail;
};

// Hard-constraint audit (satellite visibility, one beam per cell, slot
// ordering, beam-satellite affiliation, same-beam overlap, Eq. 33). Max
// revisit (16a) is opt-in because baselines may legitimately violate it.
std::vector<Violation> plan_feasibility_check(const EpochContext& ctx, const BeamPlan& plan,
                                              bool include_dmax = false);

// Eq. 24 for a candidate plan at ctx.f using the tracker snapshot.
double plan_gamma(const EpochContext& ctx, const BeamPlan& plan);

}  // namespace leobeam
