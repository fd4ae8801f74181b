#pragma once

#include <vector>

#include "leobeam/scheduler.hpp"

// Comparison schemes: greedy time-frequency allocation, swap-matching
// refinement, and the Minload / Maxtime / TOPSIS satellite selectors.
namespace leobeam {

enum class TimeFrequencyScheme { Proposed, Greedy, Swap };
enum class SatelliteScheme { ProposedSa, Minload, Maxtime, Topsis };

// Cells in descending R*Q order each take their requested duration at the
// earliest feasible (start, beam) of their serving satellite; no fallback.
BeamPlan greedy_allocation(const EpochContext& ctx, const std::vector<int>& serving_sat,
                           const std::vector<int>& durations);

// Repeatedly applies any same-satellite (beam, window) swap that keeps
// feasibility and strictly lowers gamma_f; stops at a swap-free scan.
BeamPlan swap_refinement(const EpochContext& ctx, const BeamPlan& initial);

// Each cell takes the visible satellite with the least queue load assigned so
// far (ascending cell order, ties by satellite id).
std::vector<int> minload_satellites(const EpochGeometry& geo, const std::vector<double>& queues);

// Each cell takes the visible satellite with the longest remaining visibility.
std::vector<int> maxtime_satellites(const EpochGeometry& geo,
                                    const std::vector<std::vector<int>>& remaining_visibility);

// Equal-weight TOPSIS over {remaining visibility, elevation, 1/(1+load)}.
std::vector<int> topsis_satellites(const EpochGeometry& geo, const std::vector<double>& queues,
                                   const std::vector<std::vector<int>>& remaining_visibility);

// Closeness coefficients for one cell's decision matrix (rows = alternatives,
// columns = benefit criteria), exposed for tests.
std::vector<double> topsis_closeness(const std::vector<std::vector<double>>& matrix);

}  // namespace leobeam
