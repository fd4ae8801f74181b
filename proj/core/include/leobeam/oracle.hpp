#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Brute-force reference implementations used as independent test oracles and
// by the `oracle` CLI subcommand. None of these share code with the heuristics
// they check.
namespace leobeam::oracle {

// Exact maximum-weight independent set by subset enumeration; n <= 24.
// Returns (best weight, chosen vertex ids).
std::pair<double, std::vector<int>> exact_mwis(int n, const std::vector<double>& weights,
                                               const std::vector<std::pair<int, int>>& edges);

// Direct Eq. 3 evaluation.
double revisit_direct(int t_start, int t_end_prev, int T);

// Direct Eq. 2 evaluation.
double queue_update_direct(double q, double t, double r, double a);

// Direct Eq. 19 evaluation from explicit D / delta histories (epochs 1..f-1).
double eta_direct(const std::vector<double>& d_history, const std::vector<double>& delta_history,
                  int cell_count);

// Direct Eq. 24 evaluation from per-cell terms.
double gamma_direct(const std::vector<double>& dtilde, const std::vector<double>& eta,
                    double delta_tilde, const std::vector<double>& rates,
                    const std::vector<double>& queues, const std::vector<double>& durations,
                    double tradeoff_v);

}  // namespace leobeam::oracle
