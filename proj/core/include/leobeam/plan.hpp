#pragma once

#include <vector>

namespace leobeam {

// Per-cell decision tuple (alpha, beta, t_start, t_end). A cell with beam < 0
// is unserved this epoch (a legal outcome, recorded in metrics).
struct CellAssignment {
    int sat = -1;
    int beam = -1;
    int t_start = 0;
    int t_end = -1;

    bool served() const { return beam >= 0; }
    int duration() const { return served() ? t_end - t_start + 1 : 0; }
    bool overlaps(int s, int e) const { return served() && t_start <= e && s <= t_end; }
};

struct BeamPlan {
    int epoch_index = 1;
    std::vector<CellAssignment> cells;

    int served_count() const {
        int n = 0;
        for (const auto& a : cells) n += a.served();
        return n;
    }
};

}  // namespace leobeam
