#include "leobeam/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace leobeam {

namespace {

bool windows_overlap(int s1, int e1, int s2, int e2) { return s1 <= e2 && s2 <= e1; }

bool placement_ok(const EpochContext& ctx, const BeamPlan& plan, int cell, int beam, int s, int e,
                  int skip_a = -1, int skip_b = -1) {
    if (!(1 <= s && s <= e && e <= ctx.T)) return false;
    for (int o = 0; o < ctx.cell_count(); ++o) {
        if (o == cell || o == skip_a || o == skip_b) continue;
        const auto& w = plan.cells[o];
        if (!w.served() || !windows_overlap(s, e, w.t_start, w.t_end)) continue;
        if (w.beam == beam || ctx.jf->conflicts(cell, beam, o, w.beam)) return false;
    }
    return true;
}

}  // namespace

BeamPlan greedy_allocation(const EpochContext& ctx, const std::vector<int>& serving_sat,
                           const std::vector<int>& durations) {
    const int C = ctx.cell_count();
    BeamPlan plan;
    plan.epoch_index = ctx.f;
    plan.cells.resize(C);

    std::vector<int> order(C);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        double wa = (*ctx.rates)[a] * (*ctx.queues)[a];
        double wb = (*ctx.rates)[b] * (*ctx.queues)[b];
        if (wa != wb) return wa > wb;
        return a < b;
    });

    for (int c : order) {
        int s = serving_sat[c];
        int d = durations[c];
        if (s < 0 || d < 1) continue;
        bool placed = false;
        for (int t = 1; t + d - 1 <= ctx.T && !placed; ++t) {
            for (int j = 0; j < ctx.spectrum->beam_count_of(s) && !placed; ++j) {
                int beam = ctx.spectrum->first_beam_of(s) + j;
                if (!placement_ok(ctx, plan, c, beam, t, t + d - 1)) continue;
                auto& a = plan.cells[c];
                a.sat = s;
                a.beam = beam;
                a.t_start = t;
                a.t_end = t + d - 1;
                placed = true;
            }
        }
        // infeasible cells are skipped
    }
    return plan;
}

BeamPlan swap_refinement(const EpochContext& ctx, const BeamPlan& initial) {
    BeamPlan plan = initial;
    const int C = ctx.cell_count();
    double g_cur = plan_gamma(ctx, plan);

    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 0; i < C; ++i) {
            if (!plan.cells[i].served()) continue;
            for (int j = i + 1; j < C; ++j) {
                if (!plan.cells[j].served()) continue;
                // same-satellite swaps only: the satellite scheme stays fixed
                if (plan.cells[i].sat != plan.cells[j].sat) continue;
                const auto ai = plan.cells[i], aj = plan.cells[j];
                if (!placement_ok(ctx, plan, i, aj.beam, aj.t_start, aj.t_end, i, j)) continue;
                if (!placement_ok(ctx, plan, j, ai.beam, ai.t_start, ai.t_end, i, j)) continue;
                if (aj.beam == ai.beam &&
                    windows_overlap(aj.t_start, aj.t_end, ai.t_start, ai.t_end))
                    continue;
                if (aj.beam != ai.beam &&
                    (ctx.jf->conflicts(i, aj.beam, j, ai.beam) &&
                     windows_overlap(aj.t_start, aj.t_end, ai.t_start, ai.t_end)))
                    continue;
                BeamPlan trial = plan;
                trial.cells[i].beam = aj.beam;
                trial.cells[i].t_start = aj.t_start;
                trial.cells[i].t_end = aj.t_end;
                trial.cells[j].beam = ai.beam;
                trial.cells[j].t_start = ai.t_start;
                trial.cells[j].t_end = ai.t_end;
                double g_new = plan_gamma(ctx, trial);
                if (g_new < g_cur) {
                    plan = std::move(trial);
                    g_cur = g_new;
                    improved = true;
                }
            }
        }
    }
    return plan;
}

std::vector<int> minload_satellites(const EpochGeometry& geo, const std::vector<double>& queues) {
    const int C = static_cast<int>(geo.visible.size());
    const int S = static_cast<int>(geo.sats.size());
    std::vector<double> load(S, 0.0);
    std::vector<int> beta(C, -1);
    for (int c = 0; c < C; ++c) {
        int pick = -1;
        for (int s = 0; s < S; ++s) {
            if (!geo.visible[c][s]) continue;
            if (pick < 0 || load[s] < load[pick]) pick = s;
        }
        beta[c] = pick;
        if (pick >= 0) load[pick] += queues[c];
    }
    return beta;
}

std::vector<int> maxtime_satellites(const EpochGeometry& geo,
                                    const std::vector<std::vector<int>>& remaining_visibility) {
    const int C = static_cast<int>(geo.visible.size());
    const int S = static_cast<int>(geo.sats.size());
    std::vector<int> beta(C, -1);
    for (int c = 0; c < C; ++c) {
        int pick = -1;
        for (int s = 0; s < S; ++s) {
            if (!geo.visible[c][s]) continue;
            if (pick < 0 || remaining_visibility[c][s] > remaining_visibility[c][pick]) pick = s;
        }
        beta[c] = pick;
    }
    return beta;
}

std::vector<double> topsis_closeness(const std::vector<std::vector<double>>& matrix) {
    const size_t n = matrix.size();
    if (n == 0) return {};
    const size_t k = matrix[0].size();

    // vector normalization, equal weights
    std::vector<std::vector<double>> w(n, std::vector<double>(k, 0.0));
    for (size_t j = 0; j < k; ++j) {
        double ss = 0.0;
        for (size_t i = 0; i < n; ++i) ss += matrix[i][j] * matrix[i][j];
        double denom = std::sqrt(ss);
        for (size_t i = 0; i < n; ++i)
            w[i][j] = denom > 0.0 ? matrix[i][j] / denom / static_cast<double>(k) : 0.0;
    }
    std::vector<double> ideal(k, -1e300), anti(k, 1e300);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < n; ++i) {
            ideal[j] = std::max(ideal[j], w[i][j]);
            anti[j] = std::min(anti[j], w[i][j]);
        }
    std::vector<double> cc(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double dp = 0.0, dm = 0.0;
        for (size_t j = 0; j < k; ++j) {
            dp += (w[i][j] - ideal[j]) * (w[i][j] - ideal[j]);
            dm += (w[i][j] - anti[j]) * (w[i][j] - anti[j]);
        }
        dp = std::sqrt(dp);
        dm = std::sqrt(dm);
        cc[i] = (dp + dm) > 0.0 ? dm / (dp + dm) : 0.5;
    }
    return cc;
}

std::vector<int> topsis_satellites(const EpochGeometry& geo, const std::vector<double>& queues,
                                   const std::vector<std::vector<int>>& remaining_visibility) {
    const int C = static_cast<int>(geo.visible.size());
    const int S = static_cast<int>(geo.sats.size());
    std::vector<double> load(S, 0.0);
    std::vector<int> beta(C, -1);
    for (int c = 0; c < C; ++c) {
        std::vector<int> alts;
        for (int s = 0; s < S; ++s)
            if (geo.visible[c][s]) alts.push_back(s);
        if (alts.empty()) continue;
        std::vector<std::vector<double>> matrix;
        matrix.reserve(alts.size());
        for (int s : alts)
            matrix.push_back({static_cast<double>(remaining_visibility[c][s]),
                              geo.elevation_deg[c][s], 1.0 / (1.0 + load[s])});
        std::vector<double> cc = topsis_closeness(matrix);
        int pick = 0;
        for (size_t i = 1; i < alts.size(); ++i)
            if (cc[i] > cc[pick]) pick = static_cast<int>(i);
        beta[c] = alts[pick];
        load[alts[pick]] += queues[c];
    }
    return beta;
}

}  // namespace leobeam
