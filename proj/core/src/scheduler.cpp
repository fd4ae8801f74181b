#include "leobeam/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "leobeam/rng.hpp"

namespace leobeam {

namespace {

bool windows_overlap(int s1, int e1, int s2, int e2) { return s1 <= e2 && s2 <= e1; }

// Slots blocked for (cell, beam) by other served cells' current windows:
// same-beam occupancy plus Eq. 33 tuples. skip_a/skip_b are cells whose
// windows are being moved by the caller.
std::vector<uint8_t> blocked_slots(const EpochContext& ctx, const BeamPlan& plan, int cell,
                                   int beam, int skip_a, int skip_b) {
    std::vector<uint8_t> blocked(ctx.T + 1, 0);
    const int C = ctx.cell_count();
    for (int o = 0; o < C; ++o) {
        if (o == cell || o == skip_a || o == skip_b) continue;
        const auto& w = plan.cells[o];
        if (!w.served()) continue;
        bool conflict = w.beam == beam || ctx.jf->conflicts(cell, beam, o, w.beam);
        if (!conflict) continue;
        int lo = std::max(1, w.t_start), hi = std::min(ctx.T, w.t_end);
        for (int t = lo; t <= hi; ++t) blocked[t] = 1;
    }
    return blocked;
}

// D_max start-slot cap for a cell in the planning epoch (constraint 16a in
// booked-revisit form); INT_MAX when not binding at f = 1.
int dmax_start_cap(const EpochContext& ctx, int cell) {
    if (ctx.f == 1) return ctx.T;  // D_{c,1} = 0, never binding
    int epochs_since = ctx.f - ctx.tracker->last_served_epoch(cell);
    // booked D = t_start + epochs_since*T - last_end - 1 <= d_max - 1
    double cap = std::floor(ctx.d_max) - epochs_since * ctx.T + ctx.tracker->last_end_slot(cell);
    if (cap > ctx.T) return ctx.T;
    return static_cast<int>(cap);
}

}  // namespace

int ConflictGraph::vertex_count_for_cell(int cell) const {
    int n = 0;
    for (const auto& v : vertices) n += v.cell == cell;
    return n;
}

bool ConflictGraph::has_edge(int i, int j) const {
    for (int32_t k : adj[i])
        if (k == j) return true;
    return false;
}

ConflictGraph build_conflict_graph(const EpochContext& ctx, const std::vector<int>& serving_sat,
                                   const std::vector<int>& durations) {
    ConflictGraph g;
    const int C = ctx.cell_count();
    for (int c = 0; c < C; ++c) {
        int s = serving_sat[c];
        if (s < 0) continue;
        int d = std::min(durations[c], ctx.T);
        if (d < 1) continue;  // no demand: fallback pass may still serve one slot
        for (int j = 0; j < ctx.spectrum->beam_count_of(s); ++j) {
            int beam = ctx.spectrum->first_beam_of(s) + j;
            for (int t = 1; t + d - 1 <= ctx.T; ++t) {
                ConflictVertex v;
                v.cell = c;
                v.beam = beam;
                v.t_start = t;
                v.duration = d;
                v.weight = ctx.tracker->vertex_weight(c, t);
                g.vertices.push_back(v);
            }
        }
    }

    const size_t n = g.vertices.size();
    g.adj.assign(n, {});
    std::vector<double> neighbor_weight(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        const auto& a = g.vertices[i];
        int ae = a.t_start + a.duration - 1;
        for (size_t j = i + 1; j < n; ++j) {
            const auto& b = g.vertices[j];
            bool edge;
            if (a.cell == b.cell) {
                edge = true;
            } else {
                bool overlap = windows_overlap(a.t_start, ae, b.t_start, b.t_start + b.duration - 1);
                edge = overlap && (a.beam == b.beam ||
                                   ctx.jf->conflicts(a.cell, a.beam, b.cell, b.beam));
            }
            if (edge) {
                g.adj[i].push_back(static_cast<int32_t>(j));
                g.adj[j].push_back(static_cast<int32_t>(i));
                neighbor_weight[i] += b.weight;
                neighbor_weight[j] += a.weight;
            }
        }
    }
    for (size_t i = 0; i < n; ++i) {
        double denom = g.vertices[i].weight + neighbor_weight[i];
        g.vertices[i].tau = denom != 0.0 ? g.vertices[i].weight / denom : 0.0;
    }
    return g;
}

std::vector<int> greedy_mwis(const ConflictGraph& graph) {
    const size_t n = graph.vertices.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const auto &a = graph.vertices[i], &b = graph.vertices[j];
        if (a.tau != b.tau) return a.tau > b.tau;
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.cell != b.cell) return a.cell < b.cell;
        if (a.beam != b.beam) return a.beam < b.beam;
        return a.t_start < b.t_start;
    });

    std::vector<uint8_t> blocked(n, 0);
    std::vector<int> selected;
    for (int idx : order) {
        if (blocked[idx]) continue;
        selected.push_back(idx);
        for (int32_t nb : graph.adj[idx]) blocked[nb] = 1;
    }
    return selected;
}

BeamPlan serving_beam_allocation(const EpochContext& ctx, const std::vector<int>& serving_sat,
                                 const std::vector<int>& durations) {
    const int C = ctx.cell_count();
    BeamPlan plan;
    plan.epoch_index = ctx.f;
    plan.cells.resize(C);

    ConflictGraph graph = build_conflict_graph(ctx, serving_sat, durations);
    std::vector<int> selected = greedy_mwis(graph);

    std::vector<std::vector<uint8_t>> occupied(ctx.spectrum->beam_count(),
                                               std::vector<uint8_t>(ctx.T + 1, 0));
    auto mark = [&](int beam, int s, int e) {
        for (int t = s; t <= e; ++t) occupied[beam][t] = 1;
    };
    for (int idx : selected) {
        const auto& v = graph.vertices[idx];
        auto& a = plan.cells[v.cell];
        a.sat = serving_sat[v.cell];
        a.beam = v.beam;
        a.t_start = v.t_start;
        a.t_end = v.t_start + v.duration - 1;
        mark(v.beam, a.t_start, a.t_end);
    }

    // One-slot fallback for cells the independent set left out; earliest start
    // minimizes the resulting revisit time, then lowest beam id.
    for (int c = 0; c < C; ++c) {
        if (plan.cells[c].served() || serving_sat[c] < 0) continue;
        bool placed = false;
        for (int t = 1; t <= ctx.T && !placed; ++t) {
            for (int j = 0; j < ctx.spectrum->beam_count_of(serving_sat[c]) && !placed; ++j) {
                int beam = ctx.spectrum->first_beam_of(serving_sat[c]) + j;
                if (occupied[beam][t]) continue;
                bool ok = true;
                for (int o = 0; o < C && ok; ++o) {
                    const auto& w = plan.cells[o];
                    if (o == c || !w.served()) continue;
                    if (w.t_start <= t && t <= w.t_end &&
                        ctx.jf->conflicts(c, beam, o, w.beam))
                        ok = false;
                }
                if (!ok) continue;
                auto& a = plan.cells[c];
                a.sat = serving_sat[c];
                a.beam = beam;
                a.t_start = a.t_end = t;
                mark(beam, t, t);
                placed = true;
            }
        }
    }
    return plan;
}

std::vector<int> requested_durations(const EpochContext& ctx, const std::vector<int>& serving_sat) {
    const int C = ctx.cell_count();
    std::vector<double> sat_queue(ctx.spectrum->sat_count, 0.0);
    for (int c = 0; c < C; ++c)
        if (serving_sat[c] >= 0) sat_queue[serving_sat[c]] += (*ctx.queues)[c];

    std::vector<int> d(C, 0);
    for (int c = 0; c < C; ++c) {
        int s = serving_sat[c];
        double q = (*ctx.queues)[c];
        if (s < 0 || !(q > 0.0)) continue;
        double fair = q * ctx.T * ctx.spectrum->beam_count_of(s) / sat_queue[s];
        double r = (*ctx.rates)[c];
        double need = r > 0.0 ? std::ceil(q / r) : static_cast<double>(ctx.T);
        int di = static_cast<int>(std::floor(std::min(fair, need) + 1e-9));
        d[c] = std::clamp(di, 1, ctx.T);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Algorithm 2
// ---------------------------------------------------------------------------

namespace {

struct PairCoeffs {
    double m = 0.0;  // V/f + R Q, multiplies the moved t_start
    double n = 0.0;  // R Q, multiplies the moved t_end
};

// argmin of m*x - n*y over the enumerated candidates; ties prefer the larger
// end slot, then the smaller start slot
struct ArgMin {
    bool any = false;
    double obj = 0.0;
    int x = 0, y = 0;
    void offer(double o, int cx, int cy) {
        if (!any || o < obj || (o == obj && (cy > y || (cy == y && cx < x)))) {
            any = true;
            obj = o;
            x = cx;
            y = cy;
        }
    }
};

void record_step(std::vector<FineTuneStep>* rec, int cell_end, int cell_start, double before,
                 double after) {
    if (rec) rec->push_back({cell_end, cell_start, before, after});
}

// Interior pair: move (t_end of u, t_start of v); u precedes v on one beam.
void fine_tune_pair(const EpochContext& ctx, BeamPlan& plan, int u, int v, int beam,
                    double m_v, double n_u, std::vector<FineTuneStep>* rec) {
    auto& au = plan.cells[u];
    auto& av = plan.cells[v];
    const int su = au.t_start, eu = au.t_end, sv = av.t_start, ev = av.t_end;

    auto blocked_u = blocked_slots(ctx, plan, u, beam, u, v);
    auto blocked_v = blocked_slots(ctx, plan, v, beam, u, v);

    // feasible ranges are contiguous around the (feasible) incumbent
    int y_hi = su - 1;
    for (int t = su; t <= std::min(ev - 1, ctx.T); ++t) {
        if (blocked_u[t]) break;
        y_hi = t;
    }
    int x_lo = ev + 1;
    for (int t = ev; t >= 1; --t) {
        if (blocked_v[t]) break;
        x_lo = t;
    }
    int x_hi = ev;
    int cap = dmax_start_cap(ctx, v);
    if (sv <= cap) x_hi = std::min(x_hi, cap);  // only when the incumbent meets 16a

    ArgMin best;
    for (int x = std::max(x_lo, su + 1); x <= x_hi; ++x) {
        int y = std::min(y_hi, x - 1);
        if (y < su) continue;
        best.offer(m_v * x - n_u * y, x, y);
    }
    if (!best.any) return;
    double before = m_v * sv - n_u * eu;
    record_step(rec, u, v, before, best.obj);
    au.t_end = best.y;
    av.t_start = best.x;
}

// Boundary pair: move (t_end of the last cell, t_start of the first cell);
// their windows cannot collide because the interior windows separate them.
void fine_tune_boundary(const EpochContext& ctx, BeamPlan& plan, int last, int first, int beam,
                        double m_first, double n_last, std::vector<FineTuneStep>* rec) {
    auto& al = plan.cells[last];
    auto& af = plan.cells[first];

    auto blocked_l = blocked_slots(ctx, plan, last, beam, last, first);
    auto blocked_f = blocked_slots(ctx, plan, first, beam, last, first);

    int y_hi = al.t_start - 1;
    for (int t = al.t_start; t <= ctx.T; ++t) {
        if (blocked_l[t]) break;
        y_hi = t;
    }
    int x_lo = af.t_end + 1;
    for (int t = af.t_end; t >= 1; --t) {
        if (blocked_f[t]) break;
        x_lo = t;
    }
    int x_hi = af.t_end;
    int cap = dmax_start_cap(ctx, first);
    if (af.t_start <= cap) x_hi = std::min(x_hi, cap);

    if (y_hi < al.t_start || x_lo > x_hi) return;
    // objective is separable: largest feasible end, smallest feasible start
    double before = m_first * af.t_start - n_last * al.t_end;
    double after = m_first * x_lo - n_last * y_hi;
    record_step(rec, last, first, before, after);
    al.t_end = y_hi;
    af.t_start = x_lo;
}

// Single-cell subband: both window endpoints move jointly.
void fine_tune_single(const EpochContext& ctx, BeamPlan& plan, int c, int beam, double m_c,
                      double n_c, std::vector<FineTuneStep>* rec) {
    auto& a = plan.cells[c];
    auto blocked = blocked_slots(ctx, plan, c, beam, c, -1);

    int x_hi = ctx.T;
    int cap = dmax_start_cap(ctx, c);
    if (a.t_start <= cap) x_hi = std::min(x_hi, cap);

    ArgMin best;
    for (int x = 1; x <= x_hi; ++x) {
        if (blocked[x]) continue;
        for (int y = x; y <= ctx.T; ++y) {
            if (blocked[y]) break;
            best.offer(m_c * x - n_c * y, x, y);
        }
    }
    if (!best.any) return;
    double before = m_c * a.t_start - n_c * a.t_end;
    record_step(rec, c, c, before, best.obj);
    a.t_start = best.x;
    a.t_end = best.y;
}

}  // namespace

BeamPlan service_time_allocation(const EpochContext& ctx, const BeamPlan& initial,
                                 std::vector<FineTuneStep>* recorder) {
    BeamPlan plan = initial;
    const int C = ctx.cell_count();

    std::vector<double> m(C), n(C);
    for (int c = 0; c < C; ++c) {
        n[c] = (*ctx.rates)[c] * (*ctx.queues)[c];
        // D_{c,1} = 0 by definition, so gamma carries no start-slot term in
        // the first epoch
        m[c] = (ctx.f == 1 ? 0.0 : ctx.tradeoff_v / ctx.f) + n[c];
    }

    for (int sb = 0; sb < ctx.spectrum->subband_count; ++sb) {
        // per satellite, the cells served on its subband-sb beam, by t_start
        std::vector<std::pair<int, std::vector<int>>> groups;  // (beam, cells)
        for (int s = 0; s < ctx.spectrum->sat_count; ++s) {
            if (sb >= ctx.spectrum->beam_count_of(s)) continue;
            int beam = ctx.spectrum->first_beam_of(s) + sb;
            std::vector<int> cells;
            for (int c = 0; c < C; ++c)
                if (plan.cells[c].served() && plan.cells[c].beam == beam) cells.push_back(c);
            if (cells.empty()) continue;
            std::sort(cells.begin(), cells.end(), [&](int a, int b) {
                return plan.cells[a].t_start < plan.cells[b].t_start;
            });
            groups.emplace_back(beam, std::move(cells));
        }
        // step 1: interior pairs
        for (auto& [beam, cells] : groups)
            for (size_t i = 0; i + 1 < cells.size(); ++i)
                fine_tune_pair(ctx, plan, cells[i], cells[i + 1], beam, m[cells[i + 1]],
                               n[cells[i]], recorder);
        // step 2: boundary pair (t_end of the last, t_start of the first)
        for (auto& [beam, cells] : groups) {
            if (cells.size() == 1)
                fine_tune_single(ctx, plan, cells[0], beam, m[cells[0]], n[cells[0]], recorder);
            else
                fine_tune_boundary(ctx, plan, cells.back(), cells.front(), beam, m[cells.front()],
                                   n[cells.back()], recorder);
        }
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Algorithm 3
// ---------------------------------------------------------------------------

double plan_gamma(const EpochContext& ctx, const BeamPlan& plan) {
    return ctx.tracker->evaluate(plan, *ctx.queues, *ctx.rates, ctx.tradeoff_v).gamma;
}

BeamPlan serving_satellite_allocation(const EpochContext& ctx, const SaConfig& sa,
                                      const std::vector<int>& prev_sat, double* best_gamma,
                                      int* evaluations) {
    const int C = ctx.cell_count();
    std::vector<std::vector<int>> visible(C);
    for (int c = 0; c < C; ++c)
        for (int s = 0; s < static_cast<int>(ctx.geo->sats.size()); ++s)
            if (ctx.geo->visible[c][s]) visible[c].push_back(s);

    // initial feasible assignment: keep the previous satellite when still
    // visible, otherwise the highest-elevation visible one
    std::vector<int> beta(C, -1);
    for (int c = 0; c < C; ++c) {
        if (prev_sat.size() == static_cast<size_t>(C) && prev_sat[c] >= 0 &&
            ctx.geo->visible[c][prev_sat[c]]) {
            beta[c] = prev_sat[c];
            continue;
        }
        double best_el = -1e9;
        for (int s : visible[c]) {
            if (ctx.geo->elevation_deg[c][s] > best_el) {
                best_el = ctx.geo->elevation_deg[c][s];
                beta[c] = s;
            }
        }
    }

    auto score = [&](const std::vector<int>& b) {
        std::vector<int> durations = requested_durations(ctx, b);
        BeamPlan p = serving_beam_allocation(ctx, b, durations);
        p = service_time_allocation(ctx, p);
        double g = plan_gamma(ctx, p);
        return std::make_pair(std::move(p), g);
    };

    auto [best_plan, g_best] = score(beta);
    int evals = 1;
    double g_cur = g_best;
    std::vector<int> beta_cur = beta;

    std::vector<int> movable;
    for (int c = 0; c < C; ++c)
        if (visible[c].size() >= 2) movable.push_back(c);

    if (!movable.empty()) {
        rng::Stream st(sa.rng_seed);
        double temp = sa.t1;
        while (temp > sa.t2) {
            temp *= sa.rho;
            for (int k = 0; k < sa.moves_per_temperature; ++k) {
                // neighbor: reassign one random cell to another visible satellite
                int c = movable[st.next_int(static_cast<int>(movable.size()))];
                int pick = st.next_int(static_cast<int>(visible[c].size()) - 1);
                std::vector<int> beta_new = beta_cur;
                for (int s : visible[c]) {
                    if (s == beta_cur[c]) continue;
                    if (pick-- == 0) { beta_new[c] = s; break; }
                }
                auto [p_new, g_new] = score(beta_new);
                ++evals;
                if (g_new < g_cur) {
                    beta_cur = std::move(beta_new);
                    g_cur = g_new;
                    if (g_new < g_best) {
                        g_best = g_new;
                        best_plan = std::move(p_new);
                    }
                } else if (st.next_unit() < std::exp(-(g_new - g_cur) / temp)) {
                    beta_cur = std::move(beta_new);
                    g_cur = g_new;
                }
            }
        }
    }

    if (best_gamma) *best_gamma = g_best;
    if (evaluations) *evaluations = evals;
    return best_plan;
}

std::vector<Violation> plan_feasibility_check(const EpochContext& ctx, const BeamPlan& plan,
                                              bool include_dmax) {
    std::vector<Violation> out;
    const int C = ctx.cell_count();
    if (static_cast<int>(plan.cells.size()) != C) {
        out.push_back({-1, "shape", "plan cell count differs from grid"});
        return out;
    }
    for (int c = 0; c < C; ++c) {
        const auto& a = plan.cells[c];
        if (!a.served()) continue;
        if (a.beam < 0 || a.beam >= ctx.spectrum->beam_count()) {
            out.push_back({c, "zeta", "beam id out of range"});
            continue;
        }
        if (ctx.spectrum->beam(a.beam).sat_id != a.sat)
            out.push_back({c, "zeta", "beam does not belong to the assigned satellite"});
        if (a.sat < 0 || a.sat >= static_cast<int>(ctx.geo->sats.size()) ||
            !ctx.geo->visible[c][a.sat])
            out.push_back({c, "eq9", "assigned satellite not visible"});
        if (!(1 <= a.t_start && a.t_start <= a.t_end && a.t_end <= ctx.T))
            out.push_back({c, "16b", "service window outside [1, T] or reversed"});
        if (include_dmax && ctx.tracker->booked_revisit(c, a.t_start) >= ctx.d_max)
            out.push_back({c, "16a", "booked revisit time reaches D_max"});
    }
    for (int i = 0; i < C; ++i) {
        const auto& a = plan.cells[i];
        if (!a.served()) continue;
        for (int j = i + 1; j < C; ++j) {
            const auto& b = plan.cells[j];
            if (!b.served()) continue;
            bool overlap = windows_overlap(a.t_start, a.t_end, b.t_start, b.t_end);
            if (!overlap) continue;
            if (a.beam == b.beam)
                out.push_back({i, "beam-overlap",
                               "cells " + std::to_string(i) + " and " + std::to_string(j) +
                                   " overlap on beam " + std::to_string(a.beam)});
            else if (ctx.jf->conflicts(i, a.beam, j, b.beam))
                out.push_back({i, "eq33",
                               "interference tuple (" + std::to_string(i) + "," +
                                   std::to_string(a.beam) + "," + std::to_string(j) + "," +
                                   std::to_string(b.beam) + ") active"});
        }
    }
    return out;
}

}  // namespace leobeam
