#include "leobeam/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leobeam/rng.hpp"
#include "leobeam/traffic.hpp"

namespace leobeam {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    double idx = p * (v.size() - 1);
    size_t lo = static_cast<size_t>(idx);
    size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = idx - lo;
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

struct InrAudit {
    long long checks = 0;
    long long violations = 0;
    double max_inr_db = -std::numeric_limits<double>::infinity();
    long long smax_fail = 0;
    long long hmin_fail = 0;
};

// Realized per-slot INR of every served cell against all simultaneously
// active co-frequency beams; the empirical soundness check of the angle rule.
void audit_inr(const Scenario& scn, const EpochGeometry& geo, const BeamPlan& plan,
               InrAudit& audit) {
    const int C = static_cast<int>(scn.grid.cells.size());
    const double wl = scn.spectrum.wavelength_m();

    struct Tx {
        int cell, sat, beam, t_start, t_end;
        Vec3 sat_pos, boresight;
        double power_dbw;
    };
    std::vector<Tx> txs;
    for (int c = 0; c < C; ++c) {
        const auto& a = plan.cells[c];
        if (!a.served()) continue;
        Tx tx;
        tx.cell = c;
        tx.sat = a.sat;
        tx.beam = a.beam;
        tx.t_start = a.t_start;
        tx.t_end = a.t_end;
        tx.sat_pos = geo.sats[a.sat].position_ecef_km;
        tx.boresight = beam_boresight(tx.sat_pos, scn.grid.cells[c].center_ecef_km);
        tx.power_dbw = required_tx_power_dbw(scn.grid.cells[c].center_ecef_km, tx.sat_pos,
                                             scn.budget, scn.antenna, wl);
        txs.push_back(tx);
    }

    for (const auto& victim : txs) {
        if (geo.visible_count(victim.cell) > scn.budget.s_max) ++audit.smax_fail;
        for (int t = victim.t_start; t <= victim.t_end; ++t) {
            std::vector<ActiveTransmission> interferers;
            for (const auto& itf : txs) {
                if (itf.cell == victim.cell || itf.sat == victim.sat) continue;
                if (!scn.spectrum.co_frequency(itf.beam, victim.beam)) continue;
                if (t < itf.t_start || t > itf.t_end) continue;
                interferers.push_back({itf.beam, itf.sat_pos, itf.boresight, itf.power_dbw});
                // angle-rule precondition: serving-path gain over victim-path
                // gain stays above h_min
                double h_srv = channel_gain_linear(itf.sat_pos, scn.grid.cells[itf.cell].center_ecef_km,
                                                   wl, scn.budget.atmospheric_margin_db);
                double h_vic = channel_gain_linear(itf.sat_pos, scn.grid.cells[victim.cell].center_ecef_km,
                                                   wl, scn.budget.atmospheric_margin_db);
                if (h_srv / h_vic < scn.budget.h_min - 1e-12) ++audit.hmin_fail;
            }
            ++audit.checks;
            if (interferers.empty()) continue;
            double inr = inr_db(scn.grid.cells[victim.cell].center_ecef_km,
                                geo.sats[victim.sat].position_ecef_km, interferers, scn.budget,
                                scn.antenna, wl);
            audit.max_inr_db = std::max(audit.max_inr_db, inr);
            if (inr > scn.budget.inr_threshold_db + 1e-9) ++audit.violations;
        }
    }
}

}  // namespace

RunRecord run_simulation(const Scenario& scn, const RunOptions& opt) {
    const int C = static_cast<int>(scn.grid.cells.size());
    const int T = scn.scheduler.slots_per_epoch;
    const int F = scn.run.epochs;
    const double nominal_rate = scn.nominal_rate_packets_per_slot();
    const int vis_cap =
        static_cast<int>(std::ceil(orbital_period_s(scn.constellation.altitude_km) /
                                   (scn.constellation.epoch_duration_ms * 1e-3)));

    RunRecord rec;
    rec.summary.scenario_name = scn.name;
    rec.summary.scenario_hash = scn.scenario_hash;
    rec.summary.seed = scn.run.seed;
    rec.summary.traffic_seed = scn.traffic.rng_seed;
    rec.summary.epochs = F;
    rec.summary.cells = C;
    rec.summary.time_frequency_scheme = time_frequency_name(scn.baseline.time_frequency);
    rec.summary.satellite_scheme = satellite_scheme_name(scn.baseline.satellite);
    rec.summary.tradeoff_v = scn.scheduler.tradeoff_v;
    rec.rows.reserve(F);

    std::ofstream csv, jsonl, plans, ephem, tuples;
    if (opt.write_outputs) {
        std::string dir = opt.output_dir_override.empty() ? scn.run.output_dir : opt.output_dir_override;
        fs::create_directories(dir);
        rec.output_dir = dir;
        std::ofstream traffic_out(fs::path(dir) / "traffic.csv");
        traffic_out << "cell_id,a_c\n";
        for (int c = 0; c < C; ++c)
            traffic_out << c << "," << fmt(scn.traffic.mean_rates[c]) << "\n";
        csv.open(fs::path(dir) / "metrics.csv");
        csv << "f,mean_revisit,mean_queue,delta_f,handovers_cum,gamma,p0,served_cells,dmax_violations\n";
        jsonl.open(fs::path(dir) / "metrics.jsonl");
        if (scn.run.dump_plans) plans.open(fs::path(dir) / "plans.jsonl");
        if (scn.run.dump_ephemeris) {
            ephem.open(fs::path(dir) / "ephemeris.csv");
            ephem << "epoch_index,sat_id,x_km,y_km,z_km\n";
        }
        if (scn.run.dump_tuples) {
            tuples.open(fs::path(dir) / "tuples.csv");
            tuples << "f,c,b,c_prime,b_prime\n";
        }
    }

    MetricsTracker tracker = MetricsTracker::create(C, T, scn.scheduler.d_max_slots);
    QueueState queues{std::vector<double>(C, 0.0), 1};
    std::vector<int> prev_sat(C, -1);
    InrAudit audit;
    std::vector<FineTuneStep> finetune;
    double max_delta = -std::numeric_limits<double>::infinity();
    long long finetune_steps = 0;
    double sum_queue = 0.0, sum_p0 = 0.0, sum_gamma = 0.0;
    long long served_total = 0, dmax_total = 0;
    std::vector<double> mean_queue_rows;
    double queue_at_final_epoch = 0.0;

    for (int f = 1; f <= F; ++f) {
        double t0 = now_s();
        EpochGeometry geo =
            propagate(scn.elements, f, scn.constellation.epoch_duration_ms, scn.grid,
                      scn.min_elevation_deg);
        double t1 = now_s();
        rec.summary.timings.geometry_s += t1 - t0;

        InterferenceTupleSet jf = build_tuple_set(geo, scn.grid, scn.spectrum, scn.budget, scn.antenna);
        double t2 = now_s();
        rec.summary.timings.tuple_set_s += t2 - t1;

        std::vector<double> rates(C, 0.0);
        for (int c = 0; c < C; ++c)
            if (geo.visible_count(c) > 0) rates[c] = nominal_rate;

        EpochContext ctx;
        ctx.geo = &geo;
        ctx.grid = &scn.grid;
        ctx.spectrum = &scn.spectrum;
        ctx.jf = &jf;
        ctx.tracker = &tracker;
        ctx.queues = &queues.q;
        ctx.rates = &rates;
        ctx.T = T;
        ctx.d_max = scn.scheduler.d_max_slots;
        ctx.tradeoff_v = scn.scheduler.tradeoff_v;
        ctx.f = f;

        bool trigger = f == 1 || (f % scn.scheduler.satellite_realloc_period == 0);
        for (int c = 0; c < C && !trigger; ++c) {
            if (prev_sat[c] >= 0 && !geo.visible[c][prev_sat[c]]) trigger = true;
            if (prev_sat[c] < 0 && geo.visible_count(c) > 0) trigger = true;
        }

        BeamPlan plan;
        if (trigger && scn.baseline.satellite == SatelliteScheme::ProposedSa) {
            SaConfig sa = scn.scheduler.sa;
            sa.rng_seed = rng::stream_key(scn.run.seed, "sa", static_cast<uint64_t>(f));
            plan = serving_satellite_allocation(ctx, sa, prev_sat);
        } else {
            std::vector<int> beta = prev_sat;
            if (trigger) {
                std::vector<std::vector<int>> remaining;
                if (scn.baseline.satellite == SatelliteScheme::Maxtime ||
                    scn.baseline.satellite == SatelliteScheme::Topsis) {
                    remaining.assign(C, std::vector<int>(geo.sats.size(), 0));
                    for (int c = 0; c < C; ++c)
                        for (size_t sidx = 0; sidx < geo.sats.size(); ++sidx)
                            if (geo.visible[c][sidx])
                                remaining[c][sidx] = remaining_visibility_epochs(
                                    scn.elements, scn.grid, c, static_cast<int>(sidx), f,
                                    scn.constellation.epoch_duration_ms, scn.min_elevation_deg,
                                    vis_cap);
                }
                switch (scn.baseline.satellite) {
                    case SatelliteScheme::Minload:
                        beta = minload_satellites(geo, queues.q);
                        break;
                    case SatelliteScheme::Maxtime:
                        beta = maxtime_satellites(geo, remaining);
                        break;
                    case SatelliteScheme::Topsis:
                        beta = topsis_satellites(geo, queues.q, remaining);
                        break;
                    case SatelliteScheme::ProposedSa:
                        break;  // handled above
                }
            }
            std::vector<int> durations = requested_durations(ctx, beta);
            switch (scn.baseline.time_frequency) {
                case TimeFrequencyScheme::Proposed: {
                    plan = serving_beam_allocation(ctx, beta, durations);
                    finetune.clear();
                    plan = service_time_allocation(ctx, plan, &finetune);
                    for (const auto& step : finetune)
                        max_delta = std::max(max_delta, step.delta());
                    finetune_steps += static_cast<long long>(finetune.size());
                    break;
                }
                case TimeFrequencyScheme::Greedy:
                    plan = greedy_allocation(ctx, beta, durations);
                    break;
                case TimeFrequencyScheme::Swap:
                    plan = greedy_allocation(ctx, beta, durations);
                    plan = swap_refinement(ctx, plan);
                    break;
            }
        }
        double t3 = now_s();
        rec.summary.timings.scheduling_s += t3 - t2;

        // internal bug guard: every emitted plan must satisfy the hard constraints
        auto violations = plan_feasibility_check(ctx, plan);
        if (!violations.empty()) {
            std::ostringstream os;
            os << "epoch " << f << ": plan failed feasibility check:";
            for (const auto& v : violations)
                os << " [cell " << v.cell << " " << v.constraint << ": " << v.detail << "]";
            throw std::runtime_error(os.str());
        }

        audit_inr(scn, geo, plan, audit);

        double gamma = plan_gamma(ctx, plan);
        double mean_q = 0.0, max_q = 0.0;
        int max_q_cell = 0;
        for (int c = 0; c < C; ++c) {
            mean_q += queues.q[c];
            if (queues.q[c] > max_q) { max_q = queues.q[c]; max_q_cell = c; }
        }
        mean_q /= C;
        if (f == F) {
            queue_at_final_epoch = 0.0;
            for (double q : queues.q) queue_at_final_epoch = std::max(queue_at_final_epoch, q);
        }

        auto commit = tracker.commit(plan);

        EpochMetricsRow row;
        row.f = f;
        row.mean_revisit = tracker.mean_dtilde();
        row.mean_queue = mean_q;
        row.delta_f = commit.delta_f;
        row.handovers_cum = tracker.handovers_cum();
        row.gamma = gamma;
        row.p0 = tracker.p0_objective();
        row.served_cells = plan.served_count();
        row.dmax_violations = commit.dmax_violations;
        rec.rows.push_back(row);

        sum_queue += mean_q;
        sum_p0 += row.p0;
        sum_gamma += gamma;
        served_total += row.served_cells;
        dmax_total += row.dmax_violations;
        mean_queue_rows.push_back(mean_q);

        if (opt.write_outputs) {
            csv << row.f << "," << fmt(row.mean_revisit) << "," << fmt(row.mean_queue) << ","
                << fmt(row.delta_f) << "," << row.handovers_cum << "," << fmt(row.gamma) << ","
                << fmt(row.p0) << "," << row.served_cells << "," << row.dmax_violations << "\n";
            csv.flush();  // crash-safe partial runs
            json jrow = {{"f", row.f},
                         {"mean_revisit", row.mean_revisit},
                         {"mean_queue", row.mean_queue},
                         {"max_queue", max_q},
                         {"max_queue_cell", max_q_cell},
                         {"delta_f", row.delta_f},
                         {"handovers_cum", row.handovers_cum},
                         {"gamma", row.gamma},
                         {"p0", row.p0},
                         {"served_cells", row.served_cells},
                         {"dmax_violations", row.dmax_violations}};
            jsonl << jrow.dump() << "\n";
            if (plans.is_open()) {
                json cells = json::array();
                for (int c = 0; c < C; ++c) {
                    const auto& a = plan.cells[c];
                    if (!a.served()) continue;
                    cells.push_back({{"cell", c},
                                     {"sat", a.sat},
                                     {"beam", a.beam},
                                     {"t_start", a.t_start},
                                     {"t_end", a.t_end}});
                }
                plans << json{{"epoch", f}, {"cells", cells}}.dump() << "\n";
            }
            if (ephem.is_open())
                for (const auto& s : geo.sats)
                    ephem << f << "," << s.sat_id << "," << fmt(s.position_ecef_km.x) << ","
                          << fmt(s.position_ecef_km.y) << "," << fmt(s.position_ecef_km.z) << "\n";
            if (tuples.is_open())
                for (const auto& tup : jf.sorted_tuples())
                    tuples << f << "," << tup[0] << "," << tup[1] << "," << tup[2] << "," << tup[3]
                           << "\n";
        }

        prev_sat = tracker.current_sat();
        std::vector<double> arrivals = draw_arrivals(scn.traffic, f);
        std::vector<int> slots(C, 0);
        for (int c = 0; c < C; ++c) slots[c] = plan.cells[c].duration();
        queues = update_queues(queues, slots, rates, arrivals);
        rec.summary.timings.bookkeeping_s += now_s() - t3;
    }

    auto& sm = rec.summary;
    sm.mean_revisit_final = rec.rows.empty() ? 0.0 : rec.rows.back().mean_revisit;
    sm.mean_queue = sum_queue / F;
    sm.queue_p50 = percentile(mean_queue_rows, 0.50);
    sm.queue_p90 = percentile(mean_queue_rows, 0.90);
    sm.queue_p99 = percentile(mean_queue_rows, 0.99);
    sm.final_queue_max_over_f = queue_at_final_epoch / F;
    sm.handover_total = rec.rows.empty() ? 0 : rec.rows.back().handovers_cum;
    sm.handover_frequency = static_cast<double>(sm.handover_total) / F;
    sm.mean_p0 = sum_p0 / F;
    sm.mean_gamma = sum_gamma / F;
    sm.served_ratio = static_cast<double>(served_total) / (static_cast<double>(C) * F);
    sm.dmax_violations_total = dmax_total;
    sm.inr_checks = audit.checks;
    sm.inr_violations = audit.violations;
    sm.max_inr_db = std::isfinite(audit.max_inr_db) ? audit.max_inr_db : -999.0;
    sm.precond_smax_violations = audit.smax_fail;
    sm.precond_hmin_violations = audit.hmin_fail;
    sm.finetune_steps = finetune_steps;
    sm.finetune_max_delta = std::isfinite(max_delta) ? max_delta : 0.0;

    if (opt.write_outputs) {
        json js = {{"scenario_name", sm.scenario_name},
                   {"scenario_hash", sm.scenario_hash},
                   {"seed", sm.seed},
                   {"traffic_seed", sm.traffic_seed},
                   {"epochs", sm.epochs},
                   {"cells", sm.cells},
                   {"time_frequency_scheme", sm.time_frequency_scheme},
                   {"satellite_scheme", sm.satellite_scheme},
                   {"V", sm.tradeoff_v},
                   {"mean_revisit_final", sm.mean_revisit_final},
                   {"mean_queue", sm.mean_queue},
                   {"queue_p50", sm.queue_p50},
                   {"queue_p90", sm.queue_p90},
                   {"queue_p99", sm.queue_p99},
                   {"final_queue_max_over_f", sm.final_queue_max_over_f},
                   {"handover_total", sm.handover_total},
                   {"handover_frequency", sm.handover_frequency},
                   {"mean_p0", sm.mean_p0},
                   {"mean_gamma", sm.mean_gamma},
                   {"served_ratio", sm.served_ratio},
                   {"dmax_violations_total", sm.dmax_violations_total},
                   {"inr_checks", sm.inr_checks},
                   {"inr_violations", sm.inr_violations},
                   {"max_inr_db", sm.max_inr_db},
                   {"precond_smax_violations", sm.precond_smax_violations},
                   {"precond_hmin_violations", sm.precond_hmin_violations},
                   {"finetune_steps", sm.finetune_steps},
                   {"finetune_max_delta", sm.finetune_max_delta},
                   {"wall_clock_s",
                    {{"geometry", sm.timings.geometry_s},
                     {"tuple_set", sm.timings.tuple_set_s},
                     {"scheduling", sm.timings.scheduling_s},
                     {"bookkeeping", sm.timings.bookkeeping_s}}}};
        std::ofstream out(fs::path(rec.output_dir) / "summary.json");
        out << js.dump(2) << "\n";
    }
    return rec;
}

RunSummary load_run_summary(const std::string& run_dir) {
    std::ifstream in(fs::path(run_dir) / "summary.json");
    if (!in) throw std::runtime_error("compare: cannot open " + run_dir + "/summary.json");
    json js = json::parse(in);
    RunSummary sm;
    sm.scenario_name = js.value("scenario_name", "");
    sm.scenario_hash = js.value("scenario_hash", 0ULL);
    sm.seed = js.value("seed", 0ULL);
    sm.traffic_seed = js.value("traffic_seed", 0ULL);
    sm.epochs = js.value("epochs", 0);
    sm.cells = js.value("cells", 0);
    sm.time_frequency_scheme = js.value("time_frequency_scheme", "");
    sm.satellite_scheme = js.value("satellite_scheme", "");
    sm.tradeoff_v = js.value("V", 0.0);
    sm.mean_revisit_final = js.value("mean_revisit_final", 0.0);
    sm.mean_queue = js.value("mean_queue", 0.0);
    sm.queue_p50 = js.value("queue_p50", 0.0);
    sm.queue_p90 = js.value("queue_p90", 0.0);
    sm.queue_p99 = js.value("queue_p99", 0.0);
    sm.final_queue_max_over_f = js.value("final_queue_max_over_f", 0.0);
    sm.handover_total = js.value("handover_total", 0LL);
    sm.handover_frequency = js.value("handover_frequency", 0.0);
    sm.mean_p0 = js.value("mean_p0", 0.0);
    sm.mean_gamma = js.value("mean_gamma", 0.0);
    sm.served_ratio = js.value("served_ratio", 0.0);
    sm.dmax_violations_total = js.value("dmax_violations_total", 0LL);
    sm.inr_checks = js.value("inr_checks", 0LL);
    sm.inr_violations = js.value("inr_violations", 0LL);
    sm.max_inr_db = js.value("max_inr_db", -999.0);
    sm.precond_smax_violations = js.value("precond_smax_violations", 0LL);
    sm.precond_hmin_violations = js.value("precond_hmin_violations", 0LL);
    sm.finetune_steps = js.value("finetune_steps", 0LL);
    sm.finetune_max_delta = js.value("finetune_max_delta", 0.0);
    return sm;
}

ComparisonTable compare_runs(const std::vector<RunSummary>& records) {
    ComparisonTable t;
    t.metrics = {"mean_revisit_final", "mean_queue",   "handover_frequency",
                 "mean_p0",            "served_ratio", "dmax_violations_total"};
    for (const auto& r : records) {
        t.labels.push_back(r.scenario_name + "/" + r.time_frequency_scheme + "+" +
                           r.satellite_scheme + "/seed" + std::to_string(r.seed));
        if (r.traffic_seed != records.front().traffic_seed) t.paired_traffic = false;
    }
    t.values.assign(t.metrics.size(), std::vector<double>(records.size(), 0.0));
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        t.values[0][i] = r.mean_revisit_final;
        t.values[1][i] = r.mean_queue;
        t.values[2][i] = r.handover_frequency;
        t.values[3][i] = r.mean_p0;
        t.values[4][i] = r.served_ratio;
        t.values[5][i] = static_cast<double>(r.dmax_violations_total);
    }
    return t;
}

std::string ComparisonTable::render() const {
    std::ostringstream os;
    if (!paired_traffic)
        os << "warning: traffic seeds differ; comparison is not paired\n";
    os << "metric";
    for (const auto& l : labels) os << "\t" << l;
    os << "\tdelta_vs_first\n";
    for (size_t m = 0; m < metrics.size(); ++m) {
        os << metrics[m];
        for (double v : values[m]) os << "\t" << fmt(v);
        double base = values[m].empty() ? 0.0 : values[m][0];
        os << "\t";
        for (size_t i = 0; i < values[m].size(); ++i) {
            if (i) os << ",";
            double d = values[m][i] - base;
            if (base != 0.0)
                os << fmt(100.0 * d / base) << "%";
            else
                os << fmt(d);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace leobeam
