// leobeam command line: run scenarios, compare runs, validate configs, sweep
// parameters, and evaluate brute-force oracle fixtures.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "leobeam/baselines.hpp"
#include "leobeam/metrics.hpp"
#include "leobeam/oracle.hpp"
#include "leobeam/scenario.hpp"
#include "leobeam/simulation.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& path, long long seed, const std::string& out, int epochs,
            bool dump_plans, bool dump_ephemeris, bool dump_tuples) {
    leobeam::Scenario scn = leobeam::load_scenario(path);
    if (seed >= 0) {
        // rebuild so seed-dependent resolution (traffic stream) follows
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        json j = json::parse(buf.str());
        j["run"]["seed"] = seed;
        if (epochs > 0) j["run"]["epochs"] = epochs;
        scn = leobeam::load_scenario_from_string(j.dump(), scn.name,
                                                 fs::path(path).parent_path().string());
    } else if (epochs > 0) {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        json j = json::parse(buf.str());
        j["run"]["epochs"] = epochs;
        scn = leobeam::load_scenario_from_string(j.dump(), scn.name,
                                                 fs::path(path).parent_path().string());
    }
    if (!out.empty()) scn.run.output_dir = out;
    scn.run.dump_plans = scn.run.dump_plans || dump_plans;
    scn.run.dump_ephemeris = scn.run.dump_ephemeris || dump_ephemeris;
    scn.run.dump_tuples = scn.run.dump_tuples || dump_tuples;

    leobeam::RunRecord rec = leobeam::run_simulation(scn);
    std::cout << "run: " << scn.name << " seed=" << scn.run.seed << " epochs=" << scn.run.epochs
              << " -> " << rec.output_dir << "\n"
              << "  mean_revisit=" << rec.summary.mean_revisit_final
              << " mean_queue=" << rec.summary.mean_queue
              << " handovers=" << rec.summary.handover_total
              << " inr_violations=" << rec.summary.inr_violations << "\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& dirs) {
    std::vector<leobeam::RunSummary> sums;
    for (const auto& d : dirs) sums.push_back(leobeam::load_run_summary(d));
    leobeam::ComparisonTable t = leobeam::compare_runs(sums);
    std::cout << t.render();
    return 0;
}

int cmd_validate(const std::string& path) {
    leobeam::Scenario scn = leobeam::load_scenario(path);
    std::cout << "valid: " << scn.name << " (cells=" << scn.grid.cells.size()
              << " sats=" << scn.elements.size() << " T=" << scn.scheduler.slots_per_epoch
              << " epochs=" << scn.run.epochs << " h_min=" << scn.budget.h_min
              << " s_max=" << scn.budget.s_max << " g_th="
              << leobeam::gain_threshold_db(scn.budget, scn.antenna) << " dB)\n";
    return 0;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& values,
              const std::string& out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("sweep: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json base = json::parse(buf.str());

    std::string key_path = param == "V" ? "scheduler.V" : param;
    std::vector<std::string> keys;
    {
        std::istringstream ks(key_path);
        std::string k;
        while (std::getline(ks, k, '.')) keys.push_back(k);
    }
    std::vector<double> vals;
    {
        std::istringstream vs(values);
        std::string v;
        while (std::getline(vs, v, ',')) vals.push_back(std::stod(v));
    }
    if (vals.empty()) throw std::runtime_error("sweep: no values given");

    std::string base_out = out.empty() ? ("runs/sweep-" + param) : out;
    std::string dir = fs::path(path).parent_path().string();
    for (double v : vals) {
        json j = base;
        json* node = &j;
        for (size_t i = 0; i + 1 < keys.size(); ++i) node = &(*node)[keys[i]];
        (*node)[keys.back()] = v;
        std::ostringstream name;
        name << fs::path(path).stem().string() << "-" << param << "=" << v;
        leobeam::Scenario scn = leobeam::load_scenario_from_string(j.dump(), name.str(), dir);
        scn.run.output_dir = base_out + "/" + param + "=" + std::to_string(v);
        leobeam::RunRecord rec = leobeam::run_simulation(scn);
        std::cout << "sweep " << param << "=" << v << " -> " << rec.output_dir
                  << " (mean_revisit=" << rec.summary.mean_revisit_final
                  << " mean_queue=" << rec.summary.mean_queue << ")\n";
    }
    return 0;
}

int cmd_oracle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("oracle: cannot open " + path);
    json j = json::parse(in);
    std::string type = j.at("type").get<std::string>();
    json out;
    if (type == "mwis") {
        auto weights = j.at("weights").get<std::vector<double>>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges")) edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        auto [w, set] = leobeam::oracle::exact_mwis(static_cast<int>(weights.size()), weights, edges);
        out = {{"type", type}, {"weight", w}, {"set", set}};
    } else if (type == "revisit") {
        out = {{"type", type},
               {"d", leobeam::oracle::revisit_direct(j.at("t_start").get<int>(),
                                                     j.at("t_end_prev").get<int>(),
                                                     j.at("T").get<int>())}};
    } else if (type == "queue_update") {
        out = {{"type", type},
               {"q_next", leobeam::oracle::queue_update_direct(
                              j.at("q").get<double>(), j.at("t").get<double>(),
                              j.at("r").get<double>(), j.at("a").get<double>())}};
    } else if (type == "eta") {
        out = {{"type", type},
               {"eta", leobeam::oracle::eta_direct(j.at("d_history").get<std::vector<double>>(),
                                                   j.at("delta_history").get<std::vector<double>>(),
                                                   j.at("cells").get<int>())}};
    } else if (type == "gamma") {
        out = {{"type", type},
               {"gamma", leobeam::oracle::gamma_direct(
                             j.at("dtilde").get<std::vector<double>>(),
                             j.at("eta").get<std::vector<double>>(), j.at("delta_tilde").get<double>(),
                             j.at("rates").get<std::vector<double>>(),
                             j.at("queues").get<std::vector<double>>(),
                             j.at("durations").get<std::vector<double>>(), j.at("V").get<double>())}};
    } else if (type == "topsis") {
        auto matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
        auto cc = leobeam::topsis_closeness(matrix);
        int pick = 0;
        for (size_t i = 1; i < cc.size(); ++i)
            if (cc[i] > cc[pick]) pick = static_cast<int>(i);
        out = {{"type", type}, {"closeness", cc}, {"selected", pick}};
    } else {
        throw std::runtime_error("oracle: unknown fixture type '" + type + "'");
    }
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LEO beam management simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, param = "V", values;
    long long seed = -1;
    int epochs = -1;
    bool dump_plans = false, dump_ephemeris = false, dump_tuples = false;
    std::vector<std::string> run_dirs;

    auto* run = app.add_subcommand("run", "run a scenario");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--seed", seed, "override run.seed");
    run->add_option("--out", out_dir, "override run.output_dir");
    run->add_option("--epochs", epochs, "override run.epochs");
    run->add_flag("--dump-plans", dump_plans, "write plans.jsonl");
    run->add_flag("--dump-ephemeris", dump_ephemeris, "write ephemeris.csv");
    run->add_flag("--dump-tuples", dump_tuples, "write the per-epoch tuple set");

    auto* cmp = app.add_subcommand("compare", "compare finished runs");
    cmp->add_option("dirs", run_dirs, "run directories")->required()->expected(-1);

    auto* val = app.add_subcommand("validate", "parse and validate a scenario file");
    val->add_option("scenario", scenario_path, "scenario file")->required();

    auto* sweep = app.add_subcommand("sweep", "run a scenario across parameter values");
    sweep->add_option("scenario", scenario_path, "scenario file")->required();
    sweep->add_option("--param", param, "parameter (V or a dotted config path)");
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--out", out_dir, "output directory root");

    auto* oracle = app.add_subcommand("oracle", "evaluate a brute-force oracle fixture");
    oracle->add_option("fixture", scenario_path, "fixture json file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scenario_path, seed, out_dir, epochs, dump_plans, dump_ephemeris,
                           dump_tuples);
        if (cmp->parsed()) return cmd_compare(run_dirs);
        if (val->parsed()) return cmd_validate(scenario_path);
        if (sweep->parsed()) return cmd_sweep(scenario_path, param, values, out_dir);
        if (oracle->parsed()) return cmd_oracle(scenario_path);
    } catch (const leobeam::ScenarioError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
