#include "experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace maxtrust::cli {

namespace pt = boost::property_tree;

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void check_keys(const pt::ptree& tree) {
    static const std::set<std::string> allowed{
        "experiment.scenarios", "experiment.topologies", "experiment.runs", "experiment.seed",
        "experiment.jobs", "experiment.out",
        "protocol.timesteps", "protocol.interactions", "protocol.trust_delta", "protocol.miscategorisation",
        "protocol.growth_every", "protocol.growth_min", "protocol.growth_max", "protocol.malicious_fraction",
        "protocol.malicious_probability", "protocol.zero_mode_probability", "protocol.decay_start",
        "protocol.decay_rate", "protocol.initial_routers",
        "algorithms.eigentrust_epsilon", "algorithms.eigentrust_max_iters", "algorithms.maxtrust_T",
        "algorithms.vector_rule"};
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ParseError("key '" + section + "' outside a section", 0, 0);
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            if (!allowed.count(full)) throw ParseError("unknown config key '" + full + "'", 0, 0);
        }
    }
}

}  // namespace

ExperimentPlan default_plan() { return ExperimentPlan{}; }

ExperimentPlan load_plan(const std::string& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(e.message(), e.line(), 0);
    }
    check_keys(tree);

    ExperimentPlan plan = default_plan();
    auto& c = plan.base;
    try {
        if (auto s = tree.get_optional<std::string>("experiment.scenarios")) {
            plan.scenarios.clear();
            for (const auto& item : split_list(*s)) {
                const int sc = std::stoi(item);
                if (sc < 1 || sc > 3) throw DomainError("scenario must be 1, 2 or 3");
                plan.scenarios.push_back(sc);
            }
        }
        if (auto s = tree.get_optional<std::string>("experiment.topologies")) {
            plan.topologies.clear();
            for (const auto& item : split_list(*s)) plan.topologies.push_back(parse_topology(item));
        }
        plan.runs = tree.get("experiment.runs", plan.runs);
        c.seed = tree.get("experiment.seed", c.seed);
        plan.jobs = tree.get("experiment.jobs", plan.jobs);
        plan.out_dir = tree.get("experiment.out", plan.out_dir);

        c.timesteps = tree.get("protocol.timesteps", c.timesteps);
        c.interactions = tree.get("protocol.interactions", c.interactions);
        c.trust_delta = tree.get("protocol.trust_delta", c.trust_delta);
        c.miscategorisation = tree.get("protocol.miscategorisation", c.miscategorisation);
        c.growth_every = tree.get("protocol.growth_every", c.growth_every);
        c.growth_min = tree.get("protocol.growth_min", c.growth_min);
        c.growth_max = tree.get("protocol.growth_max", c.growth_max);
        c.malicious_fraction = tree.get("protocol.malicious_fraction", c.malicious_fraction);
        c.malicious_probability = tree.get("protocol.malicious_probability", c.malicious_probability);
        c.zero_mode_probability = tree.get("protocol.zero_mode_probability", c.zero_mode_probability);
        c.decay_start = tree.get("protocol.decay_start", c.decay_start);
        c.decay_rate = tree.get("protocol.decay_rate", c.decay_rate);
        c.initial_routers = tree.get("protocol.initial_routers", c.initial_routers);

        c.eigentrust_epsilon = tree.get("algorithms.eigentrust_epsilon", c.eigentrust_epsilon);
        c.eigentrust_max_iters = tree.get("algorithms.eigentrust_max_iters", c.eigentrust_max_iters);
        c.maxtrust_T = tree.get("algorithms.maxtrust_T", c.maxtrust_T);
        if (auto s = tree.get_optional<std::string>("algorithms.vector_rule")) c.vector_rule = parse_vector_rule(*s);
    } catch (const pt::ptree_bad_data& e) {
        throw ParseError(std::string("bad config value: ") + e.what(), 0, 0);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad scenario list", 0, 0);
    }
    if (c.growth_min > c.growth_max) throw DomainError("growth_min exceeds growth_max");
    if (c.growth_every == 0) throw DomainError("growth_every must be positive");
    return plan;
}

std::vector<ConditionResult> run_plan(const ExperimentPlan& plan) {
    std::vector<ConditionResult> results;
    std::vector<ScenarioConfig> configs;
    for (int sc : plan.scenarios)
        for (auto topo : plan.topologies) {
            ConditionResult r;
            r.scenario = sc;
            r.topology = topo;
            r.records.resize(plan.runs);
            results.push_back(std::move(r));
            ScenarioConfig cfg = plan.base;
            cfg.scenario = sc;
            cfg.topology = topo;
            configs.push_back(cfg);
        }

    const std::size_t total = results.size() * plan.runs;
    unsigned jobs = plan.jobs ? plan.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(total, 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < total; task = next++) {
            const std::size_t cond = task / plan.runs;
            const std::size_t run = task % plan.runs;
            results[cond].records[run] = run_experiment(configs[cond], run);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

std::vector<SummaryRow> summarize(const std::vector<ConditionResult>& results) {
    std::vector<SummaryRow> rows;
    for (const auto& r : results)
        for (auto alg : {Algorithm::Eigentrust, Algorithm::MaxTrust}) {
            SummaryRow row = aggregate(r.records, alg);
            row.scenario = r.scenario;
            row.topology = r.topology;
            rows.push_back(row);
        }
    return rows;
}

std::vector<SummaryRow> write_outputs(const std::string& out_dir, const std::vector<ConditionResult>& results) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    for (const auto& r : results) {
        const fs::path file = fs::path(out_dir) / ("scenario" + std::to_string(r.scenario) + "_" + to_string(r.topology) + ".csv");
        std::ofstream out(file);
        if (!out) throw IoError("cannot write '" + file.string() + "'");
        write_condition_csv(out, r.records);
    }
    const fs::path failures = fs::path(out_dir) / "failures.csv";
    std::ofstream fail_out(failures);
    if (!fail_out) throw IoError("cannot write '" + failures.string() + "'");
    fail_out << "scenario,topology,run_id,seed,error\n";
    for (const auto& r : results)
        for (const auto& rec : r.records)
            if (!rec.error.empty())
                fail_out << r.scenario << ',' << to_string(r.topology) << ',' << rec.run_id << ',' << rec.seed << ",\""
                         << rec.error << "\"\n";

    const auto rows = summarize(results);
    const fs::path summary = fs::path(out_dir) / "summary.csv";
    std::ofstream out(summary);
    if (!out) throw IoError("cannot write '" + summary.string() + "'");
    write_summary_csv(out, rows);
    return rows;
}

}  // namespace maxtrust::cli
