#pragma once

// Experiment orchestration for the CLI and the acceptance binary: config
// loading, parallel run workers, CSV output.

#include <cstddef>
#include <string>
#include <vector>

#include "maxtrust/simulator.hpp"

namespace maxtrust::cli {

struct ExperimentPlan {
    ScenarioConfig base;  // scenario/topology overwritten per condition
    std::vector<int> scenarios{1, 2, 3};
    std::vector<TopologyKind> topologies{TopologyKind::Tree, TopologyKind::Torus, TopologyKind::Random};
    std::size_t runs = 100;
    unsigned jobs = 0;  // 0 = hardware concurrency
    std::string out_dir = "results";
};

struct ConditionResult {
    int scenario = 1;
    TopologyKind topology = TopologyKind::Tree;
    std::vector<RunRecord> records;  // ordered by run id
};

// INI file with [experiment], [protocol] and [algorithms] sections. Unknown
// keys are rejected so typos do not silently fall back to defaults.
ExperimentPlan load_plan(const std::string& path);
ExperimentPlan default_plan();

// Every (condition, run) pair is an independent task; results land in
// fixed slots, so output does not depend on the worker count.
std::vector<ConditionResult> run_plan(const ExperimentPlan& plan);

// scenario<S>_<topology>.csv per condition plus summary.csv; returns the
// summary rows (Eigentrust then MaxTrust per condition).
std::vector<SummaryRow> write_outputs(const std::string& out_dir, const std::vector<ConditionResult>& results);

std::vector<SummaryRow> summarize(const std::vector<ConditionResult>& results);

}  // namespace maxtrust::cli
