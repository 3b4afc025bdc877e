#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "speedsim/analysis.hpp"
#include "speedsim/engine.hpp"
#include "speedsim/metrics.hpp"
#include "speedsim/policies.hpp"
#include "speedsim/workload.hpp"

namespace speedsim {

// One batch-experiment description. Within a replication every policy sees
// the byte-identical workload (common random numbers); replications draw
// disjoint seed streams.
struct ExperimentConfig {
    std::vector<PolicySpec> policies;
    double alpha = 2.0;
    double p_budget = 1000.0;
    ProblemVariant variant = ProblemVariant::FlowTime;

    std::string workload_kind = "batch";  // batch | poisson | file
    int count = 1000;                     // batch
    double mean_size = 20.0;
    int slots = 1000;  // poisson
    double mean_arrivals = 20.0;
    std::string workload_file;

    int replications = 1;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: SPEEDSIM_THREADS env var, else hardware count

    // "key = value" lines, '#' comments; keys match the CLI flags
    static ExperimentConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);

    Workload make_workload(int replication) const;
};

struct ReplicationRow {
    int replication = 0;
    std::string policy;
    MetricsReport metrics;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ReplicationRow> rows;                 // replication-major order
    std::map<std::string, MetricsReport> mean_by_policy;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// replication,policy,variant,alpha,p_budget + MetricsReport columns, then one
// "mean" row per policy.
void write_csv(const ExperimentResult& result, std::ostream& out);

// Canonical experiment per figure id plus its published reference points.
struct ReferencePoint {
    double alpha = 0.0;
    std::string policy;
    double mean_flow_time = 0.0;
};

struct ReproducePlan {
    std::string id;
    std::vector<ExperimentConfig> configs;  // one per alpha
    std::vector<ReferencePoint> reference;
    double tolerance = 0.05;  // relative
};

// figure ids: offline | online-2 | online-2.5 | online-3
ReproducePlan reproduce_plan(const std::string& figure_id, int reps_override = 0);

struct ReproduceRow {
    double alpha = 0.0;
    std::string policy;
    double measured = 0.0;
    double reference = 0.0;
    double rel_error = 0.0;
};

std::vector<ReproduceRow> run_reproduce(const ReproducePlan& plan,
                                        std::vector<ExperimentResult>* raw = nullptr);

}  // namespace speedsim
