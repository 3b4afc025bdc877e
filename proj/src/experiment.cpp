#include "speedsim/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace speedsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for '" + key + "': " + v);
    }
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPEEDSIM_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "policies") {
        policies.clear();
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) policies.push_back(PolicySpec::parse(item));
        }
        if (policies.empty()) throw std::invalid_argument("config: empty policy list");
    } else if (key == "alpha") {
        alpha = to_double(value, key);
    } else if (key == "power" || key == "p_budget") {
        p_budget = to_double(value, key);
    } else if (key == "variant") {
        if (value == "flow") variant = ProblemVariant::FlowTime;
        else if (value == "flow-energy") variant = ProblemVariant::FlowTimeEnergy;
        else throw std::invalid_argument("config: variant must be flow or flow-energy");
    } else if (key == "workload") {
        std::istringstream ss(value);
        std::string kind;
        ss >> kind;
        if (kind != "batch" && kind != "poisson" && kind != "file") {
            throw std::invalid_argument("config: workload kind must be batch, poisson, or file");
        }
        workload_kind = kind;
        std::string tok;
        while (ss >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) {
                throw std::invalid_argument("config: workload parameter needs key=value: " + tok);
            }
            const std::string k = tok.substr(0, eq);
            const std::string v = tok.substr(eq + 1);
            if (k == "count") count = static_cast<int>(to_double(v, k));
            else if (k == "mean") mean_size = to_double(v, k);
            else if (k == "slots") slots = static_cast<int>(to_double(v, k));
            else if (k == "lambda") mean_arrivals = to_double(v, k);
            else if (k == "path") workload_file = v;
            else throw std::invalid_argument("config: unknown workload parameter " + k);
        }
    } else if (key == "reps" || key == "replications") {
        replications = static_cast<int>(to_double(value, key));
        if (replications < 1) throw std::invalid_argument("config: reps must be >= 1");
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "threads") {
        threads = static_cast<int>(to_double(value, key));
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not key = value");
        }
        cfg.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

Workload ExperimentConfig::make_workload(int replication) const {
    const std::uint64_t rep_seed = replication_seed(seed, static_cast<std::uint64_t>(replication));
    if (workload_kind == "batch") return gen_batch(count, mean_size, rep_seed);
    if (workload_kind == "poisson")
        return gen_slotted_poisson(slots, mean_arrivals, mean_size, rep_seed);
    if (workload_kind == "file") return load_workload(workload_file);
    throw std::invalid_argument("config: unknown workload kind " + workload_kind);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.policies.empty()) throw std::invalid_argument("run_experiment: no policies");
    PowerModel model(config.alpha, config.p_budget);

    ExperimentResult result;
    result.config = config;
    const int reps = config.replications;
    const int npol = static_cast<int>(config.policies.size());
    result.rows.resize(static_cast<std::size_t>(reps) * npol);

    SimOptions opts;
    opts.detail = TraceDetail::MetricsOnly;
    opts.caps_check = CapsCheck::Sampled;

    std::atomic<int> next_rep{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int rep = next_rep.fetch_add(1);
            if (rep >= reps) break;
            try {
                const Workload workload = config.make_workload(rep);
                for (int p = 0; p < npol; ++p) {
                    const Trace trace =
                        simulate(workload, config.policies[p], model, config.variant, opts);
                    ReplicationRow row;
                    row.replication = rep;
                    row.policy = config.policies[p].name();
                    row.metrics = compute_metrics(trace, config.variant);
                    result.rows[static_cast<std::size_t>(rep) * npol + p] = std::move(row);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                if (error_message.empty()) {
                    error_message = "replication " + std::to_string(rep) + ": " + e.what();
                }
            }
        }
    };

    const int nthreads = std::min(resolve_threads(config.threads), reps);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("run_experiment: " + error_message);

    for (const auto& spec : config.policies) {
        MetricsReport mean;
        const std::string name = spec.name();
        int n = 0;
        for (const auto& row : result.rows) {
            if (row.policy != name) continue;
            mean.flow_time += row.metrics.flow_time;
            mean.energy += row.metrics.energy;
            mean.objective += row.metrics.objective;
            mean.mean_flow_time += row.metrics.mean_flow_time;
            mean.makespan += row.metrics.makespan;
            mean.job_count += row.metrics.job_count;
            ++n;
        }
        mean.flow_time /= n;
        mean.energy /= n;
        mean.objective /= n;
        mean.mean_flow_time /= n;
        mean.makespan /= n;
        mean.job_count = mean.job_count / n;
        result.mean_by_policy[name] = mean;
    }
    return result;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
    out << "replication,policy,variant,alpha,p_budget," << MetricsReport::csv_header() << "\n";
    const char* variant =
        result.config.variant == ProblemVariant::FlowTime ? "flow" : "flow-energy";
    char prefix[128];
    for (const auto& row : result.rows) {
        std::snprintf(prefix, sizeof(prefix), "%d,%s,%s,%.12g,%.12g,", row.replication,
                      row.policy.c_str(), variant, result.config.alpha, result.config.p_budget);
        out << prefix << row.metrics.csv_row() << "\n";
    }
    for (const auto& spec : result.config.policies) {
        const auto& mean = result.mean_by_policy.at(spec.name());
        std::snprintf(prefix, sizeof(prefix), "mean,%s,%s,%.12g,%.12g,", spec.name().c_str(),
                      variant, result.config.alpha, result.config.p_budget);
        out << prefix << mean.csv_row() << "\n";
    }
}

ReproducePlan reproduce_plan(const std::string& figure_id, int reps_override) {
    ReproducePlan plan;
    plan.id = figure_id;

    auto base_offline = []() {
        ExperimentConfig cfg;
        cfg.policies = {PolicySpec::parse("equi"), PolicySpec::parse("hesrpt")};
        cfg.p_budget = 1000.0;
        cfg.variant = ProblemVariant::FlowTime;
        cfg.workload_kind = "batch";
        cfg.count = 1000;
        cfg.mean_size = 20.0;
        cfg.replications = 500;
        cfg.seed = 20240901;
        return cfg;
    };
    auto base_online = [](double alpha) {
        ExperimentConfig cfg;
        cfg.policies = {PolicySpec::parse("hesrpt"), PolicySpec::parse("equi"),
                        PolicySpec::parse("lcfs:beta=1/2"), PolicySpec::parse("lcfs:beta=1/4"),
                        PolicySpec::parse("lcfs:beta=1/6")};
        cfg.alpha = alpha;
        cfg.p_budget = 1000.0;
        cfg.variant = ProblemVariant::FlowTime;
        cfg.workload_kind = "poisson";
        cfg.slots = 1000;
        cfg.mean_arrivals = 20.0;
        cfg.mean_size = 20.0;
        cfg.replications = 200;
        cfg.seed = 20240902;
        return cfg;
    };

    if (figure_id == "offline") {
        const double alphas[] = {1.01, 2.0, 5.0, 10.0, 20.0};
        const double equi_ref[] = {371.0, 358.0, 367.0, 375.0, 380.0};
        const double hesrpt_ref[] = {270.0, 338.0, 366.0, 370.0, 375.0};
        for (int i = 0; i < 5; ++i) {
            ExperimentConfig cfg = base_offline();
            cfg.alpha = alphas[i];
            plan.configs.push_back(cfg);
            plan.reference.push_back({alphas[i], "equi", equi_ref[i]});
            plan.reference.push_back({alphas[i], "hesrpt", hesrpt_ref[i]});
        }
        plan.tolerance = 0.05;
    } else if (figure_id == "online-2" || figure_id == "online-2.5" || figure_id == "online-3") {
        double alpha = 2.0;
        std::vector<double> ref = {475.0, 505.0, 730.0, 1043.0, 1287.0};
        if (figure_id == "online-2.5") {
            alpha = 2.5;
            ref = {462.2, 476.28, 737.0, 1127.0, 1445.0};
        } else if (figure_id == "online-3") {
            alpha = 3.0;
            ref = {451.0, 460.0, 742.0, 1184.0, 1562.0};
        }
        ExperimentConfig cfg = base_online(alpha);
        plan.configs.push_back(cfg);
        for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
            plan.reference.push_back({alpha, cfg.policies[p].name(), ref[p]});
        }
        plan.tolerance = 0.10;
    } else {
        throw std::invalid_argument("reproduce: unknown figure id '" + figure_id +
                                    "' (offline, online-2, online-2.5, online-3)");
    }
    if (reps_override > 0) {
        for (auto& cfg : plan.configs) cfg.replications = reps_override;
    }
    return plan;
}

std::vector<ReproduceRow> run_reproduce(const ReproducePlan& plan,
                                        std::vector<ExperimentResult>* raw) {
    std::vector<ReproduceRow> rows;
    for (const auto& cfg : plan.configs) {
        ExperimentResult result = run_experiment(cfg);
        for (const auto& point : plan.reference) {
            if (point.alpha != cfg.alpha) continue;
            ReproduceRow row;
            row.alpha = point.alpha;
            row.policy = point.policy;
            row.measured = result.mean_by_policy.at(point.policy).mean_flow_time;
            row.reference = point.mean_flow_time;
            row.rel_error = std::abs(row.measured - row.reference) / row.reference;
            rows.push_back(row);
        }
        if (raw) raw->push_back(std::move(result));
    }
    return rows;
}

}  // namespace speedsim
