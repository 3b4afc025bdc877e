// Command-line front end: run (experiments -> CSV), bounds (closed-form
// constants -> JSON), verify (potential-function monitors over random
// instances), reproduce (canonical experiments vs bundled reference values).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "speedsim/analysis.hpp"
#include "speedsim/rng.hpp"
#include "speedsim/engine.hpp"
#include "speedsim/experiment.hpp"
#include "speedsim/metrics.hpp"
#include "speedsim/workload.hpp"

namespace {

using namespace speedsim;

ProblemVariant parse_variant(const std::string& text) {
    if (text == "flow") return ProblemVariant::FlowTime;
    if (text == "flow-energy") return ProblemVariant::FlowTimeEnergy;
    throw CLI::ValidationError("variant must be 'flow' or 'flow-energy'");
}

struct VerifyStats {
    int instances = 0;
    std::vector<std::string> failures;  // "seed=... t=... kind=... margin=..."
};

VerifyStats verify_batch(double alpha, ProblemVariant variant, int instances, std::uint64_t seed,
                         std::optional<double> kappa_override) {
    VerifyStats stats;
    const double c1 = batch_potential_c1(alpha, variant);
    const double kappa = kappa_override.value_or(mu_batch(alpha, variant));
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t s = replication_seed(seed, static_cast<std::uint64_t>(i));
        Rng rng(s);
        const int count = 1 + static_cast<int>(rng.uniform01() * 50);
        const double mean = 0.5 + rng.uniform01() * 10.0;
        const double p = 1.0 + rng.uniform01() * 80.0;
        PowerModel m(alpha, p);
        const Workload w = gen_batch(count, mean, s);
        auto [ta, tref] = simulate_coupled(w, PolicySpec::parse("equi"),
                                           PolicySpec::parse("hesrpt"), m, variant);
        auto jumps = check_boundary_jumps(ta, tref, PotentialKind::BatchSurplus, c1, m, variant);
        auto runs = check_running_condition(ta, tref, PotentialKind::BatchSurplus, c1, kappa, m,
                                            variant);
        for (const auto& v : jumps) {
            stats.failures.push_back("seed=" + std::to_string(s) + " t=" + std::to_string(v.time) +
                                     " kind=" + v.kind + " margin=" + std::to_string(v.margin));
        }
        for (const auto& v : runs) {
            stats.failures.push_back("seed=" + std::to_string(s) + " t=" + std::to_string(v.time) +
                                     " kind=" + v.kind + " margin=" + std::to_string(v.margin));
        }
        ++stats.instances;
    }
    return stats;
}

VerifyStats verify_online(double alpha, ProblemVariant variant, double beta, double gamma,
                          int instances, std::uint64_t seed,
                          std::optional<double> kappa_override) {
    VerifyStats stats;
    const BoundReport bounds = online_constants(alpha, beta, gamma, variant);
    const double kappa = kappa_override.value_or(bounds.kappa);
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t s = replication_seed(seed, static_cast<std::uint64_t>(i));
        Rng rng(s);
        const int slots = 3 + static_cast<int>(rng.uniform01() * 10);
        const double lambda = 1.0 + rng.uniform01() * 4.0;
        const double mean = 0.5 + rng.uniform01() * 4.0;
        const double p = 1.0 + rng.uniform01() * 30.0;
        PowerModel m(alpha, p);
        Workload w;
        try {
            w = gen_slotted_poisson(slots, lambda, mean, s);
        } catch (const std::exception&) {
            continue;
        }
        if (w.jobs.empty()) continue;
        char spec[48];
        std::snprintf(spec, sizeof(spec), "lcfs:beta=%.17g", beta);
        auto [ta, tref] = simulate_coupled(w, PolicySpec::parse(spec),
                                           PolicySpec::parse("hesrpt"), m, variant);
        auto jumps =
            check_boundary_jumps(ta, tref, PotentialKind::OnlineRank, bounds.c, m, variant);
        auto runs = check_running_condition(ta, tref, PotentialKind::OnlineRank, bounds.c, kappa,
                                            m, variant);
        for (const auto& v : jumps) {
            stats.failures.push_back("seed=" + std::to_string(s) + " t=" + std::to_string(v.time) +
                                     " kind=" + v.kind + " margin=" + std::to_string(v.margin));
        }
        for (const auto& v : runs) {
            stats.failures.push_back("seed=" + std::to_string(s) + " t=" + std::to_string(v.time) +
                                     " kind=" + v.kind + " margin=" + std::to_string(v.margin));
        }
        ++stats.instances;
    }
    return stats;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-server speed-scaling scheduling simulator"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "simulate policies over replications, emit CSV");
    std::string run_config_path, run_policies, run_variant, run_workload, run_out, run_trace_dir;
    double run_alpha = -1.0, run_power = -1.0;
    int run_reps = -1, run_threads = -1;
    std::int64_t run_seed = -1;
    run->add_option("--config", run_config_path, "key = value config file");
    run->add_option("--policies", run_policies, "comma list: equi,hesrpt,lcfs:beta=0.25");
    run->add_option("--alpha", run_alpha, "power exponent, > 1");
    run->add_option("--power", run_power, "sum power budget");
    run->add_option("--variant", run_variant, "flow | flow-energy");
    run->add_option("--workload", run_workload,
                    "'batch count=N mean=M' | 'poisson slots=S lambda=L mean=M' | 'file path=P'");
    run->add_option("--reps", run_reps, "replication count");
    run->add_option("--seed", run_seed, "base seed");
    run->add_option("--threads", run_threads, "worker threads (0 = auto)");
    run->add_option("--out", run_out, "CSV output path (default stdout)");
    run->add_option("--trace-dir", run_trace_dir, "dump per-run trace files into this directory");

    // --- bounds ---
    auto* bounds = app.add_subcommand("bounds", "closed-form competitive-ratio constants as JSON");
    double b_alpha = 2.0, b_beta = 1.0 / 6.0, b_gamma = 1.0 / 36.0;
    std::string b_variant = "flow-energy";
    bool b_online = false;
    bounds->add_option("--alpha", b_alpha, "power exponent, > 1")->required();
    bounds->add_option("--variant", b_variant, "flow | flow-energy");
    bounds->add_flag("--online", b_online, "online constants (beta, gamma, c, kappa)");
    bounds->add_option("--beta", b_beta, "served fraction (online)");
    bounds->add_option("--gamma", b_gamma, "reference-load fraction (online)");

    // --- verify ---
    auto* verify = app.add_subcommand("verify", "check potential invariants on random instances");
    std::string v_setting = "batch", v_variant = "flow-energy";
    double v_alpha = 2.0, v_beta = 1.0 / 6.0, v_gamma = 1.0 / 36.0, v_kappa = -1.0;
    int v_instances = 100;
    std::uint64_t v_seed = 7;
    bool v_json = false;
    verify->add_option("--setting", v_setting, "batch | online");
    verify->add_option("--alpha", v_alpha, "power exponent, > 1");
    verify->add_option("--variant", v_variant, "flow | flow-energy");
    verify->add_option("--beta", v_beta, "served fraction (online)");
    verify->add_option("--gamma", v_gamma, "reference-load fraction (online)");
    verify->add_option("--instances", v_instances, "random instances to check");
    verify->add_option("--seed", v_seed, "base seed");
    verify->add_option("--kappa", v_kappa, "override kappa (detector sanity checks)");
    verify->add_flag("--json", v_json, "print violations as JSON");

    // --- reproduce ---
    auto* reproduce =
        app.add_subcommand("reproduce", "canonical experiments vs bundled reference values");
    std::string r_figure;
    int r_reps = 0;
    std::string r_out;
    reproduce->add_option("figure", r_figure, "offline | online-2 | online-2.5 | online-3")
        ->required();
    reproduce->add_option("--reps", r_reps, "override replication count");
    reproduce->add_option("--out", r_out, "also write the per-replication CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!run_config_path.empty()) cfg = ExperimentConfig::from_file(run_config_path);
            if (!run_policies.empty()) cfg.set("policies", run_policies);
            if (run_alpha > 0) cfg.set("alpha", std::to_string(run_alpha));
            if (run_power > 0) cfg.set("power", std::to_string(run_power));
            if (!run_variant.empty()) cfg.set("variant", run_variant);
            if (!run_workload.empty()) cfg.set("workload", run_workload);
            if (run_reps > 0) cfg.replications = run_reps;
            if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
            if (run_threads >= 0) cfg.threads = run_threads;
            if (cfg.policies.empty()) cfg.set("policies", "equi,hesrpt");

            const ExperimentResult result = run_experiment(cfg);
            if (run_out.empty()) {
                write_csv(result, std::cout);
            } else {
                std::ofstream out(run_out);
                if (!out) throw std::runtime_error("cannot open " + run_out);
                write_csv(result, out);
            }
            if (!run_trace_dir.empty()) {
                PowerModel model(cfg.alpha, cfg.p_budget);
                for (int rep = 0; rep < cfg.replications; ++rep) {
                    const Workload w = cfg.make_workload(rep);
                    for (const auto& spec : cfg.policies) {
                        SimOptions opts;
                        opts.detail = TraceDetail::MetricsOnly;
                        const Trace trace = simulate(w, spec, model, cfg.variant, opts);
                        std::string name = spec.name();
                        for (auto& ch : name) {
                            if (ch == ':' || ch == '=' || ch == '/') ch = '_';
                        }
                        save_trace(trace, run_trace_dir + "/trace_rep" + std::to_string(rep) +
                                              "_" + name + ".txt");
                    }
                }
            }
            return 0;
        }

        if (*bounds) {
            const ProblemVariant variant = parse_variant(b_variant);
            const BoundReport report = b_online
                                           ? online_constants(b_alpha, b_beta, b_gamma, variant)
                                           : batch_constants(b_alpha, variant);
            std::cout << report.to_json() << "\n";
            return 0;
        }

        if (*verify) {
            const ProblemVariant variant = parse_variant(v_variant);
            std::optional<double> kappa;
            if (v_kappa > 0) kappa = v_kappa;
            VerifyStats stats;
            if (v_setting == "batch") {
                stats = verify_batch(v_alpha, variant, v_instances, v_seed, kappa);
            } else if (v_setting == "online") {
                stats = verify_online(v_alpha, variant, v_beta, v_gamma, v_instances, v_seed,
                                      kappa);
            } else {
                throw CLI::ValidationError("--setting must be batch or online");
            }
            std::cout << "checked " << stats.instances << " instances, " << stats.failures.size()
                      << " violation(s)\n";
            for (const auto& f : stats.failures) std::cout << "  " << f << "\n";
            return stats.failures.empty() ? 0 : 1;
        }

        if (*reproduce) {
            const ReproducePlan plan = reproduce_plan(r_figure, r_reps);
            std::vector<ExperimentResult> raw;
            const auto rows = run_reproduce(plan, &raw);
            std::printf("%-8s %-14s %12s %12s %10s\n", "alpha", "policy", "measured", "reference",
                        "rel_err");
            for (const auto& row : rows) {
                std::printf("%-8g %-14s %12.3f %12.3f %9.1f%%\n", row.alpha, row.policy.c_str(),
                            row.measured, row.reference, 100.0 * row.rel_error);
            }
            if (!r_out.empty()) {
                std::ofstream out(r_out);
                if (!out) throw std::runtime_error("cannot open " + r_out);
                for (const auto& result : raw) write_csv(result, out);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
