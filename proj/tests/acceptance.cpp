// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is the number of failures.
//
//   --full    run the online reproduction at full scale (1000 slots, 200
//             replications, +-10%) instead of the smoke variant (100 slots,
//             20 replications, +-20%)
//   --only N  run a single criterion

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "speedsim/analysis.hpp"
#include "speedsim/engine.hpp"
#include "speedsim/experiment.hpp"
#include "speedsim/metrics.hpp"
#include "speedsim/rng.hpp"
#include "speedsim/workload.hpp"

using namespace speedsim;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

bool approx_leq(double lhs, double rhs, double slack) { return lhs <= rhs + slack; }

// 1. closed-form batch bounds
void criterion1() {
    bool ok = std::abs(mu_batch(2.0, ProblemVariant::FlowTimeEnergy) - 6.0) <= 1e-12 &&
              std::abs(mu_batch(2.0, ProblemVariant::FlowTime) - 3.0) <= 1e-12;
    const double grid[] = {1.1, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0, 100.0};
    for (int v = 0; v < 2 && ok; ++v) {
        const auto variant = v == 0 ? ProblemVariant::FlowTimeEnergy : ProblemVariant::FlowTime;
        for (int i = 1; i < 8; ++i) {
            if (!(mu_batch(grid[i], variant) < mu_batch(grid[i - 1], variant))) ok = false;
        }
    }
    report(1, ok, "mu(2) = 6 (flow+energy) and 3 (flow), strictly decreasing in alpha");
}

// 2. online constants
void criterion2() {
    char detail[256];
    const auto r2 = online_constants(2.0, 1.0 / 6.0, 1.0 / 36.0, ProblemVariant::FlowTimeEnergy);
    const auto r3 = online_constants(3.0, 1.0 / 6.0, 1.0 / 36.0, ProblemVariant::FlowTimeEnergy);
    const auto rf = online_constants(2.0, 1.0 / 6.0, 1.0 / 36.0, ProblemVariant::FlowTime);
    const bool ok2 = r2.c >= 17.0 && r2.c <= 17.3 && r2.kappa <= 693.0;
    const bool ok3 = r3.c >= 16.5 && r3.c <= 16.8 && r3.kappa <= 680.0;
    const bool okf = rf.kappa <= 346.5;
    std::snprintf(detail, sizeof(detail),
                  "online constants: alpha=2 c=%.4f kappa=%.2f | alpha=3 c=%.4f kappa=%.2f | "
                  "flow kappa=%.2f",
                  r2.c, r2.kappa, r3.c, r3.kappa, rf.kappa);
    report(2, ok2 && ok3 && okf, detail);
}

// 3. offline figure reproduction
void criterion3(int reps) {
    auto plan = reproduce_plan("offline", reps);
    const auto rows = run_reproduce(plan);
    bool ok = true;
    std::string detail = "offline means vs reference (tolerance 5%):";
    for (const auto& row : rows) {
        const bool hit = row.rel_error <= plan.tolerance;
        if (!hit) ok = false;
        char buf[128];
        std::snprintf(buf, sizeof(buf), " [a=%g %s %.1f/%g %s]", row.alpha, row.policy.c_str(),
                      row.measured, row.reference, hit ? "ok" : "off");
        detail += buf;
    }
    report(3, ok, detail);
}

// 4. online figure reproduction (smoke by default, --full for the real scale)
void criterion4(bool full) {
    bool ok = true;
    std::string detail = full ? "online means vs reference (1000 slots, 200 reps, 10%):"
                              : "online means vs reference (smoke: 100 slots, 20 reps, 20%):";
    for (const char* figure : {"online-2", "online-2.5", "online-3"}) {
        auto plan = reproduce_plan(figure, full ? 200 : 20);
        double tolerance = full ? 0.10 : 0.20;
        if (!full) {
            for (auto& cfg : plan.configs) cfg.slots = 100;
        }
        const auto rows = run_reproduce(plan);
        for (const auto& row : rows) {
            const bool hit = row.rel_error <= tolerance;
            if (!hit) ok = false;
            char buf[128];
            std::snprintf(buf, sizeof(buf), " [a=%g %s %.1f/%g %s]", row.alpha, row.policy.c_str(),
                          row.measured, row.reference, hit ? "ok" : "off");
            detail += buf;
        }
    }
    report(4, ok, detail);
}

// 5. empirical ratio never beats the proved batch bound
void criterion5() {
    const double alphas[] = {1.5, 2.0, 3.0, 5.0};
    bool ok = true;
    double worst_gap = -1e300;
    SimOptions opts;
    opts.detail = TraceDetail::MetricsOnly;
    for (int i = 0; i < 1000 && ok; ++i) {
        const std::uint64_t seed = replication_seed(515, static_cast<std::uint64_t>(i));
        Rng rng(seed);
        const double alpha = alphas[i % 4];
        const int count = 1 + static_cast<int>(rng.uniform01() * 199);
        const double p = std::max(0.5, count * (0.5 + 1.5 * rng.uniform01()));
        PowerModel m(alpha, p);
        const auto w = gen_batch(count, 20.0, seed);
        const auto te = simulate(w, PolicySpec::parse("equi"), m, ProblemVariant::FlowTime, opts);
        const auto th = simulate(w, PolicySpec::parse("hesrpt"), m, ProblemVariant::FlowTime, opts);
        const double ratio = flow_time(te) / flow_time(th);
        const double bound = mu_batch(alpha, ProblemVariant::FlowTime);
        worst_gap = std::max(worst_gap, ratio - bound);
        if (!approx_leq(ratio, bound, 1e-9)) ok = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "flow(EQUI)/flow(heSRPT) <= mu(alpha) on 1000 batch instances "
                  "(worst ratio-bound gap %.3g)",
                  worst_gap);
    report(5, ok, detail);
}

// 6. potential-function invariants on coupled traces
void criterion6() {
    bool ok = true;
    int batch_checked = 0, online_checked = 0;
    std::string first_failure;

    for (int i = 0; i < 100; ++i) {
        const std::uint64_t seed = replication_seed(616, static_cast<std::uint64_t>(i));
        Rng rng(seed);
        const double alpha = 1.3 + rng.uniform01() * 3.7;
        const double p = 1.0 + rng.uniform01() * 40.0;
        const int count = 1 + static_cast<int>(rng.uniform01() * 40);
        PowerModel m(alpha, p);
        const auto w = gen_batch(count, 0.5 + rng.uniform01() * 8.0, seed);
        const auto variant = ProblemVariant::FlowTimeEnergy;
        const auto [ta, tr] =
            simulate_coupled(w, PolicySpec::parse("equi"), PolicySpec::parse("hesrpt"), m, variant);
        const double c1 = batch_potential_c1(alpha, variant);
        const double kappa = mu_batch(alpha, variant);
        const auto jumps = check_boundary_jumps(ta, tr, PotentialKind::BatchSurplus, c1, m, variant);
        const auto runs =
            check_running_condition(ta, tr, PotentialKind::BatchSurplus, c1, kappa, m, variant);
        if (!jumps.empty() || !runs.empty()) {
            ok = false;
            if (first_failure.empty()) {
                first_failure = "batch seed " + std::to_string(seed);
            }
        }
        ++batch_checked;
    }

    const auto variant = ProblemVariant::FlowTimeEnergy;
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t seed = replication_seed(617, static_cast<std::uint64_t>(i));
        Rng rng(seed);
        const double alpha = i % 2 == 0 ? 2.0 : 3.0;
        const double p = 1.0 + rng.uniform01() * 25.0;
        PowerModel m(alpha, p);
        const auto w = gen_slotted_poisson(3 + static_cast<int>(rng.uniform01() * 9),
                                           1.0 + rng.uniform01() * 3.0,
                                           0.5 + rng.uniform01() * 4.0, seed);
        if (w.jobs.empty()) continue;
        const auto bounds = online_constants(alpha, 1.0 / 6.0, 1.0 / 36.0, variant);
        const auto [ta, tr] = simulate_coupled(w, PolicySpec::parse("lcfs:beta=1/6"),
                                               PolicySpec::parse("hesrpt"), m, variant);
        const auto jumps =
            check_boundary_jumps(ta, tr, PotentialKind::OnlineRank, bounds.c, m, variant);
        const auto runs = check_running_condition(ta, tr, PotentialKind::OnlineRank, bounds.c,
                                                  bounds.kappa, m, variant);
        if (!jumps.empty() || !runs.empty()) {
            ok = false;
            if (first_failure.empty()) {
                first_failure = "online seed " + std::to_string(seed);
            }
        }
        ++online_checked;
    }

    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "potential jumps and running condition clean on %d batch + %d online instances%s%s",
                  batch_checked, online_checked, first_failure.empty() ? "" : "; first failure: ",
                  first_failure.c_str());
    report(6, ok, detail);
}

// 7. structural equalities
void criterion7() {
    bool ok = true;
    std::string what;

    for (int i = 0; i < 100 && ok; ++i) {
        const std::uint64_t seed = replication_seed(717, static_cast<std::uint64_t>(i));
        Rng rng(seed);
        Workload w;
        if (i % 2 == 0) {
            w = gen_batch(1 + static_cast<int>(rng.uniform01() * 60),
                          0.5 + rng.uniform01() * 10.0, seed);
        } else {
            w = gen_slotted_poisson(2 + static_cast<int>(rng.uniform01() * 8),
                                    1.0 + rng.uniform01() * 4.0, 0.5 + rng.uniform01() * 5.0,
                                    seed);
            if (w.jobs.empty()) continue;
        }
        PowerModel m(1.2 + rng.uniform01() * 5.0, 0.5 + rng.uniform01() * 50.0);
        const auto variant =
            i % 3 == 0 ? ProblemVariant::FlowTime : ProblemVariant::FlowTimeEnergy;
        const auto tl = simulate(w, PolicySpec::parse("lcfs:beta=1"), m, variant);
        const auto te = simulate(w, PolicySpec::parse("equi"), m, variant);
        if (!traces_identical(tl, te)) {
            ok = false;
            what = "lcfs beta=1 trace differs from equi";
        }
        // the two flow-time formulas agree on every trace or flow_time throws
        try {
            flow_time(tl);
            flow_time(te);
        } catch (const std::exception& e) {
            ok = false;
            what = e.what();
        }
    }

    Rng rng(718);
    for (int i = 0; i < 1000 && ok; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform01() * 300);
        const double budget = 0.5 + rng.uniform01() * 2000.0;
        const double alpha = 1.1 + rng.uniform01() * 19.0;
        const auto alloc = hesrpt_allocation(n, budget, alpha);
        double sum = 0.0;
        for (double k : alloc) sum += k;
        if (std::abs(sum - budget) > 1e-9 * budget) {
            ok = false;
            what = "hesrpt allocation does not telescope";
        }
    }

    report(7, ok,
           ok ? "lcfs(beta=1) == equi bit-exact on 100 workloads; hesrpt allocations telescope; "
                "flow-time formulas agree"
              : what);
}

// 8. power feasibility everywhere
void criterion8() {
    // The engine validates the sum-power budget on every interval of every
    // simulation in this binary and throws on violation, so reaching this
    // point already certifies the budget. Re-run a dedicated mix with caps
    // checks on every interval.
    bool ok = true;
    std::string what;
    SimOptions opts;
    opts.caps_check = CapsCheck::Full;
    int traces = 0;
    try {
        for (int i = 0; i < 40; ++i) {
            const std::uint64_t seed = replication_seed(818, static_cast<std::uint64_t>(i));
            Rng rng(seed);
            PowerModel m(1.2 + rng.uniform01() * 8.0, 0.5 + rng.uniform01() * 60.0);
            Workload w;
            if (i % 2 == 0) {
                w = gen_batch(1 + static_cast<int>(rng.uniform01() * 50),
                              0.5 + rng.uniform01() * 8.0, seed);
            } else {
                w = gen_slotted_poisson(2 + static_cast<int>(rng.uniform01() * 8),
                                        1.0 + rng.uniform01() * 4.0,
                                        0.5 + rng.uniform01() * 4.0, seed);
                if (w.jobs.empty()) continue;
            }
            for (const char* name : {"equi", "hesrpt", "lcfs:beta=1/6", "lcfs:beta=0.5"}) {
                for (auto variant : {ProblemVariant::FlowTime, ProblemVariant::FlowTimeEnergy}) {
                    const auto trace = simulate(w, PolicySpec::parse(name), m, variant, opts);
                    for (const auto& iv : trace.intervals) {
                        if (iv.total_power > m.p_budget() + 1e-9) {
                            ok = false;
                            what = "interval exceeds budget";
                        }
                        if (!check_speed_caps(iv.assignment, m).pass) {
                            ok = false;
                            what = "speed caps violated";
                        }
                    }
                    ++traces;
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        what = e.what();
    }
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "sum-power constraint and speed caps hold on every interval (%d dedicated "
                  "traces; engine enforces the budget on all runs)%s%s",
                  traces, ok ? "" : ": ", what.c_str());
    report(8, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    bool full = false;
    int only = 0;
    int reps3 = 500;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--full") == 0) full = true;
        else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--reps3") == 0 && i + 1 < argc)
            reps3 = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: %s [--full] [--only N] [--reps3 N]\n", argv[0]);
            return 2;
        }
    }

    if (!only || only == 1) criterion1();
    if (!only || only == 2) criterion2();
    if (!only || only == 3) criterion3(reps3);
    if (!only || only == 4) criterion4(full);
    if (!only || only == 5) criterion5();
    if (!only || only == 6) criterion6();
    if (!only || only == 7) criterion7();
    if (!only || only == 8) criterion8();

    std::printf("%d criterion failure(s)\n", g_failures);
    return g_failures;
}
