#include "doctest.h"

#include <algorithm>
#include <stdexcept>

#include "speedsim/engine.hpp"
#include "speedsim/metrics.hpp"
#include "speedsim/policies.hpp"

using namespace speedsim;

namespace {

Trace equi_two_job_trace() {
    Workload w;
    w.jobs = {Job{1, 0.0, 1.0}, Job{2, 0.0, 2.0}};
    return simulate(w, PolicySpec::parse("equi"), PowerModel(2.0, 2.0),
                    ProblemVariant::FlowTimeEnergy);
}

Trace hesrpt_two_job_trace() {
    Workload w;
    w.jobs = {Job{1, 0.0, 1.0}, Job{2, 0.0, 2.0}};
    return simulate(w, PolicySpec::parse("hesrpt"), PowerModel(2.0, 2.0),
                    ProblemVariant::FlowTimeEnergy);
}

}  // namespace

TEST_CASE("flow time of the hand traces") {
    CHECK(flow_time(equi_two_job_trace()) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(flow_time(hesrpt_two_job_trace()) == doctest::Approx(2.638958433764684).epsilon(1e-10));

    Workload w;
    w.jobs = {Job{1, 0.0, 5.0}};
    const auto trace =
        simulate(w, PolicySpec::parse("equi"), PowerModel(2.0, 1.0), ProblemVariant::FlowTimeEnergy);
    CHECK(flow_time(trace) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("energy of the hand traces") {
    CHECK(energy(equi_two_job_trace()) == doctest::Approx(3.0).epsilon(1e-12));
    const auto h = hesrpt_two_job_trace();
    CHECK(energy(h) == doctest::Approx(2.0 * h.makespan).epsilon(1e-10));
    CHECK(energy(Trace{}) == 0.0);
}

TEST_CASE("objective dispatch") {
    const auto trace = equi_two_job_trace();
    CHECK(objective(trace, ProblemVariant::FlowTimeEnergy) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(objective(trace, ProblemVariant::FlowTime) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(objective(Trace{}, ProblemVariant::FlowTimeEnergy) == 0.0);
}

TEST_CASE("incomplete trace is rejected") {
    Trace broken = equi_two_job_trace();
    broken.completions.erase(2);
    CHECK_THROWS_AS(flow_time(broken), std::invalid_argument);
}

TEST_CASE("the two flow-time formulas agree on generated traces") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto w = gen_slotted_poisson(5, 2.0, 3.0, seed);
        if (w.jobs.empty()) continue;
        PowerModel m(2.0, 5.0);
        for (const char* name : {"equi", "hesrpt", "lcfs:beta=0.25"}) {
            const auto trace = simulate(w, PolicySpec::parse(name), m, ProblemVariant::FlowTime);
            // flow_time() itself checks the sum-of-sojourns against the
            // n(t) integral and throws on mismatch
            CHECK_NOTHROW(flow_time(trace));
        }
    }
}

TEST_CASE("energy never exceeds budget times makespan") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto w = gen_batch(20, 2.0, seed);
        PowerModel m(2.0, 7.0);
        for (const char* name : {"equi", "hesrpt", "lcfs:beta=0.5"}) {
            const auto trace =
                simulate(w, PolicySpec::parse(name), m, ProblemVariant::FlowTimeEnergy);
            CHECK(energy(trace) <= m.p_budget() * trace.makespan + 1e-9);
        }
    }
}

TEST_CASE("metrics report fields and csv shape") {
    const auto report = compute_metrics(equi_two_job_trace(), ProblemVariant::FlowTimeEnergy);
    CHECK(report.flow_time == doctest::Approx(3.0));
    CHECK(report.energy == doctest::Approx(3.0));
    CHECK(report.objective == doctest::Approx(6.0));
    CHECK(report.mean_flow_time == doctest::Approx(1.5));
    CHECK(report.job_count == 2);
    CHECK(report.makespan == doctest::Approx(2.0));

    const std::string row = report.csv_row();
    const std::string header = MetricsReport::csv_header();
    CHECK(std::count(row.begin(), row.end(), ',') ==
          std::count(header.begin(), header.end(), ','));
}
