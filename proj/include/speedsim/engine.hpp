#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "speedsim/model.hpp"
#include "speedsim/policies.hpp"
#include "speedsim/workload.hpp"

namespace speedsim {

// One stretch of constant speeds. No job arrives or completes strictly inside.
struct TraceInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    int n_active = 0;
    double total_power = 0.0;
    SpeedAssignment assignment;  // empty under TraceDetail::MetricsOnly
};

struct CompletionRecord {
    double arrival = 0.0;
    double departure = 0.0;
    double size = 0.0;
};

// Piecewise-constant speed profile plus per-job completion records. Intervals
// tile [0, makespan]. Remaining-work curves are reconstructed by walking the
// intervals (see analysis).
struct Trace {
    std::vector<TraceInterval> intervals;
    std::map<std::int64_t, CompletionRecord> completions;
    std::int64_t job_count = 0;
    double makespan = 0.0;
    bool full_detail = true;
};

enum class TraceDetail { Full, MetricsOnly };

// Feasibility is asserted on every interval either way; caps checks sort the
// speeds, so large experiment runs sample them.
enum class CapsCheck { Off, Sampled, Full };

struct SimOptions {
    TraceDetail detail = TraceDetail::Full;
    CapsCheck caps_check = CapsCheck::Sampled;
    bool recheck_hesrpt_order = false;  // debug: assert order preserved across events
};

Trace simulate(const Workload& workload, const PolicySpec& spec, const PowerModel& model,
               ProblemVariant variant, const SimOptions& opts = {});

// Policy hook for tests and fault injection.
using DecideFn =
    std::function<SpeedAssignment(const SystemSnapshot&, const PowerModel&, ProblemVariant)>;

Trace simulate_custom(const Workload& workload, const DecideFn& decide_fn,
                      const PowerModel& model, ProblemVariant variant,
                      const SimOptions& opts = {});

// Runs both policies on the identical workload and refines both traces onto
// the union of their interval boundaries, so potentials can be evaluated
// pointwise.
std::pair<Trace, Trace> simulate_coupled(const Workload& workload, const PolicySpec& a,
                                         const PolicySpec& b, const PowerModel& model,
                                         ProblemVariant variant, const SimOptions& opts = {});

std::pair<Trace, Trace> refine_to_common_boundaries(const Trace& a, const Trace& b);

bool traces_identical(const Trace& a, const Trace& b);

// Line format: "I t_start t_end n total_power" / "C id arrival departure size".
void save_trace(const Trace& trace, const std::string& path);

}  // namespace speedsim
