#pragma once

#include <string>

#include "speedsim/engine.hpp"
#include "speedsim/model.hpp"

namespace speedsim {

struct MetricsReport {
    double flow_time = 0.0;
    double energy = 0.0;
    double objective = 0.0;
    double mean_flow_time = 0.0;
    double makespan = 0.0;
    std::int64_t job_count = 0;

    static const char* csv_header();  // column order is part of the format
    std::string csv_row() const;
};

// Computed both as the sum of sojourns and as the integral of n(t); the two
// must agree to 1e-9 relative. Throws on an incomplete trace.
double flow_time(const Trace& trace);

// Integral of total power over the intervals.
double energy(const Trace& trace);

double objective(const Trace& trace, ProblemVariant variant);

MetricsReport compute_metrics(const Trace& trace, ProblemVariant variant);

}  // namespace speedsim
