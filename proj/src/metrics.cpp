#include "speedsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace speedsim {

double flow_time(const Trace& trace) {
    if (static_cast<std::int64_t>(trace.completions.size()) != trace.job_count) {
        throw std::invalid_argument("flow_time: trace has unfinished jobs");
    }
    double by_sojourn = 0.0;
    for (const auto& [id, rec] : trace.completions) {
        by_sojourn += rec.departure - rec.arrival;
    }
    double by_integral = 0.0;
    for (const auto& iv : trace.intervals) {
        by_integral += iv.n_active * (iv.t_end - iv.t_start);
    }
    const double scale = std::max({1.0, std::abs(by_sojourn), std::abs(by_integral)});
    if (std::abs(by_sojourn - by_integral) > 1e-9 * scale) {
        throw std::logic_error("flow_time: sojourn sum and n(t) integral disagree");
    }
    return by_sojourn;
}

double energy(const Trace& trace) {
    double total = 0.0;
    for (const auto& iv : trace.intervals) {
        total += iv.total_power * (iv.t_end - iv.t_start);
    }
    return total;
}

double objective(const Trace& trace, ProblemVariant variant) {
    const double ft = flow_time(trace);
    if (variant == ProblemVariant::FlowTime) return ft;
    return ft + energy(trace);
}

MetricsReport compute_metrics(const Trace& trace, ProblemVariant variant) {
    MetricsReport r;
    r.flow_time = flow_time(trace);
    r.energy = energy(trace);
    r.objective = variant == ProblemVariant::FlowTime ? r.flow_time : r.flow_time + r.energy;
    r.job_count = trace.job_count;
    r.mean_flow_time = trace.job_count > 0 ? r.flow_time / trace.job_count : 0.0;
    r.makespan = trace.makespan;
    return r;
}

const char* MetricsReport::csv_header() {
    return "flow_time,energy,objective,mean_flow_time,makespan,job_count";
}

std::string MetricsReport::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%lld", flow_time, energy,
                  objective, mean_flow_time, makespan, static_cast<long long>(job_count));
    return buf;
}

}  // namespace speedsim
