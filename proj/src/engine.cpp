#include "speedsim/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace speedsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_assignment(const SpeedAssignment& a, const SystemSnapshot& snap,
                         const PowerModel& model, const SimOptions& opts,
                         std::size_t interval_index) {
    if (a.size() != snap.active.size()) {
        throw std::logic_error("simulate: assignment size does not match snapshot");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.speeds.size(); ++i) {
        const double s = a.speeds[i];
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::logic_error("simulate: negative or non-finite speed");
        }
        if (s > 0.0) total += model.power(s);
    }
    // Hard budget. The variant-dependent cap min{n, p} is a policy property
    // asserted in tests, not here: heSRPT spends p in both variants.
    if (total > model.p_budget() + kPowerSlack) {
        throw std::logic_error("simulate: assignment exceeds the power budget");
    }
    const bool check_caps =
        opts.caps_check == CapsCheck::Full ||
        (opts.caps_check == CapsCheck::Sampled && (interval_index % 64 == 0 || a.size() <= 8));
    if (check_caps && !a.empty()) {
        const auto report = check_speed_caps(a, model);
        if (!report.pass) {
            throw std::logic_error("simulate: speed caps violated at prefix " +
                                   std::to_string(report.k));
        }
    }
}

}  // namespace

Trace simulate_custom(const Workload& workload, const DecideFn& decide_fn,
                      const PowerModel& model, ProblemVariant variant,
                      const SimOptions& opts) {
    Trace trace;
    trace.full_detail = (opts.detail == TraceDetail::Full);
    trace.job_count = static_cast<std::int64_t>(workload.jobs.size());
    if (workload.jobs.empty()) return trace;

    SystemSnapshot snap;
    snap.time = 0.0;
    std::size_t next_arrival = 0;

    double t = 0.0;
    while (true) {
        // departures are applied before arrivals at the same instant, so a
        // snapshot never mixes a finished job with one arriving right now
        while (next_arrival < workload.jobs.size() &&
               workload.jobs[next_arrival].arrival <= t) {
            const Job& j = workload.jobs[next_arrival];
            snap.active.push_back(JobState{j, j.size});
            ++next_arrival;
        }
        if (snap.active.empty() && next_arrival == workload.jobs.size()) break;

        snap.time = t;
        SpeedAssignment assignment = decide_fn(snap, model, variant);
        validate_assignment(assignment, snap, model, opts, trace.intervals.size());

        double dt_completion = kInf;
        for (std::size_t i = 0; i < snap.active.size(); ++i) {
            const double s = assignment.speeds[i];
            if (s > 0.0) dt_completion = std::min(dt_completion, snap.active[i].remaining / s);
        }
        const double dt_arrival =
            next_arrival < workload.jobs.size() ? workload.jobs[next_arrival].arrival - t : kInf;
        const double dt = std::min(dt_completion, dt_arrival);
        if (dt == kInf) {
            throw std::runtime_error("simulate: stalled (no positive speed, no pending arrival)");
        }

        const double t_next = t + dt;
        double total_power = 0.0;
        for (double s : assignment.speeds) {
            if (s > 0.0) total_power += model.power(s);
        }

        TraceInterval interval;
        interval.t_start = t;
        interval.t_end = t_next;
        interval.n_active = snap.n();
        interval.total_power = total_power;
        if (opts.detail == TraceDetail::Full) interval.assignment = assignment;
        trace.intervals.push_back(std::move(interval));

        if (opts.recheck_hesrpt_order && snap.n() > 1) {
            // within an interval shorter jobs run faster, so the descending
            // remaining-size order must be the same at both ends
            auto order_of = [&](bool at_end) {
                std::vector<int> order(snap.active.size());
                std::iota(order.begin(), order.end(), 0);
                std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
                    const auto& x = snap.active[lhs];
                    const auto& y = snap.active[rhs];
                    const double rx = x.remaining - (at_end ? assignment.speeds[lhs] * dt : 0.0);
                    const double ry = y.remaining - (at_end ? assignment.speeds[rhs] * dt : 0.0);
                    if (rx != ry) return rx > ry;
                    if (x.job.arrival != y.job.arrival) return x.job.arrival > y.job.arrival;
                    return x.job.id > y.job.id;
                });
                return order;
            };
            if (order_of(false) != order_of(true)) {
                throw std::logic_error("simulate: remaining-size order inverted inside interval");
            }
        }

        std::vector<JobState> still_active;
        still_active.reserve(snap.active.size());
        for (std::size_t i = 0; i < snap.active.size(); ++i) {
            JobState js = snap.active[i];
            js.remaining -= assignment.speeds[i] * dt;
            if (js.remaining <= kCompletionTol) {
                trace.completions[js.job.id] =
                    CompletionRecord{js.job.arrival, t_next, js.job.size};
            } else {
                still_active.push_back(js);
            }
        }
        snap.active = std::move(still_active);
        t = t_next;
    }

    trace.makespan = t;
    return trace;
}

Trace simulate(const Workload& workload, const PolicySpec& spec, const PowerModel& model,
               ProblemVariant variant, const SimOptions& opts) {
    return simulate_custom(
        workload,
        [&spec](const SystemSnapshot& snap, const PowerModel& m, ProblemVariant v) {
            return decide(spec, snap, m, v);
        },
        model, variant, opts);
}

std::pair<Trace, Trace> refine_to_common_boundaries(const Trace& a, const Trace& b) {
    std::set<double> cuts;
    for (const auto& iv : a.intervals) {
        cuts.insert(iv.t_start);
        cuts.insert(iv.t_end);
    }
    for (const auto& iv : b.intervals) {
        cuts.insert(iv.t_start);
        cuts.insert(iv.t_end);
    }

    auto refine = [&cuts](const Trace& src) {
        Trace out = src;
        out.intervals.clear();
        for (const auto& iv : src.intervals) {
            auto lo = cuts.upper_bound(iv.t_start);
            double prev = iv.t_start;
            for (auto it = lo; it != cuts.end() && *it < iv.t_end; ++it) {
                TraceInterval piece = iv;
                piece.t_start = prev;
                piece.t_end = *it;
                out.intervals.push_back(piece);
                prev = *it;
            }
            TraceInterval piece = iv;
            piece.t_start = prev;
            piece.t_end = iv.t_end;
            out.intervals.push_back(std::move(piece));
        }
        return out;
    };
    return {refine(a), refine(b)};
}

std::pair<Trace, Trace> simulate_coupled(const Workload& workload, const PolicySpec& a,
                                         const PolicySpec& b, const PowerModel& model,
                                         ProblemVariant variant, const SimOptions& opts) {
    SimOptions full = opts;
    full.detail = TraceDetail::Full;
    Trace ta = simulate(workload, a, model, variant, full);
    Trace tb = simulate(workload, b, model, variant, full);
    return refine_to_common_boundaries(ta, tb);
}

bool traces_identical(const Trace& a, const Trace& b) {
    if (a.job_count != b.job_count || a.makespan != b.makespan) return false;
    if (a.intervals.size() != b.intervals.size()) return false;
    for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        const auto& x = a.intervals[i];
        const auto& y = b.intervals[i];
        if (x.t_start != y.t_start || x.t_end != y.t_end || x.n_active != y.n_active ||
            x.total_power != y.total_power)
            return false;
        if (x.assignment.ids != y.assignment.ids || x.assignment.speeds != y.assignment.speeds)
            return false;
    }
    if (a.completions.size() != b.completions.size()) return false;
    auto it = b.completions.begin();
    for (const auto& [id, rec] : a.completions) {
        if (it->first != id || it->second.arrival != rec.arrival ||
            it->second.departure != rec.departure || it->second.size != rec.size)
            return false;
        ++it;
    }
    return true;
}

void save_trace(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_trace: cannot open " + path);
    auto fmt = [](double v) {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        if (ec != std::errc()) throw std::runtime_error("save_trace: format failed");
        return std::string(buf, ptr);
    };
    for (const auto& iv : trace.intervals) {
        out << "I " << fmt(iv.t_start) << ' ' << fmt(iv.t_end) << ' ' << iv.n_active << ' '
            << fmt(iv.total_power) << '\n';
    }
    for (const auto& [id, rec] : trace.completions) {
        out << "C " << id << ' ' << fmt(rec.arrival) << ' ' << fmt(rec.departure) << ' '
            << fmt(rec.size) << '\n';
    }
    if (!out) throw std::runtime_error("save_trace: write failed for " + path);
}

}  // namespace speedsim
