#include "speedsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "speedsim/metrics.hpp"

#include "json.hpp"

namespace speedsim {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 1.0)) throw std::domain_error("alpha must be > 1");
}

// remaining size of a job under the reference; 0 once finished there
double ref_remaining(const SystemSnapshot& ref, std::int64_t id) {
    for (const auto& js : ref.active) {
        if (js.job.id == id) return js.remaining;
    }
    return 0.0;
}

void require_same_universe(const SystemSnapshot& alg, const SystemSnapshot& ref) {
    if (std::abs(alg.time - ref.time) > 1e-9) {
        throw std::invalid_argument("potential: snapshots taken at different times");
    }
    for (const auto& a : alg.active) {
        for (const auto& r : ref.active) {
            if (a.job.id == r.job.id && (a.job.size != r.job.size || a.job.arrival != r.job.arrival)) {
                throw std::invalid_argument("potential: mismatched job universes");
            }
        }
    }
}

double online_weight(int rank, const PowerModel& model, ProblemVariant variant) {
    const double r = static_cast<double>(rank);
    const double capped =
        variant == ProblemVariant::FlowTime ? model.p_budget() : std::min(r, model.p_budget());
    return r / (model.power_inv(capped) * model.q(r));
}

double sf_prefactor(int n, const PowerModel& model, ProblemVariant variant) {
    const double cap = variant == ProblemVariant::FlowTime
                           ? model.p_budget()
                           : std::min(static_cast<double>(n), model.p_budget());
    return model.power_inv(static_cast<double>(n) / cap);
}

}  // namespace

double mu_batch(double alpha, ProblemVariant variant) {
    require_alpha(alpha);
    const double base = (2.0 - 1.0 / alpha) / (1.0 - 1.0 / alpha);
    return variant == ProblemVariant::FlowTimeEnergy ? 2.0 * base : base;
}

double batch_potential_c1(double alpha, ProblemVariant variant) {
    require_alpha(alpha);
    const double base = 1.0 / (1.0 - 1.0 / alpha);
    return variant == ProblemVariant::FlowTimeEnergy ? 2.0 * base : base;
}

BoundReport batch_constants(double alpha, ProblemVariant variant) {
    BoundReport r;
    r.alpha = alpha;
    r.variant = variant;
    r.setting = Setting::Batch;
    r.c1 = batch_potential_c1(alpha, variant);
    r.kappa = mu_batch(alpha, variant);
    return r;
}

bool online_feasible(double alpha, double beta, double gamma) {
    require_alpha(alpha);
    if (!(beta > 0.0) || !(beta < 1.0) || !(gamma > 0.0) || gamma > beta) {
        throw std::domain_error("online_feasible: need 0 < gamma <= beta < 1");
    }
    PowerModel model(alpha, 1.0);
    const double lhs = (1.0 - beta) * (beta - gamma) / model.power_inv(beta);
    return lhs > std::pow(gamma, 1.0 - 1.0 / alpha);
}

BoundReport online_constants(double alpha, double beta, double gamma, ProblemVariant variant) {
    if (!online_feasible(alpha, beta, gamma)) {
        throw std::domain_error(
            "online_constants: (1-beta)(beta-gamma)/P^-1(beta) <= gamma^(1-1/alpha)");
    }
    PowerModel model(alpha, 1.0);
    const double lhs = (1.0 - beta) * (beta - gamma) / model.power_inv(beta);
    const double c = 2.0 / (lhs - std::pow(gamma, 1.0 - 1.0 / alpha));
    if (!(c * lhs > 1.0)) {
        throw std::domain_error("online_constants: c (1-beta)(beta-gamma)/P^-1(beta) <= 1");
    }
    BoundReport r;
    r.alpha = alpha;
    r.variant = variant;
    r.setting = Setting::Online;
    r.beta = beta;
    r.gamma = gamma;
    r.c = c;
    r.kappa = (2.0 + c) / gamma;
    if (variant == ProblemVariant::FlowTime) r.kappa /= 2.0;
    return r;
}

double phi_sf(const SystemSnapshot& alg, const SystemSnapshot& ref, double c1,
              const PowerModel& model, ProblemVariant variant) {
    require_same_universe(alg, ref);
    const int n = alg.n();
    if (n == 0) return 0.0;
    double surplus = 0.0;
    for (const auto& js : alg.active) {
        surplus += std::max(0.0, js.remaining - ref_remaining(ref, js.job.id));
    }
    return c1 * sf_prefactor(n, model, variant) * surplus;
}

double phi_online(const SystemSnapshot& alg, const SystemSnapshot& ref, double c,
                  const PowerModel& model, ProblemVariant variant) {
    require_same_universe(alg, ref);
    double total = 0.0;
    for (std::size_t i = 0; i < alg.active.size(); ++i) {
        const auto& js = alg.active[i];
        const double surplus = js.remaining - ref_remaining(ref, js.job.id);
        if (surplus > 0.0) {
            total += online_weight(static_cast<int>(i) + 1, model, variant) * surplus;
        }
    }
    return c * total;
}

double phi_drift_sf(const SystemSnapshot& alg, const SpeedAssignment& alg_speeds,
                    const SystemSnapshot& ref, const SpeedAssignment& ref_speeds, double c1,
                    const PowerModel& model, ProblemVariant variant) {
    const int n = alg.n();
    if (n == 0) return 0.0;
    double rate = 0.0;
    for (std::size_t i = 0; i < alg.active.size(); ++i) {
        const auto& js = alg.active[i];
        if (js.remaining - ref_remaining(ref, js.job.id) > 0.0) {
            rate += ref_speeds.speed_for(js.job.id) - alg_speeds.speeds[i];
        }
    }
    return c1 * sf_prefactor(n, model, variant) * rate;
}

double phi_drift_online(const SystemSnapshot& alg, const SpeedAssignment& alg_speeds,
                        const SystemSnapshot& ref, const SpeedAssignment& ref_speeds, double c,
                        const PowerModel& model, ProblemVariant variant) {
    double rate = 0.0;
    for (std::size_t i = 0; i < alg.active.size(); ++i) {
        const auto& js = alg.active[i];
        if (js.remaining - ref_remaining(ref, js.job.id) > 0.0) {
            rate += online_weight(static_cast<int>(i) + 1, model, variant) *
                    (ref_speeds.speed_for(js.job.id) - alg_speeds.speeds[i]);
        }
    }
    return c * rate;
}

namespace {

// Walks two traces over the union of their interval boundaries,
// reconstructing per-job remaining work from the stored speeds.
class CoupledWalker {
public:
    CoupledWalker(const Trace& alg, const Trace& ref) : alg_(alg), ref_(ref) {
        if (!alg.full_detail || !ref.full_detail) {
            throw std::invalid_argument("monitor: traces must carry full assignments");
        }
        std::vector<double> cuts;
        auto collect = [&cuts](const Trace& t) {
            for (const auto& iv : t.intervals) {
                cuts.push_back(iv.t_start);
                cuts.push_back(iv.t_end);
            }
        };
        collect(alg);
        collect(ref);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        bounds_ = std::move(cuts);
    }

    struct Side {
        SystemSnapshot snap;     // remaining at segment start
        SpeedAssignment speeds;  // constant over the segment
        double power = 0.0;
    };

    struct Segment {
        double t0 = 0.0, t1 = 0.0;
        Side alg, ref;
    };

    // state advanced dt into the segment (at dt = length: the left limit at
    // the segment end)
    static Side at_end(const Side& side, double dt) {
        Side out = side;
        out.snap.time += dt;
        for (std::size_t i = 0; i < out.snap.active.size(); ++i) {
            out.snap.active[i].remaining -= side.speeds.speeds[i] * dt;
        }
        return out;
    }

    bool next(Segment& seg) {
        if (cursor_ + 1 >= bounds_.size()) return false;
        seg.t0 = bounds_[cursor_];
        seg.t1 = bounds_[cursor_ + 1];
        seg.alg = reconstruct(alg_, alg_pos_, alg_rem_, seg.t0);
        seg.ref = reconstruct(ref_, ref_pos_, ref_rem_, seg.t0);
        advance(alg_, alg_pos_, alg_rem_, seg.t0, seg.t1);
        advance(ref_, ref_pos_, ref_rem_, seg.t0, seg.t1);
        ++cursor_;
        return true;
    }

private:
    Side reconstruct(const Trace& trace, std::size_t& pos,
                     std::unordered_map<std::int64_t, double>& rem, double t0) {
        Side side;
        side.snap.time = t0;
        while (pos < trace.intervals.size() && trace.intervals[pos].t_end <= t0) ++pos;
        if (pos >= trace.intervals.size() || trace.intervals[pos].t_start > t0) {
            return side;  // idle or finished: empty state
        }
        const auto& iv = trace.intervals[pos];
        side.power = iv.total_power;
        side.speeds = iv.assignment;
        side.snap.active.reserve(iv.assignment.ids.size());
        for (std::int64_t id : iv.assignment.ids) {
            auto it = rem.find(id);
            double remaining;
            if (it == rem.end()) {
                const auto rec = trace.completions.find(id);
                if (rec == trace.completions.end()) {
                    throw std::invalid_argument("monitor: interval references unknown job");
                }
                remaining = rec->second.size;
                rem.emplace(id, remaining);
                side.snap.active.push_back(
                    JobState{Job{id, rec->second.arrival, rec->second.size}, remaining});
            } else {
                const auto rec = trace.completions.find(id);
                side.snap.active.push_back(
                    JobState{Job{id, rec->second.arrival, rec->second.size}, it->second});
            }
        }
        return side;
    }

    // Departed jobs simply stop being referenced, so stale map entries are
    // never read again.
    void advance(const Trace& trace, std::size_t pos, std::unordered_map<std::int64_t, double>& rem,
                 double t0, double t1) {
        if (pos >= trace.intervals.size() || trace.intervals[pos].t_start > t0 ||
            trace.intervals[pos].t_end <= t0) {
            return;
        }
        const auto& iv = trace.intervals[pos];
        const double dt = t1 - t0;
        for (std::size_t i = 0; i < iv.assignment.ids.size(); ++i) {
            rem.find(iv.assignment.ids[i])->second -= iv.assignment.speeds[i] * dt;
        }
    }

    const Trace& alg_;
    const Trace& ref_;
    std::vector<double> bounds_;
    std::size_t cursor_ = 0;
    std::size_t alg_pos_ = 0, ref_pos_ = 0;
    std::unordered_map<std::int64_t, double> alg_rem_, ref_rem_;
};

double eval_phi(PotentialKind kind, const CoupledWalker::Side& alg, const CoupledWalker::Side& ref,
                double constant, const PowerModel& model, ProblemVariant variant) {
    return kind == PotentialKind::BatchSurplus
               ? phi_sf(alg.snap, ref.snap, constant, model, variant)
               : phi_online(alg.snap, ref.snap, constant, model, variant);
}

double eval_drift(PotentialKind kind, const CoupledWalker::Side& alg,
                  const CoupledWalker::Side& ref, double constant, const PowerModel& model,
                  ProblemVariant variant) {
    return kind == PotentialKind::BatchSurplus
               ? phi_drift_sf(alg.snap, alg.speeds, ref.snap, ref.speeds, constant, model, variant)
               : phi_drift_online(alg.snap, alg.speeds, ref.snap, ref.speeds, constant, model,
                                  variant);
}

std::vector<std::int64_t> side_ids(const CoupledWalker::Side& side) {
    std::vector<std::int64_t> ids;
    ids.reserve(side.snap.active.size());
    for (const auto& js : side.snap.active) ids.push_back(js.job.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

std::vector<Violation> check_boundary_jumps(const Trace& alg, const Trace& ref,
                                            PotentialKind kind, double constant,
                                            const PowerModel& model, ProblemVariant variant,
                                            const MonitorOptions& opts) {
    std::vector<Violation> out;
    CoupledWalker walker(alg, ref);
    CoupledWalker::Segment seg;
    bool have_prev = false;
    CoupledWalker::Segment prev;

    auto diff = [](const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
        std::vector<std::int64_t> d;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
        return d;
    };
    auto check_jump = [&](const CoupledWalker::Side& alg_before,
                          const CoupledWalker::Side& ref_before,
                          const CoupledWalker::Side& alg_after,
                          const CoupledWalker::Side& ref_after, double when) {
        const double before = eval_phi(kind, alg_before, ref_before, constant, model, variant);
        const double after = eval_phi(kind, alg_after, ref_after, constant, model, variant);

        const auto prev_alg = side_ids(alg_before);
        const auto next_alg = side_ids(alg_after);
        const auto prev_ref = side_ids(ref_before);
        const auto next_ref = side_ids(ref_after);
        const auto arrivals = diff(next_alg, prev_alg);
        const bool departed =
            !diff(prev_alg, next_alg).empty() || !diff(prev_ref, next_ref).empty();

        if (departed) {
            if (after > before + opts.jump_tol) {
                out.push_back(Violation{"departure-jump", when, after, before, after - before});
            }
        } else if (!arrivals.empty() && kind == PotentialKind::OnlineRank) {
            if (std::abs(after - before) > opts.jump_tol) {
                out.push_back(Violation{"arrival-jump", when, after, before,
                                        std::abs(after - before) - opts.jump_tol});
            }
        }
    };

    while (walker.next(seg)) {
        if (have_prev) {
            check_jump(CoupledWalker::at_end(prev.alg, prev.t1 - prev.t0),
                       CoupledWalker::at_end(prev.ref, prev.t1 - prev.t0), seg.alg, seg.ref,
                       seg.t0);
        }
        prev = seg;
        have_prev = true;
    }
    if (have_prev) {
        // final departure empties both systems
        CoupledWalker::Side empty_alg, empty_ref;
        empty_alg.snap.time = prev.t1;
        empty_ref.snap.time = prev.t1;
        check_jump(CoupledWalker::at_end(prev.alg, prev.t1 - prev.t0),
                   CoupledWalker::at_end(prev.ref, prev.t1 - prev.t0), empty_alg, empty_ref,
                   prev.t1);
    }
    return out;
}

std::vector<Violation> check_running_condition(const Trace& alg, const Trace& ref,
                                               PotentialKind kind, double constant, double kappa,
                                               const PowerModel& model, ProblemVariant variant,
                                               const MonitorOptions& opts,
                                               std::vector<PotentialSample>* samples) {
    std::vector<Violation> out;
    CoupledWalker walker(alg, ref);
    CoupledWalker::Segment seg;
    while (walker.next(seg)) {
        const double mid_dt = (seg.t1 - seg.t0) / 2.0;
        const auto alg_mid = CoupledWalker::at_end(seg.alg, mid_dt);
        const auto ref_mid = CoupledWalker::at_end(seg.ref, mid_dt);
        const double drift = eval_drift(kind, alg_mid, ref_mid, constant, model, variant);
        const int n = alg_mid.snap.n();
        const int n_ref = ref_mid.snap.n();
        double lhs = n + drift;
        double rhs = kappa * n_ref;
        if (variant == ProblemVariant::FlowTimeEnergy) {
            lhs += seg.alg.power;
            rhs += kappa * seg.ref.power;
        }
        if (samples) {
            samples->push_back(PotentialSample{
                seg.t0 + mid_dt, eval_phi(kind, alg_mid, ref_mid, constant, model, variant), drift,
                lhs, rhs});
        }
        if (lhs > rhs + opts.run_tol) {
            out.push_back(
                Violation{"running-condition", seg.t0 + mid_dt, lhs, rhs, lhs - rhs - opts.run_tol});
        }
        if (opts.fd_check) {
            const double h = 1e-6 * (seg.t1 - seg.t0);
            const auto at = [&](double dt) {
                return eval_phi(kind, CoupledWalker::at_end(seg.alg, dt),
                                CoupledWalker::at_end(seg.ref, dt), constant, model, variant);
            };
            const double fd = (at(mid_dt + h) - at(mid_dt - h)) / (2.0 * h);
            // a surplus sign change inside the window makes the potential
            // kinked there; skip those segments
            const double d_lo = eval_drift(kind, CoupledWalker::at_end(seg.alg, mid_dt - h),
                                           CoupledWalker::at_end(seg.ref, mid_dt - h), constant,
                                           model, variant);
            const double d_hi = eval_drift(kind, CoupledWalker::at_end(seg.alg, mid_dt + h),
                                           CoupledWalker::at_end(seg.ref, mid_dt + h), constant,
                                           model, variant);
            if (d_lo == drift && d_hi == drift) {
                const double phi_mid = at(mid_dt);
                const double scale =
                    std::max({1.0, std::abs(drift), phi_mid / std::max(seg.t1 - seg.t0, 1e-12)});
                if (std::abs(fd - drift) > 1e-6 * scale) {
                    out.push_back(Violation{"drift-fd-mismatch", seg.t0 + mid_dt, fd, drift,
                                            std::abs(fd - drift)});
                }
            }
        }
    }
    return out;
}

double empirical_cr(const Trace& alg, const Trace& ref, ProblemVariant variant) {
    const double ref_obj = objective(ref, variant);
    if (ref_obj == 0.0) throw std::invalid_argument("empirical_cr: zero reference objective");
    return objective(alg, variant) / ref_obj;
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["variant"] = variant == ProblemVariant::FlowTime ? "flow" : "flow-energy";
    j["setting"] = setting == Setting::Batch ? "batch" : "online";
    j["kappa"] = kappa;
    if (setting == Setting::Online) {
        j["beta"] = beta;
        j["gamma"] = gamma;
        j["c"] = c;
    } else {
        j["c1"] = c1;
    }
    return j.dump(2);
}

std::string violations_to_json(const std::vector<Violation>& violations) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : violations) {
        arr.push_back({{"kind", v.kind},
                       {"time", v.time},
                       {"lhs", v.lhs},
                       {"rhs", v.rhs},
                       {"margin", v.margin}});
    }
    return arr.dump(2);
}

}  // namespace speedsim
