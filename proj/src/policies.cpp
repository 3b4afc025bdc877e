#include "speedsim/policies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace speedsim {

namespace {

double parse_number(std::string_view text) {
    // plain decimal or "num/den"
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        double num = parse_number(text.substr(0, slash));
        double den = parse_number(text.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("PolicySpec: zero denominator");
        return num / den;
    }
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("PolicySpec: bad number '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

PolicySpec PolicySpec::parse(std::string_view text) {
    PolicySpec spec;
    if (text == "equi") {
        spec.kind = PolicyKind::Equi;
        return spec;
    }
    if (text == "hesrpt") {
        spec.kind = PolicyKind::HeSrpt;
        return spec;
    }
    if (text.rfind("lcfs", 0) == 0) {
        spec.kind = PolicyKind::FractionalLcfsEqui;
        spec.beta = 1.0;
        auto rest = text.substr(4);
        if (!rest.empty()) {
            if (rest.front() != ':' || rest.substr(1, 5) != "beta=") {
                throw std::invalid_argument("PolicySpec: expected lcfs:beta=<value>");
            }
            spec.beta = parse_number(rest.substr(6));
        }
        if (!(spec.beta > 0.0) || spec.beta > 1.0) {
            throw std::invalid_argument("PolicySpec: beta must be in (0, 1]");
        }
        return spec;
    }
    throw std::invalid_argument("PolicySpec: unknown policy '" + std::string(text) + "'");
}

std::string PolicySpec::name() const {
    switch (kind) {
        case PolicyKind::Equi: return "equi";
        case PolicyKind::HeSrpt: return "hesrpt";
        case PolicyKind::FractionalLcfsEqui: {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "lcfs:beta=%.6g", beta);
            return buf;
        }
    }
    return "?";
}

RankView compute_ranks(const SystemSnapshot& snap) {
    // The snapshot is ordered by (arrival, id), so ranks are positional.
    RankView view;
    view.ids.reserve(snap.active.size());
    view.ranks.reserve(snap.active.size());
    for (std::size_t i = 0; i < snap.active.size(); ++i) {
        view.ids.push_back(snap.active[i].job.id);
        view.ranks.push_back(static_cast<int>(i) + 1);
    }
    return view;
}

SpeedAssignment equi_decide(const SystemSnapshot& snap, const PowerModel& model,
                            ProblemVariant variant) {
    SpeedAssignment a;
    const int n = snap.n();
    if (n == 0) return a;
    const double speed = model.power_inv(model.power_cap(n, variant) / n);
    a.ids.reserve(n);
    a.speeds.assign(n, speed);
    for (const auto& js : snap.active) a.ids.push_back(js.job.id);
    return a;
}

std::vector<double> hesrpt_allocation(int n, double server_budget, double alpha) {
    if (n == 0) return {};
    if (n < 0) throw std::invalid_argument("hesrpt_allocation: negative n");
    if (!(server_budget > 0.0)) throw std::invalid_argument("hesrpt_allocation: budget must be positive");
    if (!(alpha > 1.0)) throw std::invalid_argument("hesrpt_allocation: alpha must be > 1");

    const double expo = 1.0 / (1.0 - 1.0 / alpha);
    std::vector<double> alloc(n);
    double prev = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double cur = (i == n) ? 1.0 : std::pow(static_cast<double>(i) / n, expo);
        alloc[i - 1] = server_budget * (cur - prev);
        prev = cur;
    }
    return alloc;
}

SpeedAssignment hesrpt_decide(const SystemSnapshot& snap, const PowerModel& model,
                              ProblemVariant /*variant*/) {
    // Same rule for both objectives: the full budget p plays the server count N.
    SpeedAssignment a;
    const int n = snap.n();
    if (n == 0) return a;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        const auto& x = snap.active[lhs];
        const auto& y = snap.active[rhs];
        if (x.remaining != y.remaining) return x.remaining > y.remaining;
        if (x.job.arrival != y.job.arrival) return x.job.arrival > y.job.arrival;
        return x.job.id > y.job.id;
    });

    const auto alloc = hesrpt_allocation(n, model.p_budget(), model.alpha());
    a.ids.resize(n);
    a.speeds.resize(n);
    for (int i = 0; i < n; ++i) a.ids[i] = snap.active[i].job.id;
    for (int pos = 0; pos < n; ++pos) {
        a.speeds[order[pos]] = model.power_inv(alloc[pos]);
    }
    return a;
}

SpeedAssignment lcfs_equi_decide(const SystemSnapshot& snap, const PowerModel& model,
                                 ProblemVariant variant, double beta) {
    if (!(beta > 0.0) || beta > 1.0) {
        throw std::invalid_argument("lcfs_equi_decide: beta must be in (0, 1]");
    }
    SpeedAssignment a;
    const int n = snap.n();
    if (n == 0) return a;

    const int m = std::min(n, static_cast<int>(std::ceil(beta * n)));
    const double speed = model.power_inv(model.power_cap(n, variant) / m);
    a.ids.reserve(n);
    a.speeds.assign(n, 0.0);
    for (const auto& js : snap.active) a.ids.push_back(js.job.id);
    // Snapshot order is (arrival, id), so the m most recent are the last m;
    // simultaneous arrivals break toward higher id.
    for (int i = n - m; i < n; ++i) a.speeds[i] = speed;
    return a;
}

SpeedAssignment decide(const PolicySpec& spec, const SystemSnapshot& snap,
                       const PowerModel& model, ProblemVariant variant) {
    switch (spec.kind) {
        case PolicyKind::Equi: return equi_decide(snap, model, variant);
        case PolicyKind::HeSrpt: return hesrpt_decide(snap, model, variant);
        case PolicyKind::FractionalLcfsEqui:
            return lcfs_equi_decide(snap, model, variant, spec.beta);
    }
    throw std::logic_error("decide: unreachable");
}

}  // namespace speedsim
