#include "speedsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace speedsim {

PowerModel::PowerModel(double alpha, double p_budget)
    : alpha_(alpha), p_budget_(p_budget) {
    if (!(alpha > 1.0)) {
        throw std::invalid_argument("PowerModel: alpha must be > 1");
    }
    if (!(p_budget > 0.0) || !std::isfinite(p_budget)) {
        throw std::invalid_argument("PowerModel: p_budget must be positive and finite");
    }
}

double PowerModel::power(double speed) const {
    if (speed < 0.0) throw std::domain_error("power: negative speed");
    return std::pow(speed, alpha_);
}

double PowerModel::power_inv(double x) const {
    if (x < 0.0) throw std::domain_error("power_inv: negative power");
    return std::pow(x, 1.0 / alpha_);
}

double PowerModel::q(double x) const {
    if (x < 0.0) throw std::domain_error("q: negative argument");
    return std::pow(x, 1.0 - 1.0 / alpha_);
}

double PowerModel::power_cap(int n, ProblemVariant variant) const {
    if (variant == ProblemVariant::FlowTime) return p_budget_;
    return std::min(static_cast<double>(n), p_budget_);
}

double SpeedAssignment::speed_for(std::int64_t id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return speeds[i];
    }
    return 0.0;
}

double assignment_power(const SpeedAssignment& a, const PowerModel& model) {
    double total = 0.0;
    for (double s : a.speeds) {
        if (s > 0.0) total += model.power(s);
    }
    return total;
}

SpeedCapsReport check_speed_caps(const SpeedAssignment& a, const PowerModel& model) {
    SpeedCapsReport report;
    if (a.empty()) return report;

    const double root_total = model.power_inv(assignment_power(a, model));
    std::vector<double> sorted = a.speeds;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    double prefix = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= sorted.size(); ++k) {
        prefix += sorted[k - 1];
        const double cap = model.q(static_cast<double>(k)) * root_total;
        const double margin = cap - prefix;
        if (margin < -kPowerSlack) {
            report.pass = false;
            report.k = static_cast<int>(k);
            report.margin = margin;
            return report;
        }
        min_margin = std::min(min_margin, margin);
    }
    report.margin = min_margin;
    return report;
}

std::vector<double> speeds_to_servers(const SpeedAssignment& a, const PowerModel& model) {
    std::vector<double> servers(a.speeds.size());
    for (std::size_t i = 0; i < a.speeds.size(); ++i) {
        servers[i] = model.power(a.speeds[i]);
    }
    return servers;
}

std::vector<double> servers_to_speeds(const std::vector<double>& servers, const PowerModel& model) {
    std::vector<double> speeds(servers.size());
    for (std::size_t i = 0; i < servers.size(); ++i) {
        speeds[i] = model.power_inv(servers[i]);
    }
    return speeds;
}

}  // namespace speedsim
