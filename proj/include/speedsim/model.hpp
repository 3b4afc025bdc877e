#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace speedsim {

// Objective selector. FlowTime lets every policy spend the full power budget;
// FlowTimeEnergy caps instantaneous spending at min{n, p} and adds the energy
// term to the objective.
enum class ProblemVariant { FlowTime, FlowTimeEnergy };

// Jobs with remaining work below this are treated as complete.
inline constexpr double kCompletionTol = 1e-12;
// Absolute slack allowed on power-feasibility assertions.
inline constexpr double kPowerSlack = 1e-9;

// Power curve P(s) = s^alpha, alpha > 1, with a sum-power budget p across all
// servers. Also hosts the speedup view: k servers give speed k^{1/alpha}.
class PowerModel {
public:
    PowerModel(double alpha, double p_budget);

    double alpha() const { return alpha_; }
    double p_budget() const { return p_budget_; }

    double power(double speed) const;   // P(s) = s^alpha
    double power_inv(double x) const;   // P^{-1}(x) = x^{1/alpha}
    double q(double x) const;           // Q(x) = x / P^{-1}(x) = x^{1-1/alpha}

    // Instantaneous power cap with n active jobs: p under FlowTime,
    // min{n, p} under FlowTimeEnergy.
    double power_cap(int n, ProblemVariant variant) const;

private:
    double alpha_;
    double p_budget_;
};

struct Job {
    std::int64_t id = 0;
    double arrival = 0.0;
    double size = 0.0;
};

struct JobState {
    Job job;
    double remaining = 0.0;
};

// Active jobs at an instant, ordered by (arrival, id).
struct SystemSnapshot {
    double time = 0.0;
    std::vector<JobState> active;

    int n() const { return static_cast<int>(active.size()); }
};

// Per-job speeds aligned with the snapshot's active order.
struct SpeedAssignment {
    std::vector<std::int64_t> ids;
    std::vector<double> speeds;

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
    double speed_for(std::int64_t id) const;  // 0 if absent
};

// Sum of P(s_i) over entries with s_i > 0.
double assignment_power(const SpeedAssignment& a, const PowerModel& model);

struct SpeedCapsReport {
    bool pass = true;
    int k = 0;            // first violated prefix size, 0 when passing
    double margin = 0.0;  // cap - prefix sum at k (minimum margin when passing)
};

// Checks that the largest speed is at most P^{-1}(total power) and that every
// prefix of the k largest speeds fits in Q(k) * P^{-1}(total power). Both hold
// for any nonnegative speeds by the power-mean inequality, so a failure
// indicates a corrupted assignment.
SpeedCapsReport check_speed_caps(const SpeedAssignment& a, const PowerModel& model);

// Server-count view of an assignment: k_j = P(s_j). The k_j sum to at most
// p_budget exactly when the assignment is power-feasible.
std::vector<double> speeds_to_servers(const SpeedAssignment& a, const PowerModel& model);
std::vector<double> servers_to_speeds(const std::vector<double>& servers, const PowerModel& model);

}  // namespace speedsim
