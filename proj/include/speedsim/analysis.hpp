#pragma once

#include <string>
#include <vector>

#include "speedsim/engine.hpp"
#include "speedsim/model.hpp"

namespace speedsim {

enum class Setting { Batch, Online };

struct BoundReport {
    double alpha = 0.0;
    ProblemVariant variant = ProblemVariant::FlowTimeEnergy;
    Setting setting = Setting::Batch;
    double beta = 0.0;   // online only
    double gamma = 0.0;  // online only
    double c = 0.0;      // online potential constant
    double c1 = 0.0;     // batch potential constant
    double kappa = 0.0;
    std::string to_json() const;
};

// Guaranteed competitive ratio of EQUI when all jobs are present at time 0:
// (2 - 1/alpha) * 2/(1 - 1/alpha) with the energy term, half that without.
double mu_batch(double alpha, ProblemVariant variant);

// Potential prefactor paired with mu_batch: 2/(1 - 1/alpha) with the energy
// term, 1/(1 - 1/alpha) without.
double batch_potential_c1(double alpha, ProblemVariant variant);

BoundReport batch_constants(double alpha, ProblemVariant variant);

// (1 - beta)(beta - gamma)/P^{-1}(beta) > gamma^{1 - 1/alpha}. Requires
// 0 < gamma <= beta < 1; equality gives false, reversal throws.
bool online_feasible(double alpha, double beta, double gamma);

// c = 2 / [(1-beta)(beta-gamma)/P^{-1}(beta) - gamma^{1-1/alpha}] and
// kappa = (2 + c)/gamma, halved for the pure flow-time objective.
BoundReport online_constants(double alpha, double beta, double gamma, ProblemVariant variant);

// Surplus potential for the batch setting:
//   c1 * P^{-1}(n / cap) * sum_i (q_i^alg - q_i^ref)^+
// where cap = min{n, p} (p under FlowTime) and jobs the reference already
// finished count as q^ref = 0.
double phi_sf(const SystemSnapshot& alg, const SystemSnapshot& ref, double c1,
              const PowerModel& model, ProblemVariant variant);

// Rank-weighted potential for the online setting:
//   c * sum_j r_j (w_j^alg - w_j^ref)^+ / (P^{-1}(min{r_j, p}) Q(r_j))
// with min{r_j, p} -> p under FlowTime.
double phi_online(const SystemSnapshot& alg, const SystemSnapshot& ref, double c,
                  const PowerModel& model, ProblemVariant variant);

// Analytic d(phi)/dt inside an interval where speeds, ranks and n are
// constant; only jobs with a currently positive surplus contribute.
double phi_drift_sf(const SystemSnapshot& alg, const SpeedAssignment& alg_speeds,
                    const SystemSnapshot& ref, const SpeedAssignment& ref_speeds, double c1,
                    const PowerModel& model, ProblemVariant variant);
double phi_drift_online(const SystemSnapshot& alg, const SpeedAssignment& alg_speeds,
                        const SystemSnapshot& ref, const SpeedAssignment& ref_speeds, double c,
                        const PowerModel& model, ProblemVariant variant);

enum class PotentialKind { BatchSurplus, OnlineRank };

struct PotentialSample {
    double time = 0.0;
    double phi = 0.0;
    double dphi_dt = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct Violation {
    std::string kind;  // arrival-jump | departure-jump | running-condition
    double time = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // lhs - rhs, positive when violated
};

struct MonitorOptions {
    double jump_tol = 1e-9;
    double run_tol = 1e-6;
    // Cross-check the analytic drift against a central finite difference of
    // the potential (step 1e-6 x interval length) at every midpoint.
    bool fd_check = false;
};

// Evaluates the potential just before and after every arrival/departure on
// either trace: departures must not increase it, and for the rank potential
// arrivals must not change it at all.
std::vector<Violation> check_boundary_jumps(const Trace& alg, const Trace& ref,
                                            PotentialKind kind, double constant,
                                            const PowerModel& model, ProblemVariant variant,
                                            const MonitorOptions& opts = {});

// Asserts n + P_sum + dphi/dt <= kappa (n_ref + P_sum^ref) at the midpoint of
// every merged interval (the P_sum terms drop under FlowTime). The reference
// may be any power-feasible schedule.
std::vector<Violation> check_running_condition(const Trace& alg, const Trace& ref,
                                               PotentialKind kind, double constant, double kappa,
                                               const PowerModel& model, ProblemVariant variant,
                                               const MonitorOptions& opts = {},
                                               std::vector<PotentialSample>* samples = nullptr);

// objective(alg) / objective(ref); an upper-bound estimate of the true ratio
// when the reference is suboptimal.
double empirical_cr(const Trace& alg, const Trace& ref, ProblemVariant variant);

std::string violations_to_json(const std::vector<Violation>& violations);

}  // namespace speedsim
