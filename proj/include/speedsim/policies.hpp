#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "speedsim/model.hpp"

namespace speedsim {

enum class PolicyKind { Equi, HeSrpt, FractionalLcfsEqui };

// Parsed from config strings: "equi", "hesrpt", "lcfs:beta=0.25" (fractions
// like "lcfs:beta=1/6" are accepted too).
struct PolicySpec {
    PolicyKind kind = PolicyKind::Equi;
    double beta = 1.0;  // served fraction, FractionalLcfsEqui only

    static PolicySpec parse(std::string_view text);
    std::string name() const;
};

// rank of job j = 1 + #{active k : (arrival_k, id_k) < (arrival_j, id_j)};
// ranks form a permutation of 1..n and the most recent arrival has rank n.
struct RankView {
    std::vector<std::int64_t> ids;  // snapshot order
    std::vector<int> ranks;
};

RankView compute_ranks(const SystemSnapshot& snap);

// All jobs at identical speed P^{-1}(cap / n).
SpeedAssignment equi_decide(const SystemSnapshot& snap, const PowerModel& model,
                            ProblemVariant variant);

// Closed-form server split for the n jobs indexed in decreasing remaining
// size (index 1 = largest):
//   k_i = N * ((i/n)^{1/(1-1/alpha)} - ((i-1)/n)^{1/(1-1/alpha)})
// The k_i sum to N exactly (telescoping) and increase in i, so shorter jobs
// get more servers.
std::vector<double> hesrpt_allocation(int n, double server_budget, double alpha);

// hesrpt_allocation applied with N = p; each job runs at k_i^{1/alpha}.
// Ties on remaining size break toward later arrival, then higher id.
SpeedAssignment hesrpt_decide(const SystemSnapshot& snap, const PowerModel& model,
                              ProblemVariant variant);

// Serves the m = ceil(beta * n) most recently arrived jobs, all at speed
// P^{-1}(cap / m); everyone else idles. beta = 1 reduces to EQUI.
SpeedAssignment lcfs_equi_decide(const SystemSnapshot& snap, const PowerModel& model,
                                 ProblemVariant variant, double beta);

SpeedAssignment decide(const PolicySpec& spec, const SystemSnapshot& snap,
                       const PowerModel& model, ProblemVariant variant);

}  // namespace speedsim
