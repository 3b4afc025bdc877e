#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speedsim/model.hpp"

namespace speedsim {

struct WorkloadMeta {
    std::string kind = "explicit";  // batch | slotted-poisson | explicit
    std::uint64_t seed = 0;
    double mean_size = 0.0;
    double mean_arrivals = 0.0;  // slotted-poisson only
    int count = 0;               // batch only
    int slots = 0;               // slotted-poisson only
};

// Jobs sorted by (arrival, id); meta is enough to regenerate generated
// workloads exactly.
struct Workload {
    std::vector<Job> jobs;
    WorkloadMeta meta;
};

// `count` jobs at time 0 with i.i.d. exponential sizes.
Workload gen_batch(int count, double mean_size, std::uint64_t seed);

// Poisson(mean_arrivals_per_slot) jobs at each integer instant 0..slots-1,
// exponential sizes.
Workload gen_slotted_poisson(int slots, double mean_arrivals_per_slot, double mean_size,
                             std::uint64_t seed);

// Text format, one record per line: "id arrival size" after a "# meta ..."
// header. Decimal fields are printed shortest-round-trip so save/load is
// bit-exact.
Workload load_workload(const std::string& path);
void save_workload(const Workload& w, const std::string& path);

// Disjoint per-replication seed stream derived from a base seed.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication);

}  // namespace speedsim
