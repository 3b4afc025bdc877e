#include "speedsim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <unordered_set>

#include "speedsim/rng.hpp"

namespace speedsim {

namespace {

void sort_and_validate(Workload& w) {
    std::sort(w.jobs.begin(), w.jobs.end(), [](const Job& a, const Job& b) {
        if (a.arrival != b.arrival) return a.arrival < b.arrival;
        return a.id < b.id;
    });
    std::unordered_set<std::int64_t> seen;
    seen.reserve(w.jobs.size());
    for (const Job& j : w.jobs) {
        if (!(j.size > 0.0)) throw std::invalid_argument("workload: job size must be positive");
        if (!std::isfinite(j.arrival) || j.arrival < 0.0)
            throw std::invalid_argument("workload: bad arrival time");
        if (!seen.insert(j.id).second)
            throw std::invalid_argument("workload: duplicate job id " + std::to_string(j.id));
    }
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& tok, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw std::invalid_argument("workload parse error at line " + std::to_string(line_no) +
                                    ": bad number '" + tok + "'");
    }
    return v;
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t replication) {
    std::uint64_t state = base_seed;
    splitmix64(state);  // whiten the base
    state += replication * 0xA0761D6478BD642Full;
    return splitmix64(state);
}

Workload gen_batch(int count, double mean_size, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("gen_batch: count must be >= 1");
    if (!(mean_size > 0.0)) throw std::invalid_argument("gen_batch: mean_size must be positive");
    Workload w;
    w.meta.kind = "batch";
    w.meta.seed = seed;
    w.meta.mean_size = mean_size;
    w.meta.count = count;
    Rng rng(seed);
    w.jobs.reserve(count);
    for (int i = 0; i < count; ++i) {
        w.jobs.push_back(Job{i, 0.0, rng.exponential(mean_size)});
    }
    sort_and_validate(w);
    return w;
}

Workload gen_slotted_poisson(int slots, double mean_arrivals_per_slot, double mean_size,
                             std::uint64_t seed) {
    if (slots < 1) throw std::invalid_argument("gen_slotted_poisson: slots must be >= 1");
    if (!(mean_arrivals_per_slot > 0.0) || !(mean_size > 0.0))
        throw std::invalid_argument("gen_slotted_poisson: means must be positive");
    Workload w;
    w.meta.kind = "slotted-poisson";
    w.meta.seed = seed;
    w.meta.mean_size = mean_size;
    w.meta.mean_arrivals = mean_arrivals_per_slot;
    w.meta.slots = slots;
    Rng rng(seed);
    std::int64_t next_id = 0;
    for (int t = 0; t < slots; ++t) {
        const int k = rng.poisson(mean_arrivals_per_slot);
        for (int i = 0; i < k; ++i) {
            w.jobs.push_back(Job{next_id++, static_cast<double>(t), rng.exponential(mean_size)});
        }
    }
    sort_and_validate(w);
    return w;
}

void save_workload(const Workload& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_workload: cannot open " + path);
    out << "# speedsim-workload v1 kind=" << w.meta.kind << " seed=" << w.meta.seed
        << " mean_size=" << format_double(w.meta.mean_size)
        << " mean_arrivals=" << format_double(w.meta.mean_arrivals) << " count=" << w.meta.count
        << " slots=" << w.meta.slots << "\n";
    for (const Job& j : w.jobs) {
        out << j.id << ' ' << format_double(j.arrival) << ' ' << format_double(j.size) << '\n';
    }
    if (!out) throw std::runtime_error("save_workload: write failed for " + path);
}

Workload load_workload(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_workload: cannot open " + path);
    Workload w;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "kind") w.meta.kind = val;
                else if (key == "seed") w.meta.seed = std::stoull(val);
                else if (key == "mean_size") w.meta.mean_size = parse_double(val, line_no);
                else if (key == "mean_arrivals") w.meta.mean_arrivals = parse_double(val, line_no);
                else if (key == "count") w.meta.count = std::stoi(val);
                else if (key == "slots") w.meta.slots = std::stoi(val);
            }
            continue;
        }
        std::istringstream ls(line);
        std::string id_tok, arr_tok, size_tok;
        if (!(ls >> id_tok >> arr_tok >> size_tok)) {
            throw std::invalid_argument("workload parse error at line " + std::to_string(line_no) +
                                        ": expected 'id arrival size'");
        }
        Job j;
        try {
            std::size_t used = 0;
            j.id = static_cast<std::int64_t>(std::stoll(id_tok, &used));
            if (used != id_tok.size()) throw std::invalid_argument(id_tok);
        } catch (const std::exception&) {
            throw std::invalid_argument("workload parse error at line " + std::to_string(line_no) +
                                        ": bad id '" + id_tok + "'");
        }
        j.arrival = parse_double(arr_tok, line_no);
        j.size = parse_double(size_tok, line_no);
        w.jobs.push_back(j);
    }
    sort_and_validate(w);
    return w;
}

}  // namespace speedsim
