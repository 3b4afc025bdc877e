#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "speedsim/rng.hpp"
#include "speedsim/workload.hpp"

using namespace speedsim;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const char* name) : path(std::string("/tmp/speedsim_test_") + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("batch generator") {
    const auto w = gen_batch(1000, 20.0, 7);
    CHECK(w.jobs.size() == 1000);
    double total = 0.0;
    for (const auto& j : w.jobs) {
        CHECK(j.arrival == 0.0);
        CHECK(j.size > 0.0);
        total += j.size;
    }
    CHECK(total / 1000.0 == doctest::Approx(20.0).epsilon(0.1));  // 20 +- 2

    const auto single = gen_batch(1, 20.0, 7);
    CHECK(single.jobs.size() == 1);

    const auto again = gen_batch(1000, 20.0, 7);
    REQUIRE(again.jobs.size() == w.jobs.size());
    for (std::size_t i = 0; i < w.jobs.size(); ++i) {
        CHECK(again.jobs[i].id == w.jobs[i].id);
        CHECK(again.jobs[i].size == w.jobs[i].size);  // bit-identical
    }
}

TEST_CASE("slotted poisson generator") {
    const auto w = gen_slotted_poisson(1000, 20.0, 20.0, 11);
    CHECK(w.jobs.size() > 19500);
    CHECK(w.jobs.size() < 20500);
    for (const auto& j : w.jobs) {
        CHECK(j.arrival == std::floor(j.arrival));  // arrivals at slot start
        CHECK(j.arrival >= 0.0);
        CHECK(j.arrival <= 999.0);
    }

    const auto tiny = gen_slotted_poisson(1, 1e-9, 20.0, 11);
    CHECK(tiny.jobs.empty());

    const auto other = gen_slotted_poisson(1000, 20.0, 20.0, 12);
    CHECK(other.jobs.size() != w.jobs.size());
}

TEST_CASE("exponential sampler hits its mean") {
    Rng rng(1234);
    double total = 0.0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) total += rng.exponential(20.0);
    CHECK(total / draws == doctest::Approx(20.0).epsilon(0.005));
}

TEST_CASE("replication seeds are distinct streams") {
    const auto a = replication_seed(1, 0);
    const auto b = replication_seed(1, 1);
    const auto c = replication_seed(2, 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(replication_seed(1, 0) == a);
}

TEST_CASE("workload round trip is bit exact") {
    TempFile f("roundtrip.txt");
    const auto w = gen_slotted_poisson(20, 3.0, 2.5, 99);
    save_workload(w, f.path);
    const auto r = load_workload(f.path);
    REQUIRE(r.jobs.size() == w.jobs.size());
    for (std::size_t i = 0; i < w.jobs.size(); ++i) {
        CHECK(r.jobs[i].id == w.jobs[i].id);
        CHECK(r.jobs[i].arrival == w.jobs[i].arrival);
        CHECK(r.jobs[i].size == w.jobs[i].size);
    }
    CHECK(r.meta.kind == w.meta.kind);
    CHECK(r.meta.seed == w.meta.seed);
    CHECK(r.meta.mean_size == w.meta.mean_size);
}

TEST_CASE("loader rejects bad files") {
    TempFile f("bad.txt");
    {
        std::ofstream out(f.path);
        out << "1 0.0 2.0\n1 1.0 3.0\n";  // duplicate id
    }
    CHECK_THROWS_AS(load_workload(f.path), std::invalid_argument);
    {
        std::ofstream out(f.path);
        out << "1 0.0 -2.0\n";  // negative size
    }
    CHECK_THROWS_AS(load_workload(f.path), std::invalid_argument);
    {
        std::ofstream out(f.path);
        out << "1 0.0 abc\n";
    }
    CHECK_THROWS_AS(load_workload(f.path), std::invalid_argument);
    CHECK_THROWS_AS(load_workload("/nonexistent/path/w.txt"), std::runtime_error);
}

TEST_CASE("generator input validation") {
    CHECK_THROWS_AS(gen_batch(0, 20.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_batch(10, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_slotted_poisson(0, 20.0, 20.0, 1), std::invalid_argument);
}
