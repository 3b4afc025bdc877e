#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "speedsim/analysis.hpp"
#include "speedsim/engine.hpp"
#include "speedsim/experiment.hpp"
#include "speedsim/metrics.hpp"
#include "speedsim/policies.hpp"
#include "speedsim/workload.hpp"

namespace py = pybind11;
using namespace speedsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-server speed-scaling scheduling: simulator, policies, bound formulas";

    py::enum_<ProblemVariant>(m, "ProblemVariant")
        .value("FLOW_TIME", ProblemVariant::FlowTime)
        .value("FLOW_TIME_ENERGY", ProblemVariant::FlowTimeEnergy);

    py::class_<PowerModel>(m, "PowerModel")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("p_budget"))
        .def_property_readonly("alpha", &PowerModel::alpha)
        .def_property_readonly("p_budget", &PowerModel::p_budget)
        .def("power", &PowerModel::power)
        .def("power_inv", &PowerModel::power_inv)
        .def("q", &PowerModel::q);

    py::class_<Job>(m, "Job")
        .def(py::init([](std::int64_t id, double arrival, double size) {
                 return Job{id, arrival, size};
             }),
             py::arg("id"), py::arg("arrival"), py::arg("size"))
        .def_readonly("id", &Job::id)
        .def_readonly("arrival", &Job::arrival)
        .def_readonly("size", &Job::size);

    py::class_<Workload>(m, "Workload")
        .def(py::init([](const std::vector<Job>& jobs) {
                 Workload w;
                 w.jobs = jobs;
                 std::sort(w.jobs.begin(), w.jobs.end(), [](const Job& a, const Job& b) {
                     return a.arrival != b.arrival ? a.arrival < b.arrival : a.id < b.id;
                 });
                 return w;
             }),
             py::arg("jobs"))
        .def_readonly("jobs", &Workload::jobs)
        .def("__len__", [](const Workload& w) { return w.jobs.size(); });

    m.def("gen_batch", &gen_batch, py::arg("count"), py::arg("mean_size"), py::arg("seed"));
    m.def("gen_slotted_poisson", &gen_slotted_poisson, py::arg("slots"),
          py::arg("mean_arrivals_per_slot"), py::arg("mean_size"), py::arg("seed"));
    m.def("load_workload", &load_workload, py::arg("path"));
    m.def("save_workload", &save_workload, py::arg("workload"), py::arg("path"));

    py::class_<PolicySpec>(m, "PolicySpec")
        .def_static("parse", &PolicySpec::parse, py::arg("text"))
        .def_property_readonly("beta", [](const PolicySpec& s) { return s.beta; })
        .def("__str__", &PolicySpec::name);

    m.def("hesrpt_allocation", &hesrpt_allocation, py::arg("n"), py::arg("server_budget"),
          py::arg("alpha"));

    py::class_<CompletionRecord>(m, "CompletionRecord")
        .def_readonly("arrival", &CompletionRecord::arrival)
        .def_readonly("departure", &CompletionRecord::departure)
        .def_readonly("size", &CompletionRecord::size);

    py::class_<Trace>(m, "Trace")
        .def_readonly("makespan", &Trace::makespan)
        .def_readonly("job_count", &Trace::job_count)
        .def_readonly("completions", &Trace::completions)
        .def_property_readonly("interval_count",
                               [](const Trace& t) { return t.intervals.size(); });

    m.def(
        "simulate",
        [](const Workload& w, const PolicySpec& spec, const PowerModel& model,
           ProblemVariant variant) { return simulate(w, spec, model, variant); },
        py::arg("workload"), py::arg("policy"), py::arg("model"), py::arg("variant"));
    m.def(
        "simulate_coupled",
        [](const Workload& w, const PolicySpec& a, const PolicySpec& b, const PowerModel& model,
           ProblemVariant variant) { return simulate_coupled(w, a, b, model, variant); },
        py::arg("workload"), py::arg("policy_a"), py::arg("policy_b"), py::arg("model"),
        py::arg("variant"));
    m.def("save_trace", &save_trace, py::arg("trace"), py::arg("path"));

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("flow_time", &MetricsReport::flow_time)
        .def_readonly("energy", &MetricsReport::energy)
        .def_readonly("objective", &MetricsReport::objective)
        .def_readonly("mean_flow_time", &MetricsReport::mean_flow_time)
        .def_readonly("makespan", &MetricsReport::makespan)
        .def_readonly("job_count", &MetricsReport::job_count);

    m.def("flow_time", &flow_time, py::arg("trace"));
    m.def("energy", &energy, py::arg("trace"));
    m.def("objective", &objective, py::arg("trace"), py::arg("variant"));
    m.def("compute_metrics", &compute_metrics, py::arg("trace"), py::arg("variant"));

    py::enum_<PotentialKind>(m, "PotentialKind")
        .value("BATCH_SURPLUS", PotentialKind::BatchSurplus)
        .value("ONLINE_RANK", PotentialKind::OnlineRank);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("alpha", &BoundReport::alpha)
        .def_readonly("beta", &BoundReport::beta)
        .def_readonly("gamma", &BoundReport::gamma)
        .def_readonly("c", &BoundReport::c)
        .def_readonly("c1", &BoundReport::c1)
        .def_readonly("kappa", &BoundReport::kappa)
        .def("to_json", &BoundReport::to_json);

    py::class_<Violation>(m, "Violation")
        .def_readonly("kind", &Violation::kind)
        .def_readonly("time", &Violation::time)
        .def_readonly("lhs", &Violation::lhs)
        .def_readonly("rhs", &Violation::rhs)
        .def_readonly("margin", &Violation::margin);

    m.def("mu_batch", &mu_batch, py::arg("alpha"), py::arg("variant"));
    m.def("batch_potential_c1", &batch_potential_c1, py::arg("alpha"), py::arg("variant"));
    m.def("batch_constants", &batch_constants, py::arg("alpha"), py::arg("variant"));
    m.def("online_feasible", &online_feasible, py::arg("alpha"), py::arg("beta"),
          py::arg("gamma"));
    m.def("online_constants", &online_constants, py::arg("alpha"), py::arg("beta"),
          py::arg("gamma"), py::arg("variant"));
    m.def("empirical_cr", &empirical_cr, py::arg("alg"), py::arg("ref"), py::arg("variant"));
    m.def(
        "check_boundary_jumps",
        [](const Trace& alg, const Trace& ref, PotentialKind kind, double constant,
           const PowerModel& model, ProblemVariant variant) {
            return check_boundary_jumps(alg, ref, kind, constant, model, variant);
        },
        py::arg("alg"), py::arg("ref"), py::arg("kind"), py::arg("constant"), py::arg("model"),
        py::arg("variant"));
    m.def(
        "check_running_condition",
        [](const Trace& alg, const Trace& ref, PotentialKind kind, double constant, double kappa,
           const PowerModel& model, ProblemVariant variant) {
            return check_running_condition(alg, ref, kind, constant, kappa, model, variant);
        },
        py::arg("alg"), py::arg("ref"), py::arg("kind"), py::arg("constant"), py::arg("kappa"),
        py::arg("model"), py::arg("variant"));
}
