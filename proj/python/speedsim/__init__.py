"""Multi-server speed-scaling scheduling: simulator, policies, bound formulas."""

from speedsim._core import (  # noqa: F401
    BoundReport,
    CompletionRecord,
    Job,
    MetricsReport,
    PolicySpec,
    PotentialKind,
    PowerModel,
    ProblemVariant,
    Trace,
    Violation,
    Workload,
    batch_constants,
    batch_potential_c1,
    check_boundary_jumps,
    check_running_condition,
    compute_metrics,
    empirical_cr,
    energy,
    flow_time,
    gen_batch,
    gen_slotted_poisson,
    hesrpt_allocation,
    load_workload,
    mu_batch,
    objective,
    online_constants,
    online_feasible,
    save_trace,
    save_workload,
    simulate,
    simulate_coupled,
)

__version__ = "0.1.0"
