"""Rumor spreading on dynamic evolving networks.

Simulator (asynchronous push-pull and variants, synchronous rounds), exact
cut metrics (conductance / diligence / absolute diligence), spread-time
budgets built from them, adversarial network families, and the experiment
harness tying it together.
"""

__version__ = "0.1.0"

from dynrumor._kernels import HAVE_COMPILED, IMPLEMENTATION  # noqa: F401
from dynrumor.graphs import (  # noqa: F401
    AdaptiveSchedule,
    DynamicSchedule,
    Graph,
    RecordingSchedule,
    ScheduleQueryError,
    SequenceSchedule,
    StaticSchedule,
    complete_graph,
    cycle_graph,
    empty_graph,
    graph_from_edge_list,
    path_graph,
    read_graph_file,
    relabel,
    star_graph,
    write_graph_file,
)
from dynrumor.metrics import (  # noqa: F401
    BruteForceCapError,
    CutView,
    MetricReport,
    absolute_diligence,
    conductance_exact,
    cut_diligence,
    cut_view,
    diligence_exact,
    metric_report,
)
from dynrumor.simulate import (  # noqa: F401
    PROTOCOLS,
    SimConfig,
    SpreadTrace,
    instantaneous_rate,
    run,
    run_forward_2push,
)
from dynrumor.nhpp import (  # noqa: F401
    PiecewiseConstantRate,
    poisson_lower_tail_bound,
    poisson_lower_tail_exact,
    sample_nhpp,
    sample_nhpp_counts,
)
from dynrumor.bounds import (  # noqa: F401
    BoundReport,
    BoundStep,
    bound_report,
    rate_lower_bound,
    schedule_snapshots,
    snapshot_metrics,
    static_bound_report,
    threshold_constant,
)
from dynrumor.generators import (  # noqa: F401
    FAMILIES,
    absolute_lb_schedule,
    bipartite_string,
    bottleneck_graph,
    diligence_lb_schedule,
    dynamic_star_schedule,
    expander_graph,
    load_schedule_dir,
    near_regular_graph,
    random_regular_connected,
    save_schedule_dir,
    two_clique_schedule,
)
from dynrumor.experiments import (  # noqa: F401
    EXPERIMENTS,
    ExperimentResult,
    experiment_config,
    load_result,
    run_experiment,
    wilson_interval,
)
