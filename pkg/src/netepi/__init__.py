"""Epidemic simulation and likelihood-free inference on fixed networks."""

from .contagion import (
    ComplexParams,
    EpidemicTrace,
    SigmoidConfig,
    SimpleParams,
    infection_at_last_exposure_prob,
    p_infect,
    seed_complex,
    simulate_complex,
    simulate_simple,
)
from .discrepancy import Discrepancy, discrepancy_complex, discrepancy_simple, euclid, graph_distance
from .estimation import DistanceMarginal, bayes_estimate, distance_marginal, expected_loss, loss
from .graph import (
    Network,
    PathTable,
    all_pairs_shortest_paths,
    generate_ba,
    generate_er,
    load_edge_list,
    write_edge_list,
)
from .inference import (
    AbcProblem,
    ParticleState,
    Phi,
    PosteriorSample,
    PriorSpec,
    SabcConfig,
    estimate_kernel_scale,
    kernel_continuous,
    kernel_node,
    prior_sample,
    sabc_run,
)
from .summaries import ObservationWindow, SummaryBundle, summarize, summarize_complex, summarize_simple

__version__ = "0.1.0"
