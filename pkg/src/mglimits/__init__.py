"""Multigraph limit theory at desk scale.

Adjacency-matrix multigraphs, homomorphism densities with exact rational
arithmetic, alternating (Mobius-style) transforms over the entrywise order,
step multigraphons, exchangeable-array samplers, and the diagnostics that
connect them: connection-matrix positivity, factorization, consistent
random sequences, and convergence/tightness checks.
"""

__version__ = "0.1.0"

from .convergence import (
    DensityTrajectory,
    array_density_cross_check,
    cauchy_diagnostic,
    density_trajectory,
    tightness_diagnostic,
)
from .densities import (
    DensityTable,
    density,
    density_table,
    indicator,
    leq_density_table,
    window_profile,
)
from .errors import MglimitsError
from .fixtures import default_testgraphs, standard_multigraphons, two_block
from .graphon import (
    SampledMultigraphon,
    StepMultigraphon,
    graphon_density,
    mgw_dumps,
    mgw_loads,
    read_mgw,
    tightness_tail,
    write_mgw,
)
from .mobius import (
    FactorizationReport,
    ParameterTable,
    factorization_check,
    inverse_mobius,
    mobius_transform,
    mobius_transform_table,
    ptab_dumps,
    ptab_loads,
    read_ptab,
    write_ptab,
    zeta_inverse,
    zeta_matrix,
)
from .multigraph import (
    KLabeledGraph,
    Multigraph,
    Permutation,
    QuotientData,
    canonical_form,
    disjoint_union,
    enumerate_multigraphs,
    enumerate_overlays,
    glue,
    iter_multigraphs,
    iter_overlays,
    labeled_canonical_form,
    mg_dumps,
    mg_loads,
    quotient,
    read_mg,
    reconstruct,
    write_mg,
)
from .parameter import (
    ConnectionMatrix,
    ConsistentSequence,
    GraphParameter,
    LimitCheckReport,
    check_limit_candidate,
    connection_matrix,
    generate_basis,
    moment_form_estimate,
    psd_check,
    sample_consistent_sequence,
)
from .reports import TestReport
from .sampler import (
    ArraySample,
    FunctionalSampler,
    GraphSampler,
    GraphonSampler,
    InjectiveGraphSampler,
    dissociation_test,
    empirical_density,
    exchangeability_test,
    sample_from_functional,
    sample_from_graph,
    sample_from_graph_injective,
    sample_from_graphon,
)

__all__ = [name for name in dir() if not name.startswith("_")]
