"""Toroidal mesh topologies: exact connectivity, neighbor-fault analysis,
and Monte Carlo fault simulation."""

from .errors import (
    AxisOutOfRangeError,
    BudgetExceededError,
    DimensionTooSmallError,
    EmptyTargetSetError,
    InvalidVertexError,
    LayersNotAdjacentError,
    MeshParseError,
    NotAdjacentLayerError,
    PreconditionViolatedError,
    SameVertexError,
    TheoremOutOfScopeWarning,
    UnsupportedMeshError,
    VertexDeadError,
)
from .graphs import (
    AliveGraph,
    GraphState,
    PathBundle,
    classify,
    connected_components,
    disjoint_paths,
    fan,
    validate_path_bundle,
    vertex_connectivity,
)
from .mesh import Mesh, PartitionView, new_mesh, parse_mesh
from .neighbor import (
    FaultSet,
    HealthyPairReport,
    KappaNBResult,
    PartitionFaultProfile,
    SurvivalBoundReport,
    SurvivalGraph,
    closed_neighborhood,
    common_neighbor_count,
    fault_profile,
    healthy_layer_check,
    healthy_pair_count,
    kappa_nb_exact,
    survival_graph,
    upper_bound_witness,
    verify_survival_lower_bound,
)
from .simulate import (
    PoolPolicy,
    SimulationReport,
    TrialRecord,
    derive_trial_seed,
    fraction_at,
    run_simulation,
    run_trial,
    run_trials_arrays,
)

__version__ = "0.1.0"
