"""bellmono: quantum values of multiqubit correlation Bell inequalities and
the monogamy bounds certified by anticommuting-operator partitions."""

from .backend import USING_NUMBA
from .bell import (
    BellValueReport,
    CorrelationTable,
    OptBudget,
    PartySettings,
    correlation_table,
    general_bell_value,
    joint_maximize,
    lhv_bound_bruteforce,
    maximize_bell,
    mermin_value,
    plane_upper_bound,
)
from .monogamy import (
    AnticommutingPartition,
    MonogamyReport,
    OverlapScenario,
    check_state,
    four_party_partition,
    greedy_clique_cover,
    named_scenario,
    required_terms,
    star_partition,
    tree_partition,
    tree_paths,
    triangle_partition,
)
from .pauli import (
    AnticommutingSet,
    PauliString,
    anticommutes,
    is_mutually_anticommuting,
    parse_label,
)
from .qstate import (
    CorrelationTensor,
    DensityMatrix,
    StateVector,
    complementarity_norm,
    correlation_components,
    expectation,
    load_state,
    partial_trace,
    random_pure_state,
    save_state,
    tsallis_2,
)
from .scenarios import (
    WitnessPrediction,
    ghz,
    mermin_example,
    parse_state_spec,
    star_prediction,
    star_state,
    star_witness,
    tree_prediction,
    tree_state,
    tree_witness,
)

__version__ = "0.1.0"
