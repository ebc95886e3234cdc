"""Variational solver for constrained graph optimization.

A feasibility-certifying ansatz (ESOP-compiled validation oracle on an
ancilla qubit, plus a loss whose global minimum sits exactly on optimal
feasible solutions) benchmarked against the standard penalty encoding on
minimum-vertex-cover and maximum-independent-set instances, via exact
statevector simulation.
"""

from .graphs import (
    BruteForceResult,
    ConfigError,
    Graph,
    bitstring,
    brute_force_mis,
    brute_force_mvc,
    generate_erdos_renyi,
)
from .esop import (
    ABSENT,
    NEG,
    POS,
    BoolFn,
    Cube,
    EsopExpr,
    cofactor,
    constraint_esop,
    eval_esop,
    minimize_esop,
    mis_constraint_fn,
    mvc_constraint_fn,
    shannon_esop,
)
from .hamiltonians import (
    ZPolynomial,
    mis_constraint,
    mis_objective,
    mvc_constraint,
    mvc_objective,
    penalty_hamiltonian,
    spectral_bounds,
)
from .simulator import (
    GateOp,
    StateVector,
    ancilla_branch_probs,
    apply,
    build_oracle_circuit,
    expect_zpoly,
    format_circuit,
    resource_estimate,
)
from .ansatz import (
    FEASIBILITY,
    PENALTY,
    AnsatzSpec,
    CompiledAnsatz,
    build_circuit,
    build_state,
    make_ansatz,
    param_count,
    random_params,
)
from .vqa import (
    LossSpec,
    RunRecord,
    accuracy,
    loss_feasibility,
    loss_feasibility_pauli,
    loss_penalty,
    make_loss,
    multistart,
    nelder_mead,
    optimize,
)
from .experiment import (
    ExperimentConfig,
    StatsTable,
    emit_results,
    run_experiment,
    run_method_comparison,
    run_penalty_sweep,
)

__version__ = "0.1.0"
