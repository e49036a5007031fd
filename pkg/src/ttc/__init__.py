"""ttc: a tensor-network contraction compiler.

Draws on structured project files describing tensor-network diagrams,
validates them, finds pairwise contraction orders with exact integer cost
accounting, derives single-tensor environments of closed networks, runs
contractions on concrete tensors, and emits standalone contraction
functions for Python, MATLAB and Julia with the
``(tensors, which_net, which_env)`` calling convention.
"""

__version__ = "0.1.0"

from .analysis import analyze_project, run_contraction, structured_report
from .codegen import build_ir, emit
from .environments import derive_environment_order, environment_network
from .executor import ncon_execute, pairwise_contract, partial_trace
from .model import (
    LabeledNetwork,
    Project,
    ValidationReport,
    compile_network,
    validate_project,
)
from .project_io import (
    dumps_project,
    load_project,
    loads_project,
    save_project,
)
from .search import (
    ContractionTree,
    CostReport,
    binary_cost,
    cost_report,
    heuristic_order,
    optimal_order_full,
)

__all__ = [
    "__version__",
    "analyze_project",
    "binary_cost",
    "build_ir",
    "compile_network",
    "ContractionTree",
    "cost_report",
    "CostReport",
    "derive_environment_order",
    "dumps_project",
    "emit",
    "environment_network",
    "heuristic_order",
    "LabeledNetwork",
    "load_project",
    "loads_project",
    "ncon_execute",
    "optimal_order_full",
    "pairwise_contract",
    "partial_trace",
    "Project",
    "run_contraction",
    "save_project",
    "structured_report",
    "validate_project",
    "ValidationReport",
]
