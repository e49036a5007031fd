"""Shared analysis pipeline behind the CLI and the HTTP service.

One code path validates, compiles, searches and reports on every assigned
network, so the command line and the service cannot drift apart.  The
structured report schema is versioned and pinned by tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import codegen
from .environments import (
    derive_environment_order,
    environment_network,
    network_operands,
)
from .executor import ncon_execute
from .model import (
    LabeledNetwork,
    Project,
    ValidationReport,
    Violation,
    compile_network,
    validate_project,
)
from .search import (
    ContractionTree,
    CostReport,
    cost_report,
    heuristic_order,
    optimal_order_full,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class NetworkAnalysis:
    number: int
    violations: tuple[Violation, ...]
    net: Optional[LabeledNetwork]
    tree: Optional[ContractionTree]
    report: Optional[CostReport]

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def environments_available(self) -> bool:
        return self.net is not None and self.net.closed and self.net.n >= 2


@dataclass(frozen=True)
class ProjectAnalysis:
    mode: str
    seed: int
    project_errors: tuple[Violation, ...]
    networks: tuple[NetworkAnalysis, ...]

    @property
    def all_valid(self) -> bool:
        return not self.project_errors and all(n.valid for n in self.networks)

    def network(self, number: int) -> NetworkAnalysis:
        for n in self.networks:
            if n.number == number:
                return n
        raise KeyError(f"network {number} is not defined in this project")


def analyze_project(project: Project, mode: str = "full", seed: int = 0,
                    dims: Optional[Mapping[str, int]] = None) -> ProjectAnalysis:
    """Validate every assigned network and search the valid ones.

    ``mode="full"`` gives the exact optimum (and may refuse oversized
    networks with FullSearchCapExceeded); the restricted modes always
    return an order but never claim optimality.  ``dims`` overrides
    index-type default dimensions by name for what-if analysis, without
    touching per-edge dimension overrides.
    """
    vreport: ValidationReport = validate_project(project, dims)
    out = []
    for no in sorted(vreport.networks):
        violations = vreport.networks[no]
        if violations:
            out.append(NetworkAnalysis(no, violations, None, None, None))
            continue
        net = compile_network(project, no, dims)
        if mode == "full":
            tree = optimal_order_full(net)
            guaranteed = True
        else:
            tree = heuristic_order(net, mode=mode, seed=seed)
            guaranteed = False
        out.append(NetworkAnalysis(
            no, (), net, tree, cost_report(net, tree, guaranteed)))
    return ProjectAnalysis(mode=mode, seed=seed,
                           project_errors=vreport.project_errors,
                           networks=tuple(out))


def _violation_doc(v: Violation) -> dict:
    return {"code": v.code, "location": v.location, "message": v.message}


def structured_report(analysis: ProjectAnalysis) -> dict:
    """The machine-readable analysis document (CLI --format structured and
    the service's analyze response are both exactly this)."""
    nets = []
    for n in analysis.networks:
        doc: dict = {
            "network": n.number,
            "valid": n.valid,
            "errors": [_violation_doc(v) for v in n.violations],
            "tensor_count": n.net.n if n.net else None,
            "tensor_names": list(n.net.names) if n.net else None,
            "open_count": n.net.open_count if n.net else None,
            "closed": n.net.closed if n.net else None,
            "guaranteed_optimal": None,
            "total_mults": None,
            "time_estimate_s": None,
            "order": None,
            "top_costs": None,
            "environments_available": n.environments_available,
            "environment_count": n.net.n if n.environments_available else 0,
        }
        if n.report is not None:
            doc.update({
                "guaranteed_optimal": n.report.guaranteed_optimal,
                "total_mults": str(n.report.total_mults),
                "time_estimate_s": n.report.time_estimate_s,
                "order": list(n.report.order),
                "top_costs": [p.render() for p in n.report.top_costs],
            })
        nets.append(doc)
    return {
        "schema_version": SCHEMA_VERSION,
        "mode": analysis.mode,
        "project_errors": [_violation_doc(v) for v in analysis.project_errors],
        "networks": nets,
    }


def text_report(analysis: ProjectAnalysis) -> str:
    """Human-readable per-network report."""
    lines = []
    for v in analysis.project_errors:
        lines.append(f"project error: [{v.code}] {v.location}: {v.message}")
    for n in analysis.networks:
        if not n.valid:
            lines.append(f"Network {n.number}: INVALID")
            for v in n.violations:
                lines.append(f"  [{v.code}] {v.location}: {v.message}")
            continue
        r = n.report
        lines.append(f"Network {n.number}: VALID "
                     f"({n.net.n} tensors, "
                     + ("closed" if n.net.closed else f"{n.net.open_count} open indices")
                     + ")")
        lines.append("  guaranteed optimal:   "
                     + ("yes" if r.guaranteed_optimal else "no"))
        lines.append(f"  total multiplications: {r.total_mults}")
        lines.append(f"  time estimate (3 GHz): {r.time_estimate_s:.3e} s")
        order = " ".join(str(l) for l in r.order) if r.order else "(none)"
        lines.append(f"  contraction order:    {order}")
        if r.top_costs:
            lines.append(f"  most expensive step:  {r.top_costs[0].render()}")
        if len(r.top_costs) > 1:
            lines.append(f"  second most expensive: {r.top_costs[1].render()}")
        if n.environments_available:
            lines.append(f"  environments:         which_env 1..{n.net.n}")
    return "\n".join(lines) + "\n"


def environment_plan(analysis: ProjectAnalysis, env_search: str = "derived"):
    """Environment networks and trees for every closed network.

    ``derived`` re-roots the closed network's tree (the default); ``full``
    re-runs the exact search on each environment network instead.
    """
    if env_search not in ("derived", "full"):
        raise ValueError(f"unknown env search {env_search!r}")
    env_nets: dict[int, dict[int, LabeledNetwork]] = {}
    env_trees: dict[int, dict[int, ContractionTree]] = {}
    for n in analysis.networks:
        if not n.environments_available:
            continue
        env_nets[n.number] = {}
        env_trees[n.number] = {}
        for m in range(1, n.net.n + 1):
            env = environment_network(n.net, m)
            env_nets[n.number][m] = env
            if env_search == "derived":
                env_trees[n.number][m] = derive_environment_order(n.net, n.tree, m)
            else:
                env_trees[n.number][m] = optimal_order_full(env)
    return env_nets, env_trees


def build_program(project: Project, analysis: ProjectAnalysis,
                  function_name: str, env_search: str = "derived"):
    """IR for code emission; requires every assigned network to be valid."""
    if not analysis.all_valid:
        raise InvalidProjectForExport(analysis)
    env_nets, env_trees = environment_plan(analysis, env_search)
    return codegen.build_ir(
        project,
        function_name,
        nets={n.number: n.net for n in analysis.networks},
        trees={n.number: n.tree for n in analysis.networks},
        reports={n.number: n.report for n in analysis.networks},
        env_nets=env_nets,
        env_trees=env_trees,
    )


class InvalidProjectForExport(ValueError):
    def __init__(self, analysis: ProjectAnalysis):
        self.analysis = analysis
        bad = [str(n.number) for n in analysis.networks if not n.valid]
        detail = ("networks " + ", ".join(bad)) if bad else "project"
        super().__init__(f"cannot export: {detail} failed validation")


def planned_cost(analysis: ProjectAnalysis, net_no: int, env: int = 0) -> int:
    """Multiplication count of the order that run_contraction would use,
    computed without touching any tensor data."""
    n = analysis.network(net_no)
    if not n.valid:
        from .model import InvalidNetworkError

        raise InvalidNetworkError(net_no, n.violations)
    if env == 0:
        return n.tree.total_cost
    return derive_environment_order(n.net, n.tree, env).total_cost


def run_contraction(project: Project, net_no: int,
                    arrays_by_name: Mapping[str, np.ndarray],
                    env: int = 0, mode: str = "full", seed: int = 0,
                    dims: Optional[Mapping[str, int]] = None,
                    analysis: Optional[ProjectAnalysis] = None,
                    ) -> tuple[np.ndarray, int]:
    """Contract one network (or one environment) on concrete tensors.

    Arrays are keyed by variable name; copies share one array.  For an
    environment run the removed tensor's array is not required.  Returns
    the result and the exact multiplication count of the order used.
    """
    if analysis is None:
        analysis = analyze_project(project, mode=mode, seed=seed, dims=dims)
    n = analysis.network(net_no)
    if not n.valid:
        from .model import InvalidNetworkError

        raise InvalidNetworkError(net_no, n.violations)
    net, tree = n.net, n.tree

    def operand(pos: int) -> np.ndarray:
        name = net.names[pos]
        if name not in arrays_by_name:
            raise KeyError(f"no array supplied for tensor {name!r}")
        arr = np.asarray(arrays_by_name[name])
        expect = tuple(net.dims[lab] for lab in net.labels[pos])
        if arr.shape != expect:
            raise ValueError(
                f"tensor {name!r} should have shape {expect}, got {arr.shape}")
        return arr

    if env == 0:
        ops = [operand(i) for i in range(net.n)]
        result = ncon_execute(ops, net.all_label_lists(), tree.ncon_order())
        return result, tree.total_cost

    env_net = environment_network(net, env)
    env_tree = derive_environment_order(net, tree, env)
    ops = [operand(i) for i in range(net.n) if i != env - 1]
    result = ncon_execute(network_operands(env_net, ops),
                          env_net.all_label_lists(), env_tree.ncon_order())
    return result, env_tree.total_cost
