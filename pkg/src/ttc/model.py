"""Diagram data model, validation, and compilation to labeled form.

A project holds up to four index types, a set of tensor instances with
numbered anchors, and edges joining anchors (or leaving one end open with a
numbered plaque).  ``validate_project`` reports every semantic problem
without raising; ``compile_network`` turns one valid network into the
integer-label convention used everywhere downstream: positive labels are
summed (each appears on exactly two anchors), negative labels are the open
indices of the result, ordered ``-1, -2, ...`` by plaque number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .reserved import RESERVED_WORDS

MAX_INDEX_TYPES = 4
MAX_NETWORKS = 4
MAX_PLAQUE = 9

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

# Validation error codes (stable contract, mirrored by the CLI and service).
E_UNWIRED_ANCHOR = "E_UNWIRED_ANCHOR"
E_MULTIWIRED_ANCHOR = "E_MULTIWIRED_ANCHOR"
E_CROSS_NETWORK = "E_CROSS_NETWORK"
E_DUP_PLAQUE = "E_DUP_PLAQUE"
E_GAP_PLAQUE = "E_GAP_PLAQUE"
E_COPY_MISMATCH = "E_COPY_MISMATCH"
E_BAD_NAME = "E_BAD_NAME"
E_NO_NETWORKS = "E_NO_NETWORKS"
E_ENV_OPEN_NETWORK = "E_ENV_OPEN_NETWORK"


class InvalidNetworkError(ValueError):
    """Raised when an operation requires a network that failed validation."""

    def __init__(self, network_no: int, violations):
        self.network_no = network_no
        self.violations = tuple(violations)
        detail = "; ".join(v.code for v in self.violations) or "unknown"
        super().__init__(f"network {network_no} is invalid: {detail}")


@dataclass(frozen=True)
class IndexType:
    id: int
    name: str
    default_dim: int
    color: tuple[int, int, int] = (0, 0, 0)
    thickness: float = 1.0
    extra: Mapping = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class TensorInstance:
    id: int
    anchor_count: int
    name: Optional[str] = None
    network: Optional[int] = None
    geometry: Mapping = field(default_factory=dict, compare=False)
    extra: Mapping = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class AnchorRef:
    tensor: int
    anchor: int  # 1-based ordinal


@dataclass(frozen=True)
class OpenEnd:
    plaque: int  # 1..9
    geometry: Mapping = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Edge:
    id: int
    index_type: int
    end_a: AnchorRef
    end_b: Union[AnchorRef, OpenEnd]
    dim_override: Optional[int] = None
    geometry: Mapping = field(default_factory=dict, compare=False)
    extra: Mapping = field(default_factory=dict, compare=False)

    @property
    def is_open(self) -> bool:
        return isinstance(self.end_b, OpenEnd)


@dataclass(frozen=True)
class Project:
    index_types: tuple[IndexType, ...]
    tensors: tuple[TensorInstance, ...]
    edges: tuple[Edge, ...]
    format_version: int = 1
    extra: Mapping = field(default_factory=dict, compare=False)

    def index_type(self, type_id: int) -> IndexType:
        for it in self.index_types:
            if it.id == type_id:
                return it
        raise KeyError(type_id)

    def tensor(self, tensor_id: int) -> TensorInstance:
        for t in self.tensors:
            if t.id == tensor_id:
                return t
        raise KeyError(tensor_id)

    def networks_present(self) -> tuple[int, ...]:
        return tuple(sorted({t.network for t in self.tensors if t.network is not None}))


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    message: str
    network: Optional[int] = None  # None = project-level


@dataclass(frozen=True)
class ValidationReport:
    networks: Mapping[int, tuple[Violation, ...]]
    project_errors: tuple[Violation, ...] = ()

    def network_valid(self, net_no: int) -> bool:
        return net_no in self.networks and not self.networks[net_no]

    @property
    def valid_networks(self) -> tuple[int, ...]:
        return tuple(n for n in sorted(self.networks) if not self.networks[n])

    @property
    def ok(self) -> bool:
        return not self.project_errors and all(
            not errs for errs in self.networks.values()
        )

    def all_violations(self) -> tuple[Violation, ...]:
        out = list(self.project_errors)
        for n in sorted(self.networks):
            out.extend(self.networks[n])
        return tuple(out)


@dataclass(frozen=True)
class SyntheticIdentity:
    """An edge left with both ends open: an identity matrix in the network."""

    dim: int
    labels: tuple[int, int]
    index_type: int


@dataclass(frozen=True)
class LabeledNetwork:
    """A compiled network: per-tensor integer label lists plus a dimension table.

    ``labels[i][k-1]`` is the label on anchor ``k`` of the ``i``-th tensor of
    the network (project-file order).  Positive labels appear exactly twice,
    negative labels exactly once and form the contiguous set ``-1..-m``.
    ``synthetic`` carries identity tensors appended after the real instances
    (only environment networks of tensors with internal trace edges use it).
    """

    network_no: int
    tensor_ids: tuple[int, ...]
    names: tuple[str, ...]
    labels: tuple[tuple[int, ...], ...]
    dims: Mapping[int, int]
    label_types: Mapping[int, int]
    label_overridden: frozenset[int]
    type_names: Mapping[int, str]
    closed: bool
    synthetic: tuple[SyntheticIdentity, ...] = ()

    @property
    def n(self) -> int:
        return len(self.tensor_ids)

    @property
    def open_count(self) -> int:
        return sum(1 for d in self.dims if d < 0)

    def all_label_lists(self) -> tuple[tuple[int, ...], ...]:
        return self.labels + tuple(s.labels for s in self.synthetic)


def resolved_names(project: Project, net_no: int) -> tuple[str, ...]:
    """Variable names for the tensors of a network, in instance order.

    Unnamed tensors get ``N<net>_<k>`` with ``k`` the 1-based position of the
    instance within its network.
    """
    names = []
    k = 0
    for t in project.tensors:
        if t.network != net_no:
            continue
        k += 1
        names.append(t.name if t.name is not None else f"N{net_no}_{k}")
    return tuple(names)


def _edge_dim(project: Project, edge: Edge, dims_override: Optional[Mapping[str, int]]) -> int:
    if edge.dim_override is not None:
        return edge.dim_override
    it = project.index_type(edge.index_type)
    if dims_override and it.name in dims_override:
        return dims_override[it.name]
    return it.default_dim


def _anchor_occupancy(project: Project) -> dict[tuple[int, int], list[Edge]]:
    """Map (tensor id, anchor ordinal) -> edges whose ends land there."""
    occ: dict[tuple[int, int], list[Edge]] = {}
    for e in project.edges:
        ends = [e.end_a] if e.is_open else [e.end_a, e.end_b]
        for ref in ends:
            occ.setdefault((ref.tensor, ref.anchor), []).append(e)
    return occ


def _edge_network(project: Project, edge: Edge) -> tuple[Optional[int], Optional[int]]:
    """Networks of the edge's endpoints (open end inherits end_a's network)."""
    na = project.tensor(edge.end_a.tensor).network
    if edge.is_open:
        return na, na
    return na, project.tensor(edge.end_b.tensor).network


def validate_project(project: Project, dims_override: Optional[Mapping[str, int]] = None) -> ValidationReport:
    """Check every semantic rule and report all violations; never raises.

    Tensors not assigned to a network are ignored except for name checks.
    Copy checks run on resolved variable names, so an explicit name that
    collides with a generated default (for example ``N1_2``) is treated as
    declaring copies of that tensor.
    """
    per_net: dict[int, list[Violation]] = {n: [] for n in project.networks_present()}
    proj: list[Violation] = []

    if not per_net:
        proj.append(Violation(E_NO_NETWORKS, "project",
                              "no tensor is assigned to a network"))

    for t in project.tensors:
        if t.name is None:
            continue
        bad = not NAME_RE.match(t.name)
        reserved = t.name in RESERVED_WORDS
        if bad or reserved:
            why = "is a reserved word" if reserved else "is not a valid identifier"
            v = Violation(E_BAD_NAME, f"tensor {t.id}",
                          f"name {t.name!r} {why}", network=t.network)
            (per_net[t.network] if t.network in per_net else proj).append(v)

    # Edges crossing network boundaries; collect per-network internal/open edges.
    internal: dict[int, list[Edge]] = {n: [] for n in per_net}
    opens: dict[int, list[Edge]] = {n: [] for n in per_net}
    for e in project.edges:
        na, nb = _edge_network(project, e)
        if na is None and nb is None:
            continue  # fully unassigned, ignored
        if na != nb:
            msg = (f"edge {e.id} joins network {na} to network {nb}"
                   if None not in (na, nb)
                   else f"edge {e.id} joins an assigned tensor to an unassigned one")
            for n in {na, nb} - {None}:
                per_net[n].append(Violation(E_CROSS_NETWORK, f"edge {e.id}", msg, network=n))
            continue
        if e.is_open:
            opens[na].append(e)
        else:
            internal[na].append(e)

    occ = _anchor_occupancy(project)
    for net_no in per_net:
        for t in project.tensors:
            if t.network != net_no:
                continue
            for k in range(1, t.anchor_count + 1):
                ends = occ.get((t.id, k), [])
                if not ends:
                    per_net[net_no].append(Violation(
                        E_UNWIRED_ANCHOR, f"tensor {t.id} anchor {k}",
                        f"anchor {k} of tensor {t.id} has no index attached",
                        network=net_no))
                elif len(ends) > 1:
                    per_net[net_no].append(Violation(
                        E_MULTIWIRED_ANCHOR, f"tensor {t.id} anchor {k}",
                        f"anchor {k} of tensor {t.id} has {len(ends)} index ends attached",
                        network=net_no))

        plaques = sorted(e.end_b.plaque for e in opens[net_no])
        seen = set()
        for p in plaques:
            if p in seen:
                per_net[net_no].append(Violation(
                    E_DUP_PLAQUE, f"network {net_no}",
                    f"open plaque label {p} is used more than once", network=net_no))
            seen.add(p)
        expected = set(range(1, len(seen) + 1))
        if seen != expected:
            per_net[net_no].append(Violation(
                E_GAP_PLAQUE, f"network {net_no}",
                f"open plaque labels {sorted(seen)} are not contiguous 1..{len(seen)}",
                network=net_no))

    # Copies: same resolved name => same arity and same per-anchor dimensions.
    by_name: dict[str, list[tuple[TensorInstance, int]]] = {}
    for net_no in per_net:
        for t, name in zip((t for t in project.tensors if t.network == net_no),
                           resolved_names(project, net_no)):
            by_name.setdefault(name, []).append((t, net_no))
    for name, group in by_name.items():
        if len(group) < 2:
            continue
        first, _ = group[0]
        for t, net_no in group[1:]:
            if t.anchor_count != first.anchor_count:
                per_net[net_no].append(Violation(
                    E_COPY_MISMATCH, f"tensor {t.id}",
                    f"copies named {name!r} have different anchor counts "
                    f"({t.anchor_count} vs {first.anchor_count})", network=net_no))
                continue
            for k in range(1, t.anchor_count + 1):
                da = _anchor_dim(project, first, k, occ, dims_override)
                db = _anchor_dim(project, t, k, occ, dims_override)
                if da is not None and db is not None and da != db:
                    per_net[net_no].append(Violation(
                        E_COPY_MISMATCH, f"tensor {t.id} anchor {k}",
                        f"copies named {name!r} disagree on the dimension of "
                        f"anchor {k} ({db} vs {da})", network=net_no))

    return ValidationReport(
        networks={n: tuple(errs) for n, errs in per_net.items()},
        project_errors=tuple(proj),
    )


def _anchor_dim(project, tensor, anchor, occ, dims_override) -> Optional[int]:
    ends = occ.get((tensor.id, anchor), [])
    if len(ends) != 1:
        return None  # unwired/multiwired anchors are reported separately
    return _edge_dim(project, ends[0], dims_override)


def compile_network(project: Project, net_no: int,
                    dims_override: Optional[Mapping[str, int]] = None) -> LabeledNetwork:
    """Compile one network into labeled form.

    Internal edges receive positive labels 1..K in ascending edge-id order;
    an open end with plaque ``p`` receives label ``-p``.  The result is a
    pure function of the project value, so identical input bytes give an
    identical labeling.

    Raises InvalidNetworkError unless the network validates cleanly.
    """
    report = validate_project(project, dims_override)
    if net_no not in report.networks:
        raise InvalidNetworkError(net_no, (Violation(
            E_NO_NETWORKS, f"network {net_no}",
            f"network {net_no} has no tensors", network=net_no),))
    if not report.network_valid(net_no):
        raise InvalidNetworkError(net_no, report.networks[net_no])

    tensors = [t for t in project.tensors if t.network == net_no]

    label_of_end: dict[tuple[int, int], int] = {}
    dims: dict[int, int] = {}
    label_types: dict[int, int] = {}
    overridden = set()

    internal = sorted(
        (e for e in project.edges
         if not e.is_open
         and project.tensor(e.end_a.tensor).network == net_no
         and project.tensor(e.end_b.tensor).network == net_no),
        key=lambda e: e.id)
    for lab, e in enumerate(internal, start=1):
        label_of_end[(e.end_a.tensor, e.end_a.anchor)] = lab
        label_of_end[(e.end_b.tensor, e.end_b.anchor)] = lab
        dims[lab] = _edge_dim(project, e, dims_override)
        label_types[lab] = e.index_type
        if e.dim_override is not None:
            overridden.add(lab)

    open_edges = [e for e in project.edges
                  if e.is_open and project.tensor(e.end_a.tensor).network == net_no]
    for e in open_edges:
        lab = -e.end_b.plaque
        label_of_end[(e.end_a.tensor, e.end_a.anchor)] = lab
        dims[lab] = _edge_dim(project, e, dims_override)
        label_types[lab] = e.index_type
        if e.dim_override is not None:
            overridden.add(lab)

    labels = tuple(
        tuple(label_of_end[(t.id, k)] for k in range(1, t.anchor_count + 1))
        for t in tensors)

    return LabeledNetwork(
        network_no=net_no,
        tensor_ids=tuple(t.id for t in tensors),
        names=resolved_names(project, net_no),
        labels=labels,
        dims=dims,
        label_types=label_types,
        label_overridden=frozenset(overridden),
        type_names={it.id: it.name for it in project.index_types},
        closed=not open_edges,
    )
