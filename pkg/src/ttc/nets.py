"""Built-in example projects used by the test suite and the docs.

``binary_mera_like`` is a reconstruction of the classic binary-MERA layer
diagrams from the tensor-network literature, included as a desk-scale
benchmark topology: ascending and descending superoperators (11 tensors
each), the closed energy network (12 tensors) and a two-tensor operator
trace.  It uses four unique tensor variables (uDis, wIso, hamThree,
rhoThree) across four networks, with daggered instances expressed as copies
whose wiring encodes the transpose (real tensors assumed).
"""

from __future__ import annotations

from .model import AnchorRef, Edge, IndexType, OpenEnd, Project, TensorInstance


def _anchor(t, a):
    return AnchorRef(tensor=t, anchor=a)


def _edges(specs):
    out = []
    for eid, spec in enumerate(specs, start=1):
        out.append(_one_edge(eid, spec))
    return tuple(out)


def _one_edge(eid, spec):
    if len(spec) == 4:
        type_id, end_a, end_b, override = spec
    else:
        type_id, end_a, end_b = spec
        override = None
    if isinstance(end_b, int):  # open end, plaque number
        end_b = OpenEnd(plaque=end_b)
    else:
        end_b = _anchor(*end_b)
    return Edge(id=eid, index_type=type_id, end_a=_anchor(*end_a),
                end_b=end_b, dim_override=override)


def matrix_chain() -> Project:
    """A(2x4) . B(4x3) . C(3x5) with both outer indices open."""
    return Project(
        index_types=(
            IndexType(id=1, name="a", default_dim=2),
            IndexType(id=2, name="b", default_dim=4),
            IndexType(id=3, name="c", default_dim=3),
            IndexType(id=4, name="d", default_dim=5),
        ),
        tensors=(
            TensorInstance(id=1, anchor_count=2, name="A", network=1),
            TensorInstance(id=2, anchor_count=2, name="B", network=1),
            TensorInstance(id=3, anchor_count=2, name="C", network=1),
        ),
        edges=_edges([
            (1, (1, 1), 1),
            (2, (1, 2), (2, 1)),
            (3, (2, 2), (3, 1)),
            (4, (3, 2), 2),
        ]),
    )


def trace_pair(dim: int = 4) -> Project:
    """Closed two-tensor network computing trace(A . B)."""
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=dim),),
        tensors=(
            TensorInstance(id=1, anchor_count=2, name="A", network=1),
            TensorInstance(id=2, anchor_count=2, name="B", network=1),
        ),
        edges=_edges([
            (1, (1, 1), (2, 2)),
            (1, (1, 2), (2, 1)),
        ]),
    )


def ring_six(dim: int = 3) -> Project:
    """Closed six-tensor network: a hexagon ring with three cross chords."""
    tensors = tuple(
        TensorInstance(id=i + 1, anchor_count=3, name="ABCDEF"[i], network=1)
        for i in range(6))
    specs = []
    for i in range(6):
        specs.append((1, (i + 1, 2), ((i + 1) % 6 + 1, 1)))
    for i in range(3):
        specs.append((1, (i + 1, 3), (i + 4, 3)))
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=dim),),
        tensors=tensors,
        edges=_edges(specs),
    )


def _mera_block(tid0: int, net: int, include_ham: bool, include_rho: bool):
    """One binary-MERA layer diagram.

    Tensor ids are allocated from ``tid0``: uA, uB, uAd, uBd (uDis copies),
    wL, wC, wR, wLd, wCd, wRd (wIso copies), then hamThree and/or rhoThree.
    Returns (tensors, edge_specs).
    """
    uA, uB, uAd, uBd, wL, wC, wR, wLd, wCd, wRd = range(tid0, tid0 + 10)
    tensors = [
        TensorInstance(id=uA, anchor_count=4, name="uDis", network=net),
        TensorInstance(id=uB, anchor_count=4, name="uDis", network=net),
        TensorInstance(id=uAd, anchor_count=4, name="uDis", network=net),
        TensorInstance(id=uBd, anchor_count=4, name="uDis", network=net),
        TensorInstance(id=wL, anchor_count=3, name="wIso", network=net),
        TensorInstance(id=wC, anchor_count=3, name="wIso", network=net),
        TensorInstance(id=wR, anchor_count=3, name="wIso", network=net),
        TensorInstance(id=wLd, anchor_count=3, name="wIso", network=net),
        TensorInstance(id=wCd, anchor_count=3, name="wIso", network=net),
        TensorInstance(id=wRd, anchor_count=3, name="wIso", network=net),
    ]
    specs = [
        # disentangler tops into the upper isometries
        (1, (uA, 3), (wL, 2)),
        (1, (uA, 4), (wC, 1)),
        (1, (uB, 3), (wC, 2)),
        (1, (uB, 4), (wR, 1)),
        # daggered disentangler bottoms into the lower isometries
        (1, (uAd, 3), (wLd, 2)),
        (1, (uAd, 4), (wCd, 1)),
        (1, (uBd, 3), (wCd, 2)),
        (1, (uBd, 4), (wRd, 1)),
        # boundary sites bypass the disentanglers
        (1, (wL, 1), (wLd, 1)),
        (1, (wR, 2), (wRd, 2)),
        # site 5 bypasses the operator
        (1, (uB, 2), (uBd, 2)),
    ]
    if include_ham:
        ham = tid0 + 10
        tensors.append(TensorInstance(id=ham, anchor_count=6, name="hamThree",
                                      network=net))
        specs += [
            (1, (uAd, 1), (ham, 1)),
            (1, (uAd, 2), (ham, 2)),
            (1, (uBd, 1), (ham, 3)),
            (1, (uA, 1), (ham, 4)),
            (1, (uA, 2), (ham, 5)),
            (1, (uB, 1), (ham, 6)),
        ]
    else:
        specs += [
            (1, (uAd, 1), 1),
            (1, (uAd, 2), 2),
            (1, (uBd, 1), 3),
            (1, (uA, 1), 4),
            (1, (uA, 2), 5),
            (1, (uB, 1), 6),
        ]
    if include_rho:
        rho = tid0 + 10 + (1 if include_ham else 0)
        tensors.append(TensorInstance(id=rho, anchor_count=6, name="rhoThree",
                                      network=net))
        specs += [
            (1, (rho, 1), (wL, 3)),
            (1, (rho, 2), (wC, 3)),
            (1, (rho, 3), (wR, 3)),
            (1, (rho, 4), (wLd, 3)),
            (1, (rho, 5), (wCd, 3)),
            (1, (rho, 6), (wRd, 3)),
        ]
    else:
        specs += [
            (1, (wLd, 3), 1 if include_ham else 7),
            (1, (wCd, 3), 2 if include_ham else 8),
            (1, (wRd, 3), 3 if include_ham else 9),
            (1, (wL, 3), 4 if include_ham else 10),
            (1, (wC, 3), 5 if include_ham else 11),
            (1, (wR, 3), 6 if include_ham else 12),
        ]
    return tensors, specs


def binary_mera_like(chi: int = 6) -> Project:
    """Four binary-MERA layer networks sharing uDis/wIso/hamThree/rhoThree.

    Network 1: ascending superoperator (11 tensors, 6 open indices).
    Network 2: descending superoperator (11 tensors, 6 open indices).
    Network 3: energy expectation (12 tensors, closed).
    Network 4: operator trace of rhoThree with hamThree (2 tensors, closed).
    """
    tensors: list[TensorInstance] = []
    specs: list = []
    t1, s1 = _mera_block(1, net=1, include_ham=True, include_rho=False)
    t2, s2 = _mera_block(21, net=2, include_ham=False, include_rho=True)
    t3, s3 = _mera_block(41, net=3, include_ham=True, include_rho=True)
    tensors += t1 + t2 + t3
    specs += s1 + s2 + s3
    rho4, ham4 = 61, 62
    tensors += [
        TensorInstance(id=rho4, anchor_count=6, name="rhoThree", network=4),
        TensorInstance(id=ham4, anchor_count=6, name="hamThree", network=4),
    ]
    specs += [
        (1, (rho4, 1), (ham4, 4)),
        (1, (rho4, 2), (ham4, 5)),
        (1, (rho4, 3), (ham4, 6)),
        (1, (rho4, 4), (ham4, 1)),
        (1, (rho4, 5), (ham4, 2)),
        (1, (rho4, 6), (ham4, 3)),
    ]
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=chi),),
        tensors=tuple(tensors),
        edges=_edges(specs),
    )


def figure_pair() -> Project:
    """Two tensors with one shared index and four open indices.

    A is 2x3x4 and B is 4x5x6 via per-edge dimension overrides; the third
    anchor of A connects to the first anchor of B.
    """
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=2),),
        tensors=(
            TensorInstance(id=1, anchor_count=3, name="A", network=1),
            TensorInstance(id=2, anchor_count=3, name="B", network=1),
        ),
        edges=_edges([
            (1, (1, 1), 1, 2),
            (1, (1, 2), 2, 3),
            (1, (1, 3), (2, 1), 4),
            (1, (2, 2), 3, 5),
            (1, (2, 3), 4, 6),
        ]),
    )


def traced_tensor_pair(dim: int = 3) -> Project:
    """Closed pair where A carries an internal trace edge.

    A has 4 anchors, with anchors 3 and 4 joined to each other; B closes
    A's first two anchors.  Exercises the identity tensors left behind in
    A's environment.
    """
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=dim),),
        tensors=(
            TensorInstance(id=1, anchor_count=4, name="A", network=1),
            TensorInstance(id=2, anchor_count=2, name="B", network=1),
        ),
        edges=_edges([
            (1, (1, 1), (2, 1)),
            (1, (1, 2), (2, 2)),
            (1, (1, 3), (1, 4)),
        ]),
    )


def invalid_unwired() -> Project:
    """One three-anchor tensor with only two anchors wired (invalid)."""
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=2),),
        tensors=(TensorInstance(id=1, anchor_count=3, name="T", network=1),),
        edges=_edges([
            (1, (1, 1), 1),
            (1, (1, 2), 2),
        ]),
    )


FIXTURES = {
    "chain": matrix_chain,
    "trace_pair": trace_pair,
    "ring6": ring_six,
    "binary_mera": binary_mera_like,
    "figure_pair": figure_pair,
    "traced_pair": traced_tensor_pair,
    "invalid_unwired": invalid_unwired,
}
