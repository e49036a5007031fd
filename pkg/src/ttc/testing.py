"""Seeded random networks and projects for tests and benchmarks."""

from __future__ import annotations

import random
from typing import Optional

from .model import (
    AnchorRef,
    Edge,
    IndexType,
    LabeledNetwork,
    OpenEnd,
    Project,
    TensorInstance,
)


def random_network(rng: random.Random, n: int, max_dim: int = 4,
                   min_dim: int = 2, closed: bool = False,
                   connected: bool = True, max_extra_edges: int = 3,
                   max_open: int = 4, space_cap: Optional[int] = None,
                   ) -> LabeledNetwork:
    """A random labeled network with n tensors.

    Built edge by edge: a random spanning tree first (when ``connected``),
    then extra internal edges, then open indices unless ``closed``.
    ``space_cap`` bounds the product of all dimensions (the size of the full
    label space), keeping brute-force oracles affordable.
    """
    anchors: list[list[int]] = [[] for _ in range(n)]  # labels per tensor
    dims: dict[int, int] = {}
    space = 1

    def add_dim() -> int:
        nonlocal space
        d = rng.randint(min_dim, max_dim)
        if space_cap is not None:
            while d > 1 and space * d > space_cap:
                d -= 1
            d = max(d, 1)
            if min_dim > 1 and d < min_dim:
                d = min_dim if space * min_dim <= space_cap else 1
        space *= d
        return max(d, 1)

    next_label = 1
    if connected and n > 1:
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            a = order[i]
            b = order[rng.randrange(i)]
            lab = next_label
            next_label += 1
            dims[lab] = add_dim()
            anchors[a].append(lab)
            anchors[b].append(lab)

    extra = rng.randint(0, max_extra_edges)
    for _ in range(extra):
        a = rng.randrange(n)
        b = rng.randrange(n)
        if n > 1 and a == b and rng.random() < 0.7:
            b = rng.randrange(n)  # keep same-tensor (trace) edges rarer
        lab = next_label
        next_label += 1
        dims[lab] = add_dim()
        anchors[a].append(lab)
        anchors[b].append(lab)

    n_open = 0 if closed else rng.randint(0 if n > 1 else 1, max_open)
    for k in range(1, n_open + 1):
        t = rng.randrange(n)
        dims[-k] = add_dim()
        anchors[t].append(-k)

    for t in range(n):
        if not anchors[t]:  # no scalar tensors: give it a label somewhere
            if closed:
                other = (t + 1) % n if n > 1 else t
                lab = next_label
                next_label += 1
                dims[lab] = add_dim()
                anchors[t].append(lab)
                anchors[other].append(lab)
                if other == t:
                    pass  # same-tensor edge: both ends on t
            else:
                k = n_open + 1
                n_open = k
                dims[-k] = add_dim()
                anchors[t].append(-k)
        rng.shuffle(anchors[t])

    labels = tuple(tuple(a) for a in anchors)
    return LabeledNetwork(
        network_no=1,
        tensor_ids=tuple(range(1, n + 1)),
        names=tuple(f"T{i}" for i in range(1, n + 1)),
        labels=labels,
        dims=dims,
        label_types={lab: 1 for lab in dims},
        label_overridden=frozenset(),
        type_names={1: "chi"},
        closed=(n_open == 0),
    )


def network_to_project(net: LabeledNetwork) -> Project:
    """Rebuild a Project whose compile_network output is ``net`` up to
    relabeling (anchor order and plaque numbers are preserved)."""
    tensors = tuple(
        TensorInstance(id=tid, anchor_count=len(net.labels[i]),
                       name=net.names[i], network=net.network_no)
        for i, tid in enumerate(net.tensor_ids))
    ends: dict[int, list[AnchorRef]] = {}
    for i, labs in enumerate(net.labels):
        for a, lab in enumerate(labs, start=1):
            ends.setdefault(lab, []).append(
                AnchorRef(tensor=net.tensor_ids[i], anchor=a))
    edges = []
    eid = 0
    for lab in sorted(l for l in net.dims if l > 0):
        eid += 1
        a, b = ends[lab]
        edges.append(Edge(id=eid, index_type=1, end_a=a, end_b=b,
                          dim_override=net.dims[lab]))
    for lab in sorted((l for l in net.dims if l < 0), reverse=True):
        eid += 1
        (a,) = ends[lab]
        edges.append(Edge(id=eid, index_type=1, end_a=a,
                          end_b=OpenEnd(plaque=-lab),
                          dim_override=net.dims[lab]))
    return Project(
        index_types=(IndexType(id=1, name="chi", default_dim=2),),
        tensors=tensors,
        edges=tuple(edges),
    )
