"""Single-tensor environments of closed networks.

Removing tensor M from a closed network leaves its environment network: the
labels M used to share become open, numbered after M's anchors (anchor k
becomes plaque k), so summing the elementwise product of the environment
with M reproduces the closed network's scalar.  When M's name occurs only
once, the environment is also the gradient of the scalar with respect to M.

A trace edge internal to M stays behind as an edge with both ends open,
i.e. an identity matrix, carried as a synthetic tensor appended after the
real instances.

``derive_environment_order`` re-roots the closed network's contraction tree
instead of running a fresh search: walking from leaf M up to the root, the
sibling subtrees of M's ancestors are accumulated in root-to-leaf order.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import E_ENV_OPEN_NETWORK, LabeledNetwork, SyntheticIdentity
from .search import ContractionTree, Leaf, Node, TreeItem, binary_cost


class EnvironmentOfOpenNetworkError(ValueError):
    code = E_ENV_OPEN_NETWORK

    def __init__(self, network_no: int):
        super().__init__(
            f"network {network_no} is not closed: single-tensor environments "
            f"are defined only for networks that evaluate to a scalar")


def _check_target(net: LabeledNetwork, m: int) -> None:
    if not net.closed:
        raise EnvironmentOfOpenNetworkError(net.network_no)
    if net.n < 2:
        raise ValueError("environments need at least two tensors")
    if not 1 <= m <= net.n:
        raise ValueError(f"environment target {m} out of range 1..{net.n}")


def environment_relabeling(net: LabeledNetwork, m: int):
    """Map from the removed tensor's shared labels to open labels, plus the
    synthetic identities left behind by its internal trace edges."""
    target = net.labels[m - 1]
    counts: dict[int, int] = {}
    for lab in target:
        counts[lab] = counts.get(lab, 0) + 1
    relabel: dict[int, int] = {}
    synthetic: list[SyntheticIdentity] = []
    first_pos: dict[int, int] = {}
    for k, lab in enumerate(target, start=1):
        if counts[lab] == 2:
            if lab in first_pos:
                synthetic.append(SyntheticIdentity(
                    dim=net.dims[lab], labels=(-first_pos[lab], -k),
                    index_type=net.label_types[lab]))
            else:
                first_pos[lab] = k
        else:
            relabel[lab] = -k
    return relabel, tuple(synthetic)


def environment_network(net: LabeledNetwork, m: int) -> LabeledNetwork:
    """The network left after removing the m-th tensor (1-based position)."""
    _check_target(net, m)
    relabel, synthetic = environment_relabeling(net, m)

    keep = [i for i in range(net.n) if i != m - 1]
    new_labels = tuple(
        tuple(relabel.get(lab, lab) for lab in net.labels[i]) for i in keep)

    used = {lab for labs in new_labels for lab in labs}
    used.update(lab for s in synthetic for lab in s.labels)
    dims = {}
    types = {}
    overridden = set()
    for lab in used:
        src = lab
        if lab < 0:
            anchor = -lab
            src = net.labels[m - 1][anchor - 1]
        dims[lab] = net.dims[src]
        types[lab] = net.label_types[src]
        if src in net.label_overridden:
            overridden.add(lab)

    return LabeledNetwork(
        network_no=net.network_no,
        tensor_ids=tuple(net.tensor_ids[i] for i in keep),
        names=tuple(net.names[i] for i in keep),
        labels=new_labels,
        dims=dims,
        label_types=types,
        label_overridden=frozenset(overridden),
        type_names=dict(net.type_names),
        closed=False,
        synthetic=synthetic,
    )


def _relabel_subtree(item: TreeItem, relabel, env_pos, dims) -> TreeItem:
    if isinstance(item, Leaf):
        return Leaf(env_pos[item.position],
                    frozenset(relabel.get(l, l) for l in item.labels))
    left = _relabel_subtree(item.left, relabel, env_pos, dims)
    right = _relabel_subtree(item.right, relabel, env_pos, dims)
    shared = left.labels & right.labels
    return Node(left, right, left.labels ^ right.labels,
                tuple(sorted(shared)),
                binary_cost(sorted(left.labels), sorted(right.labels), dims))


def derive_environment_order(net: LabeledNetwork, tree: ContractionTree,
                             m: int) -> ContractionTree:
    """Environment contraction tree obtained by re-rooting ``tree`` at the
    m-th leaf; costs are those of the re-rooted tree, not re-optimized."""
    _check_target(net, m)
    env = environment_network(net, m)
    relabel, _ = environment_relabeling(net, m)
    env_pos = {}
    for i in range(net.n):
        if i != m - 1:
            env_pos[i] = i if i < m - 1 else i - 1

    # siblings of m's ancestors, root-most first
    siblings: list[TreeItem] = []
    item = tree.root
    while isinstance(item, Node):
        in_left = any(lf.position == m - 1 for lf in _leaves(item.left))
        siblings.append(item.right if in_left else item.left)
        item = item.left if in_left else item.right
    if not isinstance(item, Leaf) or item.position != m - 1:
        raise ValueError(f"position {m} is not a leaf of the tree")

    acc = _relabel_subtree(siblings[0], relabel, env_pos, env.dims)
    for sib in siblings[1:]:
        nxt = _relabel_subtree(sib, relabel, env_pos, env.dims)
        shared = acc.labels & nxt.labels
        acc = Node(acc, nxt, acc.labels ^ nxt.labels, tuple(sorted(shared)),
                   binary_cost(sorted(acc.labels), sorted(nxt.labels), env.dims))

    # trace edges of the removed tensor survive as identity tensors: join
    # them as outer products so the tree covers every env-network position
    for i, synth in enumerate(env.synthetic):
        leaf = Leaf(net.n - 1 + i, frozenset(synth.labels))
        acc = Node(acc, leaf, acc.labels ^ leaf.labels, (),
                   binary_cost(sorted(acc.labels), sorted(leaf.labels), env.dims))

    labs_m = net.labels[m - 1]
    target_traces = {lab for lab in labs_m if labs_m.count(lab) == 2}
    traces = tuple(t for t in tree.trace_labels if t not in target_traces)
    return ContractionTree(acc, net.n - 1 + len(env.synthetic), traces)


def _leaves(item: TreeItem):
    if isinstance(item, Leaf):
        yield item
    else:
        yield from _leaves(item.left)
        yield from _leaves(item.right)


def network_operands(net: LabeledNetwork, arrays: Sequence) -> list:
    """Arrays for a network's ncon call: the instances, then eye() for each
    synthetic identity."""
    ops = list(arrays)
    if len(ops) != net.n:
        raise ValueError(f"network has {net.n} tensors, got {len(ops)} arrays")
    ops.extend(np.eye(s.dim) for s in net.synthetic)
    return ops
