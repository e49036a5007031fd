"""Contraction-order search and cost reporting.

Costs are exact integers throughout: the cost of one pairwise step is the
product of the dimensions of the union of both operands' labels, and a
tree's total is the plain sum of its step costs.  Anything above 2**128 is
treated as overflow and raised, never rounded.

``optimal_order_full`` runs an exact dynamic program over tensor subsets
(all bipartitions, outer products included, so the returned optimum is
unconditional).  Two interchangeable lanes implement the same enumeration:

* a numba ``@njit`` kernel (``_dp_numba.dp_full``), used when every
  reachable cost provably fits in int64 and there are at most 63 labels;
* a pure-Python big-integer lane, always available.

``TTC_KERNEL=auto|numba|python`` selects the lane (auto prefers numba and
falls back when the instance is out of the kernel's safe range); both lanes
return identical trees, tie-breaks included.  Ties between equal-cost trees
go to the lexicographically smallest linearized order.

The quick/thorough/extensive restricted searches are documented stand-ins:
greedy, seeded randomized-restart greedy, and a cost-capped dynamic program
over subsets connected by shared indices with the cap multiplied by the
smallest index dimension each round under a wall-clock budget.
"""

from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .model import LabeledNetwork

N_FULL_CAP = 16
COST_WIDTH_BITS = 128
MAX_COST = 1 << COST_WIDTH_BITS
TIME_DIVISOR = 3e9  # one multiplication per cycle on a single 3 GHz core
THOROUGH_RESTARTS = 1000
EXTENSIVE_BUDGET_S = 60.0

SEARCH_MODES = ("full", "quick", "thorough", "extensive")


class CostOverflowError(OverflowError):
    """A contraction cost exceeded the 128-bit accounting width."""


class FullSearchCapExceeded(ValueError):
    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(
            f"full optimal search is capped at {cap} tensors (network has {n}); "
            f"use heuristic_order with mode quick, thorough or extensive")


def binary_cost(labels_a, labels_b, dims: Mapping[int, int]) -> int:
    """Multiplications for one pairwise contraction: prod of dims over the
    union of both label lists (shared labels counted once).

    Inputs must be trace-free (no label repeated within one list).  An
    outer product (empty intersection) follows the same formula.
    """
    la, lb = list(labels_a), list(labels_b)
    if len(set(la)) != len(la) or len(set(lb)) != len(lb):
        raise ValueError("binary_cost operands must be trace-free label lists")
    cost = 1
    for lab in set(la) | set(lb):
        cost *= dims[lab]
    if cost > MAX_COST:
        raise CostOverflowError(
            f"step cost exceeds 2**{COST_WIDTH_BITS} multiplications")
    return cost


@dataclass(frozen=True)
class Leaf:
    position: int  # 0-based position into the network's label lists
    labels: frozenset[int]


@dataclass(frozen=True)
class Node:
    left: "TreeItem"
    right: "TreeItem"
    labels: frozenset[int]
    consumed: tuple[int, ...]  # positive labels summed at this step, ascending
    step_cost: int


TreeItem = Union[Leaf, Node]


@dataclass(frozen=True)
class ContractionTree:
    root: TreeItem
    n: int
    trace_labels: tuple[int, ...]  # pre-contracted before the search, ascending

    def nodes(self):
        """Internal nodes in post-order."""
        out = []

        def rec(item):
            if isinstance(item, Node):
                rec(item.left)
                rec(item.right)
                out.append(item)

        rec(self.root)
        return out

    def leaves(self):
        out = []

        def rec(item):
            if isinstance(item, Leaf):
                out.append(item)
            else:
                rec(item.left)
                rec(item.right)

        rec(self.root)
        return out

    @property
    def total_cost(self) -> int:
        return sum(nd.step_cost for nd in self.nodes())

    def linearization(self) -> tuple[int, ...]:
        out: list[int] = []
        for nd in self.nodes():
            out.extend(nd.consumed)
        return tuple(out)

    def ncon_order(self) -> tuple[int, ...]:
        """Order for an ncon call: traces first, then the linearization."""
        return self.trace_labels + self.linearization()


def effective_leaves(net: LabeledNetwork) -> tuple[list[frozenset[int]], tuple[int, ...]]:
    """Trace-free label sets per tensor plus the removed trace labels.

    A label appearing twice on one tensor is a partial trace: it costs no
    multiplications, so the search pre-contracts it.
    """
    leaf_sets: list[frozenset[int]] = []
    traces: list[int] = []
    for labs in net.all_label_lists():
        seen = set()
        dup = set()
        for lab in labs:
            (dup if lab in seen else seen).add(lab)
        traces.extend(dup)
        leaf_sets.append(frozenset(seen - dup))
    return leaf_sets, tuple(sorted(traces))


def _bit_layout(leaf_sets, dims):
    """Map labels to bit positions: positives ascending first, then opens."""
    labels = set().union(*leaf_sets) if leaf_sets else set()
    pos = sorted(l for l in labels if l > 0)
    neg = sorted((l for l in labels if l < 0), reverse=True)
    order = pos + neg
    bit_of = {lab: i for i, lab in enumerate(order)}
    dims_by_bit = [dims[lab] for lab in order]
    return bit_of, order, dims_by_bit, len(pos)


def _kernel_choice(requested: Optional[str], n, nbits, dims_by_bit) -> str:
    requested = requested or os.environ.get("TTC_KERNEL", "auto")
    if requested not in ("auto", "numba", "python"):
        raise ValueError(f"unknown kernel {requested!r}; use auto, numba or python")
    if requested == "python":
        return "python"
    from . import _dp_numba

    reason = None
    if not _dp_numba.NUMBA_AVAILABLE:
        reason = "numba is not importable"
    elif nbits > 63:
        reason = f"{nbits} labels exceed the 63-bit mask width"
    else:
        # any candidate total is at most (n-1) * prod(all dims): each step
        # cost is a product over a subset of the labels, and a tree has at
        # most n-1 steps, so int64 arithmetic is exact below 2**63
        bound = 1
        for d in dims_by_bit:
            bound *= d
        if max(1, n - 1) * bound >= 1 << 63:
            reason = "costs may not fit in int64"
    if reason is None:
        return "numba"
    if requested == "numba":
        raise RuntimeError(f"numba kernel unusable here: {reason}")
    return "python"


def _dp_python(tmasks, dims_by_bit, npos):
    """Pure-Python lane: same enumeration as the numba kernel, exact big ints."""
    n = len(tmasks)
    size = 1 << n
    mask = [0] * size
    best: list[Optional[int]] = [None] * size
    left = [0] * size
    lin: list[tuple[int, ...]] = [()] * size
    nbits = len(dims_by_bit)
    for i, m in enumerate(tmasks):
        mask[1 << i] = m
        best[1 << i] = 0
    for S in range(1, size):
        if S & (S - 1) == 0:
            continue
        low = S & (-S)
        rest = S ^ low
        mask[S] = mask[low] ^ mask[rest]
        bS: Optional[int] = None
        lS: tuple[int, ...] = ()
        leftS = 0
        sub = rest
        while True:
            if sub != rest:
                S1 = low | sub
                S2 = S ^ S1
                m1 = mask[S1]
                m2 = mask[S2]
                union = m1 | m2
                c = 1
                u = union
                while u:
                    c *= dims_by_bit[(u & -u).bit_length() - 1]
                    u &= u - 1
                tot = best[S1] + best[S2] + c  # type: ignore[operator]
                if tot > MAX_COST:
                    raise CostOverflowError(
                        f"accumulated cost exceeds 2**{COST_WIDTH_BITS}")
                if bS is None or tot <= bS:
                    cons = []
                    v = m1 & m2
                    while v:
                        cons.append((v & -v).bit_length() - 1)
                        v &= v - 1
                    ctup = tuple(cons)  # ascending by construction
                    for A, B in ((S1, S2), (S2, S1)):
                        cand = lin[A] + lin[B] + ctup
                        if bS is None or tot < bS or cand < lS:
                            bS, lS, leftS = tot, cand, A
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[S] = bS
        left[S] = leftS
        lin[S] = lS
    return best, left, mask


def _tree_from_choices(leaf_sets, dims, left, full_mask):
    def rec(S) -> TreeItem:
        if S & (S - 1) == 0:
            i = S.bit_length() - 1
            return Leaf(i, leaf_sets[i])
        l = rec(left[S])
        r = rec(S ^ left[S])
        shared = l.labels & r.labels
        cost = binary_cost(sorted(l.labels), sorted(r.labels), dims)
        return Node(l, r, l.labels ^ r.labels, tuple(sorted(shared)), cost)

    return rec(full_mask)


def optimal_order_full(net: LabeledNetwork, kernel: Optional[str] = None,
                       cap: int = N_FULL_CAP) -> ContractionTree:
    """Exact optimal contraction tree by subset dynamic programming.

    Every bipartition of every subset is considered, disconnected ones
    included, so the optimum is unconditional for the given dimensions.
    Refuses networks larger than ``cap`` tensors; use ``heuristic_order``
    for those.
    """
    leaf_sets, traces = effective_leaves(net)
    n = len(leaf_sets)
    if n > cap:
        raise FullSearchCapExceeded(n, cap)
    if n == 0:
        raise ValueError("cannot search an empty network")
    if n == 1:
        return ContractionTree(Leaf(0, leaf_sets[0]), 1, traces)

    bit_of, order, dims_by_bit, npos = _bit_layout(leaf_sets, net.dims)
    tmasks = []
    for s in leaf_sets:
        m = 0
        for lab in s:
            m |= 1 << bit_of[lab]
        tmasks.append(m)

    lane = _kernel_choice(kernel, n, len(order), dims_by_bit)
    full = (1 << n) - 1
    if lane == "numba":
        import numpy as np

        from ._dp_numba import dp_full

        best, left, _ = dp_full(np.asarray(tmasks, dtype=np.int64),
                                np.asarray(dims_by_bit, dtype=np.int64),
                                npos)
        best_total = int(best[full])
        left_arr = [int(v) for v in left]
    else:
        best, left_arr, _ = _dp_python(tmasks, dims_by_bit, npos)
        best_total = best[full]  # type: ignore[assignment]

    tree = ContractionTree(
        _tree_from_choices(leaf_sets, net.dims, left_arr, full), n, traces)
    if tree.total_cost != best_total:
        raise AssertionError(
            f"kernel/total mismatch: {best_total} vs {tree.total_cost}")
    return tree


# ---------------------------------------------------------------------------
# Restricted searches


def _pair_metrics(a: TreeItem, b: TreeItem, dims):
    shared = a.labels & b.labels
    cost = binary_cost(sorted(a.labels), sorted(b.labels), dims)
    reduction = 1
    for lab in shared:
        reduction *= dims[lab]
    return shared, cost, reduction


def _merge(a: TreeItem, b: TreeItem, dims) -> Node:
    shared, cost, _ = _pair_metrics(a, b, dims)
    return Node(a, b, a.labels ^ b.labels, tuple(sorted(shared)), cost)


def _greedy(items: list[TreeItem], dims, rng: Optional[random.Random]) -> TreeItem:
    """Repeatedly contract the sharing pair of minimum step cost.

    Ties prefer the larger dimension reduction (product of the dimensions
    summed over), then the smaller minimum consumed label, then position.
    When no pair shares an index (disconnected remainder) the same rule is
    applied to all pairs, i.e. the cheapest outer product is taken.  With a
    generator, the pair is instead sampled with probability proportional to
    min_cost/cost over the candidate pool.
    """
    items = list(items)
    while len(items) > 1:
        cands = []
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                shared, cost, reduction = _pair_metrics(items[i], items[j], dims)
                key = (cost, -reduction, min(shared) if shared else float("inf"), i, j)
                cands.append((key, bool(shared), cost, i, j))
        sharing = [c for c in cands if c[1]]
        pool = sharing if sharing else cands
        if rng is None:
            _, _, _, i, j = min(pool, key=lambda c: c[0])
        else:
            cmin = min(c[2] for c in pool)
            weights = []
            for c in pool:
                try:
                    w = float(cmin) / float(c[2])
                except OverflowError:
                    w = 0.0
                weights.append(max(w, 1e-18))
            _, _, _, i, j = rng.choices(pool, weights=weights, k=1)[0]
        merged = _merge(items[i], items[j], dims)
        items[i] = merged
        del items[j]
    return items[0]


def _components(leaf_items: list[TreeItem]) -> list[list[int]]:
    """Groups of leaf positions connected by shared positive labels."""
    n = len(leaf_items)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[int, int] = {}
    for i, it in enumerate(leaf_items):
        for lab in it.labels:
            if lab <= 0:
                continue
            if lab in owner:
                parent[find(owner[lab])] = find(i)
            else:
                owner[lab] = i
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[r] for r in sorted(groups, key=lambda r: min(groups[r]))]


def _capped_component(leaves: list[TreeItem], dims, deadline: float) -> Optional[TreeItem]:
    """Cost-capped DP over subsets connected by shared indices.

    The cap starts at 1 and is multiplied by the smallest index dimension
    (at least 2) each round; once the full set is reached the entry is the
    cheapest connected-subsets tree.  Returns None on budget exhaustion.
    """
    n = len(leaves)
    if n == 1:
        return leaves[0]
    all_dims = sorted({d for it in leaves for d in (dims[l] for l in it.labels)})
    xi = max(2, all_dims[0]) if all_dims else 2
    full = (1 << n) - 1

    entries: dict[int, tuple[int, TreeItem]] = {}
    by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for i, it in enumerate(leaves):
        entries[1 << i] = (0, it)
        by_size[1].append(1 << i)

    cap = 1
    while full not in entries:
        if time.monotonic() > deadline:
            return None
        for c in range(2, n + 1):
            for d1 in range(1, c // 2 + 1):
                d2 = c - d1
                for i1, s1 in enumerate(by_size[d1]):
                    cost1, t1 = entries[s1]
                    start = i1 + 1 if d1 == d2 else 0
                    for s2 in by_size[d2][start:]:
                        if s1 & s2:
                            continue
                        cost2, t2 = entries[s2]
                        if not (t1.labels & t2.labels):
                            continue  # connected subsets only
                        step = binary_cost(sorted(t1.labels), sorted(t2.labels), dims)
                        tot = cost1 + cost2 + step
                        if tot > cap:
                            continue
                        s = s1 | s2
                        old = entries.get(s)
                        if old is None or tot < old[0]:
                            if old is None:
                                by_size[c].append(s)
                            entries[s] = (tot, _merge(t1, t2, dims))
                if time.monotonic() > deadline:
                    return None
        cap *= xi
    return entries[full][1]


def heuristic_order(net: LabeledNetwork, mode: str = "quick", seed: int = 0,
                    budget_s: float = EXTENSIVE_BUDGET_S) -> ContractionTree:
    """Restricted search for any network size; never guaranteed optimal.

    quick: deterministic greedy.  thorough: greedy plus seeded randomized
    restarts keeping the best tree.  extensive: per connected component, an
    iteratively deepened cost-capped DP under a wall-clock budget, falling
    back to greedy if the budget runs out; components are then joined by
    outer products in position order.
    """
    if mode not in ("quick", "thorough", "extensive"):
        raise ValueError(f"unknown search mode {mode!r}")
    leaf_sets, traces = effective_leaves(net)
    n = len(leaf_sets)
    if n == 0:
        raise ValueError("cannot search an empty network")
    leaf_items: list[TreeItem] = [Leaf(i, s) for i, s in enumerate(leaf_sets)]
    if n == 1:
        return ContractionTree(leaf_items[0], 1, traces)
    dims = net.dims

    if mode == "quick":
        root = _greedy(leaf_items, dims, None)
    elif mode == "thorough":
        root = _greedy(leaf_items, dims, None)
        best_cost = _subtree_cost(root)
        rng = random.Random(seed)
        for _ in range(THOROUGH_RESTARTS):
            cand = _greedy(leaf_items, dims, rng)
            cc = _subtree_cost(cand)
            if cc < best_cost:
                root, best_cost = cand, cc
    else:
        deadline = time.monotonic() + budget_s
        parts: list[TreeItem] = []
        for group in _components(leaf_items):
            leaves = [leaf_items[i] for i in group]
            done = _capped_component(leaves, dims, deadline)
            if done is None:
                done = _greedy(leaves, dims, None)
            parts.append(done)
        root = parts[0]
        for p in parts[1:]:
            root = _merge(root, p, dims)

    return ContractionTree(root, n, traces)


def _subtree_cost(item: TreeItem) -> int:
    if isinstance(item, Leaf):
        return 0
    return _subtree_cost(item.left) + _subtree_cost(item.right) + item.step_cost


# ---------------------------------------------------------------------------
# Reporting


@dataclass(frozen=True)
class PowerExpression:
    """A binary-step cost written as powers of the index types involved.

    Edges with an explicit dimension override break the uniform-power
    reading, so their dimensions are pulled out as literal factors.
    """

    exponents: Mapping[int, int]  # index-type id -> exponent
    factors: tuple[int, ...]      # explicit dims of overridden labels, sorted
    type_names: Mapping[int, str]

    def render(self) -> str:
        parts = []
        for tid in sorted(self.exponents):
            e = self.exponents[tid]
            if e <= 0:
                continue
            name = self.type_names.get(tid, f"type{tid}")
            parts.append(name if e == 1 else f"{name}^{e}")
        parts.extend(str(f) for f in self.factors)
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class CostReport:
    valid: bool
    guaranteed_optimal: bool
    total_mults: int
    time_estimate_s: float
    order: tuple[int, ...]
    top_costs: tuple[PowerExpression, ...]  # most expensive first, <= 2


def _power_expression(net: LabeledNetwork, node: Node) -> PowerExpression:
    exps: dict[int, int] = {}
    factors = []
    for lab in sorted(node.left.labels | node.right.labels):
        if lab in net.label_overridden:
            factors.append(net.dims[lab])
        else:
            tid = net.label_types[lab]
            exps[tid] = exps.get(tid, 0) + 1
    return PowerExpression(exponents=exps, factors=tuple(sorted(factors)),
                           type_names=dict(net.type_names))


def cost_report(net: LabeledNetwork, tree: ContractionTree,
                guaranteed: bool) -> CostReport:
    """Total multiplications, a 3 GHz single-core time estimate, the order,
    and the two most expensive binary steps as index-type power expressions
    (one for two-tensor networks, none for a single tensor)."""
    nodes = tree.nodes()
    total = sum(nd.step_cost for nd in nodes)
    if total > MAX_COST:
        raise CostOverflowError(
            f"total cost exceeds 2**{COST_WIDTH_BITS} multiplications")
    ranked = sorted(enumerate(nodes), key=lambda kv: (-kv[1].step_cost, kv[0]))
    top = tuple(_power_expression(net, nd) for _, nd in ranked[:2])
    return CostReport(
        valid=True,
        guaranteed_optimal=guaranteed,
        total_mults=total,
        time_estimate_s=total / TIME_DIVISOR,
        order=tree.linearization(),
        top_costs=top,
    )
