"""Reference contraction semantics on dense numpy arrays.

``ncon_execute`` is the ground truth the rest of the package is checked
against: partial traces first, then pairwise contractions following the
given order (contracting over every label shared by the chosen pair at
once), then outer products of any disconnected remainders, and a final
transpose so the axes follow ascending plaque order -1, -2, ...

Each pairwise step is realized as a ``numpy.tensordot`` (transpose +
reshape + matrix multiply); only the summation semantics and the reported
multiplication counts are contractual.  Real inputs are promoted to float64
and mixed real/complex input to complex128.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np


def _as_operand(t) -> np.ndarray:
    a = np.asarray(t)
    if np.iscomplexobj(a):
        return a.astype(np.complex128, copy=False)
    return a.astype(np.float64, copy=False)


def partial_trace(t, labels: Sequence[int]) -> tuple[np.ndarray, list[int]]:
    """Sum over the diagonal of every label appearing twice in ``labels``.

    No-op for distinct labels.  A repeated label must appear exactly twice
    and with equal dimensions on both axes.
    """
    a = _as_operand(t)
    labs = list(labels)
    if a.ndim != len(labs):
        raise ValueError(f"tensor has {a.ndim} axes but {len(labs)} labels")
    counts: dict[int, int] = {}
    for lab in labs:
        counts[lab] = counts.get(lab, 0) + 1
    for lab, cnt in counts.items():
        if cnt > 2:
            raise ValueError(f"label {lab} appears {cnt} times on one tensor")
    for lab in sorted(k for k, v in counts.items() if v == 2):
        i = labs.index(lab)
        j = labs.index(lab, i + 1)
        if a.shape[i] != a.shape[j]:
            raise ValueError(
                f"trace label {lab} has mismatched dimensions "
                f"{a.shape[i]} and {a.shape[j]}")
        a = np.trace(a, axis1=i, axis2=j)
        del labs[j], labs[i]
    return a, labs


def pairwise_contract(a, la: Sequence[int], b, lb: Sequence[int]
                      ) -> tuple[np.ndarray, list[int]]:
    """Contract two trace-free tensors over all labels they share.

    The result's labels are a's survivors followed by b's survivors; an
    empty intersection gives the outer product.
    """
    a = _as_operand(a)
    b = _as_operand(b)
    la, lb = list(la), list(lb)
    if a.ndim != len(la) or b.ndim != len(lb):
        raise ValueError("label list length must match tensor order")
    shared = [l for l in la if l in lb]
    ia = [la.index(l) for l in shared]
    ib = [lb.index(l) for l in shared]
    for l, i, j in zip(shared, ia, ib):
        if a.shape[i] != b.shape[j]:
            raise ValueError(
                f"label {l} has dimension {a.shape[i]} on one tensor "
                f"and {b.shape[j]} on the other")
    out = np.tensordot(a, b, axes=(ia, ib))
    labels = [l for l in la if l not in shared] + [l for l in lb if l not in shared]
    return out, labels


def _check_structure(tensors, labels):
    if len(tensors) != len(labels):
        raise ValueError(f"{len(tensors)} tensors but {len(labels)} label lists")
    counts: dict[int, int] = {}
    for t, labs in zip(tensors, labels):
        if t.ndim != len(labs):
            raise ValueError(
                f"tensor with {t.ndim} axes has {len(labs)} labels")
        for lab in labs:
            if lab == 0:
                raise ValueError("0 is not a valid label")
            counts[lab] = counts.get(lab, 0) + 1
    for lab, cnt in counts.items():
        if lab > 0 and cnt != 2:
            raise ValueError(f"internal label {lab} appears {cnt} times, need 2")
        if lab < 0 and cnt != 1:
            raise ValueError(f"open label {lab} appears {cnt} times, need 1")
    opens = sorted(-lab for lab in counts if lab < 0)
    if opens != list(range(1, len(opens) + 1)):
        raise ValueError(
            f"open labels must be contiguous -1..-{len(opens)}, "
            f"got {sorted(-o for o in opens)}")
    dims: dict[int, int] = {}
    for t, labs in zip(tensors, labels):
        for ax, lab in enumerate(labs):
            if lab in dims and dims[lab] != t.shape[ax]:
                raise ValueError(
                    f"label {lab} has inconsistent dimensions "
                    f"{dims[lab]} and {t.shape[ax]}")
            dims[lab] = t.shape[ax]


def ncon_execute(tensors: Sequence, labels: Sequence[Sequence[int]],
                 order: Optional[Sequence[int]] = None) -> np.ndarray:
    """Contract a labeled network; returns a 0-d array for closed networks.

    ``order`` must cover every positive label that survives the initial
    traces (default: ascending).  Labels already consumed by an earlier
    step - both hosts merged, or traced away - are skipped.
    """
    ops = [_as_operand(t) for t in tensors]
    _check_structure(ops, labels)

    live: list[tuple[np.ndarray, list[int], int]] = []  # (tensor, labels, min position)
    for pos, (t, labs) in enumerate(zip(ops, labels)):
        t2, labs2 = partial_trace(t, labs)
        live.append((t2, labs2, pos))

    all_pos = {lab for labs in labels for lab in labs if lab > 0}
    remaining = {lab for _, labs, _ in live for lab in labs if lab > 0}
    if order is None:
        seq = sorted(remaining)
    else:
        seq = list(order)
        if len(set(seq)) != len(seq):
            raise ValueError("contraction order contains duplicates")
        stray = set(seq) - all_pos
        if stray:
            raise ValueError(f"order names unknown labels {sorted(stray)}")
        missing = remaining - set(seq)
        if missing:
            raise ValueError(
                f"order does not cover positive labels {sorted(missing)}")

    for lab in seq:
        holders = [k for k, (_, labs, _) in enumerate(live) if lab in labs]
        if not holders:
            continue  # consumed implicitly by an earlier step
        i, j = holders  # structure check guarantees exactly two now
        t, labs = pairwise_contract(live[i][0], live[i][1],
                                    live[j][0], live[j][1])
        live[i] = (t, labs, min(live[i][2], live[j][2]))
        del live[j]

    live.sort(key=lambda item: item[2])
    t, labs, _ = live[0]
    for other, olabs, _ in live[1:]:
        t, labs = pairwise_contract(t, labs, other, olabs)

    if labs:
        perm = [labs.index(l) for l in sorted(labs, reverse=True)]
        t = np.transpose(t, perm)
    return t
