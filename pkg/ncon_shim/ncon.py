"""Minimal ncon-convention network contractor for generated Python code.

One auditable file, numpy only.  Labels follow the usual convention:
positive integers are summed indices (each appears exactly twice, possibly
twice on one tensor for a partial trace), negative integers are open
indices of the result, ordered -1, -2, ...  ``order`` lists positive labels
in contraction sequence; omitted, ascending order is used.  Labels already
consumed by an earlier step (a trace, or a pair merged through another
shared label) are skipped; any label shared by a chosen pair is contracted
in the same step.  Disconnected remainders are joined by outer products.
"""

import numpy as np

__all__ = ["ncon"]


def _operand(t):
    a = np.asarray(t)
    if np.iscomplexobj(a):
        return a.astype(np.complex128, copy=False)
    return a.astype(np.float64, copy=False)


def _trace(a, labs):
    labs = list(labs)
    seen = {}
    for lab in labs:
        seen[lab] = seen.get(lab, 0) + 1
    for lab, count in sorted(seen.items()):
        if count == 1:
            continue
        if count > 2:
            raise ValueError(f"label {lab} appears {count} times on one tensor")
        i = labs.index(lab)
        j = labs.index(lab, i + 1)
        if a.shape[i] != a.shape[j]:
            raise ValueError(f"trace label {lab} has unequal dimensions")
        a = np.trace(a, axis1=i, axis2=j)
        del labs[j], labs[i]
    return a, labs


def _contract_pair(a, la, b, lb):
    shared = [l for l in la if l in lb]
    ia = [la.index(l) for l in shared]
    ib = [lb.index(l) for l in shared]
    for l, i, j in zip(shared, ia, ib):
        if a.shape[i] != b.shape[j]:
            raise ValueError(f"label {l} has mismatched dimensions "
                             f"{a.shape[i]} and {b.shape[j]}")
    out = np.tensordot(a, b, axes=(ia, ib))
    labs = [l for l in la if l not in shared] + [l for l in lb if l not in shared]
    return out, labs


def ncon(tensors, labels, order=None):
    """Contract ``tensors`` according to per-tensor ``labels``."""
    if len(tensors) != len(labels):
        raise ValueError("one label list per tensor is required")
    ops = []
    for t, labs in zip(tensors, labels):
        a = _operand(t)
        if a.ndim != len(labs):
            raise ValueError(f"tensor of order {a.ndim} has {len(labs)} labels")
        ops.append((a, list(labs)))

    counts = {}
    for _, labs in ops:
        for lab in labs:
            if lab == 0:
                raise ValueError("0 is not a valid label")
            counts[lab] = counts.get(lab, 0) + 1
    for lab, count in counts.items():
        if lab > 0 and count != 2:
            raise ValueError(f"summed label {lab} appears {count} times")
        if lab < 0 and count != 1:
            raise ValueError(f"open label {lab} appears {count} times")
    opens = sorted(-lab for lab in counts if lab < 0)
    if opens != list(range(1, len(opens) + 1)):
        raise ValueError(f"open labels must be contiguous -1..-{len(opens)}")

    live = []
    for pos, (a, labs) in enumerate(ops):
        a, labs = _trace(a, labs)
        live.append((a, labs, pos))

    remaining = {l for _, labs, _ in live for l in labs if l > 0}
    if order is None:
        seq = sorted(remaining)
    else:
        seq = list(order)
        if len(set(seq)) != len(seq):
            raise ValueError("contraction order has duplicate labels")
        if set(seq) - set(counts):
            raise ValueError("contraction order names unknown labels")
        if remaining - set(seq):
            missing = sorted(remaining - set(seq))
            raise ValueError(f"contraction order misses labels {missing}")

    for lab in seq:
        holders = [k for k, (_, labs, _) in enumerate(live) if lab in labs]
        if not holders:
            continue
        i, j = holders
        a, labs = _contract_pair(live[i][0], live[i][1], live[j][0], live[j][1])
        live[i] = (a, labs, min(live[i][2], live[j][2]))
        del live[j]

    live.sort(key=lambda item: item[2])
    a, labs, _ = live[0]
    for b, lb, _ in live[1:]:
        a, labs = _contract_pair(a, labs, b, lb)

    if labs:
        a = np.transpose(a, [labs.index(l) for l in sorted(labs, reverse=True)])
    return a
