"""Standalone random project documents (no compiler imports).

Builds documents straight against the published .tnp schema: every anchor
gets exactly one edge end, open plaques are numbered 1..m, dimensions ride
on per-edge overrides.
"""

import random


def random_project_doc(rng: random.Random, n: int, closed: bool,
                       max_anchor: int = 3, dim_lo: int = 2, dim_hi: int = 4):
    anchors = [rng.randint(1, max_anchor) for _ in range(n)]
    slots = [(t + 1, a + 1) for t in range(n) for a in range(anchors[t])]
    if closed and len(slots) % 2:
        anchors[0] += 1
        slots.append((1, anchors[0]))
    rng.shuffle(slots)

    if closed:
        n_open = 0
    else:
        feasible = [o for o in range(1, min(9, len(slots)) + 1)
                    if (len(slots) - o) % 2 == 0]
        n_open = rng.choice(feasible)
    open_slots = slots[:n_open]
    paired = slots[n_open:]

    edges = []
    eid = 0
    for k in range(0, len(paired), 2):
        eid += 1
        (t1, a1), (t2, a2) = paired[k], paired[k + 1]
        edges.append({"id": eid, "index_type": 1,
                      "dim_override": rng.randint(dim_lo, dim_hi),
                      "end_a": {"tensor": t1, "anchor": a1},
                      "end_b": {"tensor": t2, "anchor": a2}})
    for plaque, (t, a) in enumerate(open_slots, start=1):
        eid += 1
        edges.append({"id": eid, "index_type": 1,
                      "dim_override": rng.randint(dim_lo, dim_hi),
                      "end_a": {"tensor": t, "anchor": a},
                      "end_b": {"plaque": plaque}})

    return {
        "format_version": 1,
        "index_types": [{"id": 1, "name": "chi", "default_dim": 2}],
        "tensors": [{"id": t + 1, "anchor_count": anchors[t],
                     "name": f"T{t + 1}", "network": 1} for t in range(n)],
        "edges": edges,
    }


def tensor_shapes(doc):
    """Per-variable shapes implied by a project document."""
    by_id = {t["id"]: t for t in doc["tensors"]}
    defaults = {it["id"]: it["default_dim"] for it in doc["index_types"]}
    dims = {}
    for e in doc["edges"]:
        d = e.get("dim_override") or defaults[e["index_type"]]
        ends = [e["end_a"]]
        if "tensor" in e["end_b"]:
            ends.append(e["end_b"])
        for ref in ends:
            dims[(ref["tensor"], ref["anchor"])] = d
    shapes = {}
    for t in doc["tensors"]:
        name = t.get("name") or f"N{t['network']}_?"
        shape = tuple(dims[(t["id"], a)] for a in range(1, t["anchor_count"] + 1))
        prev = shapes.get(name)
        if prev is not None and prev != shape:
            raise AssertionError(f"copies of {name} disagree: {prev} vs {shape}")
        shapes[name] = shape
    return shapes
