"""Project file format: a small, human-diffable JSON schema (``.tnp``).

Canonical serialization (sorted keys, two-space indent, trailing newline)
makes ``save`` a pure function of the data model, and unknown fields found
anywhere in a document are carried through untouched so editor-only state
survives a load/save round trip.

Top-level document::

    {
      "format_version": 1,
      "index_types": [{"id": 1, "name": "chi", "default_dim": 4,
                       "color": [40, 90, 200], "thickness": 1.5}],
      "tensors":     [{"id": 1, "name": "A", "anchor_count": 3,
                       "network": 1, "geometry": {...}}],
      "edges":       [{"id": 1, "index_type": 1, "dim_override": 8,
                       "end_a": {"tensor": 1, "anchor": 3},
                       "end_b": {"tensor": 2, "anchor": 1}}]
    }

An open edge uses ``"end_b": {"plaque": 2}``.  ``name``, ``network``,
``dim_override``, ``geometry``, ``color`` and ``thickness`` are optional.
"""

from __future__ import annotations

import json
from typing import Any, Union

from .model import (
    MAX_INDEX_TYPES,
    MAX_NETWORKS,
    MAX_PLAQUE,
    AnchorRef,
    Edge,
    IndexType,
    OpenEnd,
    Project,
    TensorInstance,
)

FORMAT_VERSION = 1


class ProjectParseError(ValueError):
    """The file is not well-formed JSON."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


class ProjectSchemaError(ValueError):
    """The document parsed but violates the project schema."""

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = tuple(problems)
        lines = "; ".join(f"{path}: {msg}" for path, msg in problems)
        super().__init__(lines)


class _Checker:
    def __init__(self):
        self.problems: list[tuple[str, str]] = []

    def fail(self, path: str, msg: str):
        self.problems.append((path, msg))

    def expect(self, cond: bool, path: str, msg: str) -> bool:
        if not cond:
            self.fail(path, msg)
        return cond

    def require_int(self, obj: dict, key: str, path: str, lo=None, hi=None,
                    optional=False) -> Any:
        if key not in obj:
            if not optional:
                self.fail(f"{path}.{key}", "missing required field")
            return None
        v = obj[key]
        if v is None and optional:
            return None
        if not isinstance(v, int) or isinstance(v, bool):
            self.fail(f"{path}.{key}", f"expected an integer, got {v!r}")
            return None
        if lo is not None and v < lo:
            self.fail(f"{path}.{key}", f"must be >= {lo}, got {v}")
            return None
        if hi is not None and v > hi:
            self.fail(f"{path}.{key}", f"must be <= {hi}, got {v}")
            return None
        return v


def _split_extra(obj: dict, known: tuple[str, ...]) -> dict:
    return {k: v for k, v in obj.items() if k not in known}


def loads_project(text: Union[str, bytes]) -> Project:
    """Parse and schema-check a project document.

    Raises ProjectParseError for malformed JSON and ProjectSchemaError (with
    every problem found, path-tagged) for structural violations.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProjectParseError(exc.msg, exc.pos) from exc

    c = _Checker()
    if not isinstance(doc, dict):
        raise ProjectSchemaError([("$", "top level must be an object")])

    version = c.require_int(doc, "format_version", "$")
    if version is not None and version != FORMAT_VERSION:
        c.fail("$.format_version", f"unknown format version {version} "
                                   f"(this build reads version {FORMAT_VERSION})")

    index_types = _load_index_types(doc, c)
    tensors = _load_tensors(doc, c)
    edges = _load_edges(doc, c, tensors, index_types)

    if c.problems:
        raise ProjectSchemaError(c.problems)

    return Project(
        index_types=tuple(index_types),
        tensors=tuple(tensors),
        edges=tuple(edges),
        format_version=version,
        extra=_split_extra(doc, ("format_version", "index_types", "tensors", "edges")),
    )


def _load_index_types(doc, c) -> list[IndexType]:
    out = []
    raw = doc.get("index_types")
    if not c.expect(isinstance(raw, list), "$.index_types", "expected a list"):
        return out
    if len(raw) > MAX_INDEX_TYPES:
        c.fail("$.index_types", f"at most {MAX_INDEX_TYPES} index types allowed")
    seen = set()
    for i, item in enumerate(raw):
        path = f"$.index_types[{i}]"
        if not c.expect(isinstance(item, dict), path, "expected an object"):
            continue
        tid = c.require_int(item, "id", path, lo=1, hi=MAX_INDEX_TYPES)
        name = item.get("name")
        if not c.expect(isinstance(name, str) and bool(name), f"{path}.name",
                        "expected a non-empty string"):
            continue
        dim = c.require_int(item, "default_dim", path, lo=1)
        if tid is None or dim is None:
            continue
        if tid in seen:
            c.fail(f"{path}.id", f"duplicate index type id {tid}")
            continue
        seen.add(tid)
        color = item.get("color", [0, 0, 0])
        if not (isinstance(color, list) and len(color) == 3
                and all(isinstance(v, int) and 0 <= v <= 255 for v in color)):
            c.fail(f"{path}.color", "expected a [r, g, b] triple of 0..255")
            color = [0, 0, 0]
        thickness = item.get("thickness", 1.0)
        if not isinstance(thickness, (int, float)) or thickness <= 0:
            c.fail(f"{path}.thickness", "expected a positive number")
            thickness = 1.0
        out.append(IndexType(
            id=tid, name=name, default_dim=dim, color=tuple(color),
            thickness=float(thickness),
            extra=_split_extra(item, ("id", "name", "default_dim", "color", "thickness")),
        ))
    return out


def _load_tensors(doc, c) -> list[TensorInstance]:
    out = []
    raw = doc.get("tensors")
    if not c.expect(isinstance(raw, list), "$.tensors", "expected a list"):
        return out
    seen = set()
    for i, item in enumerate(raw):
        path = f"$.tensors[{i}]"
        if not c.expect(isinstance(item, dict), path, "expected an object"):
            continue
        tid = c.require_int(item, "id", path)
        anchors = c.require_int(item, "anchor_count", path, lo=1)
        network = c.require_int(item, "network", path, lo=1, hi=MAX_NETWORKS,
                                optional=True)
        if tid is None or anchors is None:
            continue
        if tid in seen:
            c.fail(f"{path}.id", f"duplicate tensor id {tid}")
            continue
        seen.add(tid)
        name = item.get("name")
        if name is not None and not isinstance(name, str):
            c.fail(f"{path}.name", f"expected a string or null, got {name!r}")
            name = None
        geometry = item.get("geometry", {})
        if not isinstance(geometry, dict):
            c.fail(f"{path}.geometry", "expected an object")
            geometry = {}
        out.append(TensorInstance(
            id=tid, anchor_count=anchors, name=name, network=network,
            geometry=geometry,
            extra=_split_extra(item, ("id", "anchor_count", "name", "network", "geometry")),
        ))
    return out


def _load_edges(doc, c, tensors, index_types) -> list[Edge]:
    out = []
    raw = doc.get("edges")
    if not c.expect(isinstance(raw, list), "$.edges", "expected a list"):
        return out
    tensor_by_id = {t.id: t for t in tensors}
    type_ids = {it.id for it in index_types}
    seen = set()
    for i, item in enumerate(raw):
        path = f"$.edges[{i}]"
        if not c.expect(isinstance(item, dict), path, "expected an object"):
            continue
        eid = c.require_int(item, "id", path)
        type_id = c.require_int(item, "index_type", path)
        dim_override = c.require_int(item, "dim_override", path, lo=1, optional=True)
        if eid is None or type_id is None:
            continue
        if eid in seen:
            c.fail(f"{path}.id", f"duplicate edge id {eid}")
            continue
        seen.add(eid)
        if type_id not in type_ids:
            c.fail(f"{path}.index_type", f"index type {type_id} is not defined")
            continue
        end_a = _load_anchor_ref(item.get("end_a"), f"{path}.end_a", c, tensor_by_id)
        end_b = _load_end_b(item.get("end_b"), f"{path}.end_b", c, tensor_by_id)
        if end_a is None or end_b is None:
            continue
        geometry = item.get("geometry", {})
        if not isinstance(geometry, dict):
            c.fail(f"{path}.geometry", "expected an object")
            geometry = {}
        out.append(Edge(
            id=eid, index_type=type_id, end_a=end_a, end_b=end_b,
            dim_override=dim_override, geometry=geometry,
            extra=_split_extra(item, ("id", "index_type", "dim_override",
                                      "end_a", "end_b", "geometry")),
        ))
    return out


def _load_anchor_ref(obj, path, c, tensor_by_id):
    if not c.expect(isinstance(obj, dict), path, "expected an object"):
        return None
    tid = c.require_int(obj, "tensor", path)
    anchor = c.require_int(obj, "anchor", path, lo=1)
    if tid is None or anchor is None:
        return None
    t = tensor_by_id.get(tid)
    if t is None:
        c.fail(f"{path}.tensor", f"tensor {tid} is not defined")
        return None
    if anchor > t.anchor_count:
        c.fail(f"{path}.anchor",
               f"tensor {tid} has {t.anchor_count} anchors, got anchor {anchor}")
        return None
    return AnchorRef(tensor=tid, anchor=anchor)


def _load_end_b(obj, path, c, tensor_by_id):
    if isinstance(obj, dict) and "plaque" in obj:
        plaque = c.require_int(obj, "plaque", path, lo=1, hi=MAX_PLAQUE)
        if plaque is None:
            return None
        geometry = obj.get("geometry", {})
        if not isinstance(geometry, dict):
            c.fail(f"{path}.geometry", "expected an object")
            geometry = {}
        return OpenEnd(plaque=plaque, geometry=geometry)
    return _load_anchor_ref(obj, path, c, tensor_by_id)


def load_project(path) -> Project:
    with open(path, "rb") as fh:
        return loads_project(fh.read())


def _dump_index_type(it: IndexType) -> dict:
    d = {"id": it.id, "name": it.name, "default_dim": it.default_dim,
         "color": list(it.color), "thickness": it.thickness}
    d.update(it.extra)
    return d


def _dump_tensor(t: TensorInstance) -> dict:
    d: dict[str, Any] = {"id": t.id, "anchor_count": t.anchor_count}
    if t.name is not None:
        d["name"] = t.name
    if t.network is not None:
        d["network"] = t.network
    if t.geometry:
        d["geometry"] = t.geometry
    d.update(t.extra)
    return d


def _dump_edge(e: Edge) -> dict:
    d: dict[str, Any] = {
        "id": e.id, "index_type": e.index_type,
        "end_a": {"tensor": e.end_a.tensor, "anchor": e.end_a.anchor},
    }
    if isinstance(e.end_b, OpenEnd):
        end_b: dict[str, Any] = {"plaque": e.end_b.plaque}
        if e.end_b.geometry:
            end_b["geometry"] = e.end_b.geometry
        d["end_b"] = end_b
    else:
        d["end_b"] = {"tensor": e.end_b.tensor, "anchor": e.end_b.anchor}
    if e.dim_override is not None:
        d["dim_override"] = e.dim_override
    if e.geometry:
        d["geometry"] = e.geometry
    d.update(e.extra)
    return d


def dumps_project(project: Project) -> str:
    """Canonical serialization: load(dumps(p)) == p, byte-stable."""
    doc: dict[str, Any] = {
        "format_version": project.format_version,
        "index_types": [_dump_index_type(it) for it in project.index_types],
        "tensors": [_dump_tensor(t) for t in project.tensors],
        "edges": [_dump_edge(e) for e in project.edges],
    }
    doc.update(project.extra)
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_project(project: Project, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_project(project))
