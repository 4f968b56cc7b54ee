"""JSON documents for quivers, representations, pencils and ADHM data.

Scalars are strings (``"5"``, ``"3/7"``, ``"4 mod 7"``); bare JSON integers
are accepted on input.  Matrices are lists of rows.  Document shapes::

    quiver   {"vertices": n, "arrows": [{"id", "src", "dst"}, ...]}
    rep      {"quiver": <quiver or builtin name>, "field", "dims", "maps": {id: rows}}
             optional "kind": "plain" | "doubled" | "doubled-framed";
             doubled kinds give the base quiver, "doubled-framed" adds "framing_dims"
    pencil   {"field": "Q", "n", "m", "b0", "b1"}
    adhm     {"field", "n", "r", "B1", "B2", "i", "j"}

Builtin quiver names: ``jordan``, ``A<n>``, ``K<n>``.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .adhm import AdhmData
from .errors import QuivermodError
from .kronecker import KroneckerPencil
from .linalg import QQ, Field, Matrix, field_from_name
from .nakajima import DoubledFramedRepresentation, DoubledRepresentation, double_quiver, framed_double_quiver
from .quiver import Arrow, Quiver, Representation

__all__ = [
    "SchemaError", "document_kind", "validate_schema", "loads", "dumps",
    "quiver_to_json", "quiver_from_json", "matrix_to_json", "rep_to_json", "rep_from_json",
    "pencil_to_json", "pencil_from_json", "adhm_to_json", "adhm_from_json", "builtin_quiver",
]

REP_KINDS = ("plain", "doubled", "doubled-framed")


class SchemaError(QuivermodError):
    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def builtin_quiver(name: str) -> Quiver:
    name = name.strip()
    if name.lower() == "jordan":
        return Quiver.jordan()
    m = re.fullmatch(r"([AK])(\d+)", name)
    if m and int(m.group(2)) >= 1:
        k = int(m.group(2))
        return Quiver.a_n(k) if m.group(1) == "A" else Quiver.kronecker(k)
    raise SchemaError(f"$.quiver: unknown builtin quiver {name!r}")


# ---------------------------------------------------------------- validation


class _Checker:
    def __init__(self):
        self.errors: list[str] = []

    def fail(self, path: str, msg: str):
        self.errors.append(f"{path}: {msg}")

    def require(self, doc, key, path, kinds):
        if not isinstance(doc, dict) or key not in doc:
            self.fail(path, f"missing field {key!r}")
            return None
        value = doc[key]
        if not _is_kind(value, kinds):
            self.fail(f"{path}.{key}", f"expected {kinds}")
            return None
        return value

    def count(self, doc, key, path):
        value = self.require(doc, key, path, "int")
        if value is not None and value < 0:
            self.fail(f"{path}.{key}", "must be non-negative")
            return None
        return value

    def field(self, doc, path) -> Field | None:
        value = self.require(doc, "field", path, "str")
        if value is None:
            return None
        try:
            return field_from_name(value)
        except QuivermodError as exc:
            self.fail(f"{path}.field", str(exc))
            return None

    def matrix(self, rows, path, shape, field: Field | None, label: str):
        r, c = shape
        if not isinstance(rows, list):
            self.fail(path, f"{label}: expected a list of rows")
            return
        if len(rows) != r:
            self.fail(path, f"{label}: expected {r} rows, got {len(rows)}")
            return
        for k, row in enumerate(rows):
            if not isinstance(row, list):
                self.fail(f"{path}[{k}]", f"{label}: expected a list")
                continue
            if len(row) != c:
                self.fail(f"{path}[{k}]", f"{label}: row length {len(row)}, expected {c}")
                continue
            for t, x in enumerate(row):
                if not _is_kind(x, "int") and not isinstance(x, str):
                    self.fail(f"{path}[{k}][{t}]", f"{label}: scalar must be a string or integer")
                elif field is not None:
                    try:
                        field.parse(x)
                    except (QuivermodError, ValueError) as exc:
                        self.fail(f"{path}[{k}][{t}]", f"{label}: {exc}")


def _is_kind(value, kinds: str) -> bool:
    ok = {
        "int": isinstance(value, int) and not isinstance(value, bool),
        "str": isinstance(value, str),
        "list": isinstance(value, list),
        "dict": isinstance(value, dict),
    }
    return any(ok[k] for k in kinds.split("|"))


def _check_quiver(ch: _Checker, doc, path: str) -> Quiver | None:
    if isinstance(doc, str):
        try:
            return builtin_quiver(doc)
        except SchemaError as exc:
            ch.errors.extend(exc.diagnostics)
            return None
    if not isinstance(doc, dict):
        ch.fail(path, "expected a quiver object or builtin name")
        return None
    n = ch.count(doc, "vertices", path)
    arrows = ch.require(doc, "arrows", path, "list")
    if n is None or arrows is None:
        return None
    good = []
    seen = set()
    for k, a in enumerate(arrows):
        ap = f"{path}.arrows[{k}]"
        aid = ch.require(a, "id", ap, "str")
        ends = []
        for key in ("src", "dst"):
            e = ch.require(a, key, ap, "int")
            if e is not None and not 0 <= e < n:
                ch.fail(f"{ap}.{key}", f"{key} out of range: vertex {e} of a {n}-vertex quiver")
                e = None
            ends.append(e)
        if aid is not None and aid in seen:
            ch.fail(f"{ap}.id", f"duplicate arrow id {aid!r}")
            aid = None
        if aid is not None and None not in ends:
            seen.add(aid)
            good.append(Arrow(aid, ends[0], ends[1]))
    if len(good) != len(arrows):
        return None
    return Quiver(n, good)


def _check_dims(ch: _Checker, doc, key, path, length) -> tuple | None:
    dims = ch.require(doc, key, path, "list")
    if dims is None:
        return None
    if len(dims) != length:
        ch.fail(f"{path}.{key}", f"expected {length} entries, got {len(dims)}")
        return None
    if not all(_is_kind(d, "int") and d >= 0 for d in dims):
        ch.fail(f"{path}.{key}", "entries must be non-negative integers")
        return None
    return tuple(dims)


def _check_rep(ch: _Checker, doc, path: str):
    kind = doc.get("kind", "plain")
    if kind not in REP_KINDS:
        ch.fail(f"{path}.kind", f"unknown kind {kind!r}; expected one of {', '.join(REP_KINDS)}")
        return
    if "quiver" not in doc:
        ch.fail(path, "missing field 'quiver'")
        return
    base = _check_quiver(ch, doc["quiver"], f"{path}.quiver")
    field = ch.field(doc, path)
    if base is None:
        return
    dims = _check_dims(ch, doc, "dims", path, base.vertex_count)
    framing = None
    if kind == "doubled-framed":
        framing = _check_dims(ch, doc, "framing_dims", path, base.vertex_count)
        if framing is None:
            return
    maps = ch.require(doc, "maps", path, "dict")
    if dims is None or maps is None:
        return
    if kind == "plain":
        q = base
    else:
        q = double_quiver(base) if kind == "doubled" else framed_double_quiver(base)
    all_dims = dims + (framing or ())
    for a in q.arrows:
        if a.id not in maps:
            far = max(a.source, a.target)
            if far >= base.vertex_count and all_dims[far] == 0:
                continue  # framing maps at unframed vertices may be omitted
            ch.fail(f"{path}.maps", f"missing map for arrow {a.id!r}")
            continue
        shape = (all_dims[a.target], all_dims[a.source])
        ch.matrix(maps[a.id], f"{path}.maps.{a.id}", shape, field, f"arrow {a.id!r}")
    extra = sorted(set(maps) - set(q.arrow_ids))
    for key in extra:
        ch.fail(f"{path}.maps.{key}", f"no arrow {key!r} in the quiver")


def _check_pencil(ch: _Checker, doc, path: str):
    field = ch.field(doc, path)
    if field is not None and field != QQ:
        ch.fail(f"{path}.field", "pencils are over Q")
    n = ch.count(doc, "n", path)
    m = ch.count(doc, "m", path)
    for key in ("b0", "b1"):
        rows = ch.require(doc, key, path, "list")
        if rows is not None and n is not None and m is not None:
            ch.matrix(rows, f"{path}.{key}", (n, m), field, key)


def _check_adhm(ch: _Checker, doc, path: str):
    field = ch.field(doc, path)
    n = ch.count(doc, "n", path)
    r = ch.count(doc, "r", path)
    if n is None or r is None:
        return
    shapes = {"B1": (n, n), "B2": (n, n), "i": (n, r), "j": (r, n)}
    for key, shape in shapes.items():
        rows = ch.require(doc, key, path, "list")
        if rows is not None:
            ch.matrix(rows, f"{path}.{key}", shape, field, key)


def document_kind(doc) -> str:
    if not isinstance(doc, dict):
        raise SchemaError("$: expected a JSON object")
    if "type" in doc:
        return doc["type"]
    if "vertices" in doc:
        return "quiver"
    if "maps" in doc:
        return "rep"
    if "b0" in doc or "b1" in doc:
        return "pencil"
    if "B1" in doc or "B2" in doc:
        return "adhm"
    raise SchemaError("$: cannot tell the document type; add a 'type' field")


def validate_schema(doc: Any, expected: str | None = None) -> list[str]:
    """Diagnostics of the form ``"<json path>: <message>"``; empty when the document is well formed."""
    try:
        kind = document_kind(doc)
    except SchemaError as exc:
        return exc.diagnostics
    if expected is not None and kind != expected:
        return [f"$: expected a {expected} document, got {kind}"]
    ch = _Checker()
    if kind == "quiver":
        _check_quiver(ch, doc, "$")
    elif kind == "rep":
        _check_rep(ch, doc, "$")
    elif kind == "pencil":
        _check_pencil(ch, doc, "$")
    elif kind == "adhm":
        _check_adhm(ch, doc, "$")
    else:
        ch.fail("$.type", f"unknown document type {kind!r}")
    return ch.errors


def _validated(doc, expected: str):
    errors = validate_schema(doc, expected)
    if errors:
        raise SchemaError(errors)


# ---------------------------------------------------------------- conversion


def matrix_to_json(m: Matrix) -> list:
    return [[m.field.format(x) for x in row] for row in m.entries]


def _matrix(field: Field, rows, shape) -> Matrix:
    return Matrix(field, [[field.parse(x) for x in row] for row in rows], *shape)


def quiver_to_json(q: Quiver) -> dict:
    return {"vertices": q.vertex_count,
            "arrows": [{"id": a.id, "src": a.source, "dst": a.target} for a in q.arrows]}


def quiver_from_json(doc) -> Quiver:
    if isinstance(doc, str):
        return builtin_quiver(doc)
    ch = _Checker()
    q = _check_quiver(ch, doc, "$")
    if ch.errors:
        raise SchemaError(ch.errors)
    return q


def rep_to_json(v) -> dict:
    if isinstance(v, DoubledFramedRepresentation):
        doc = {"kind": "doubled-framed", "quiver": quiver_to_json(v.base), "dims": list(v.dims),
               "framing_dims": list(v.framing_dims)}
        rep = v.rep
    elif isinstance(v, DoubledRepresentation):
        doc = {"kind": "doubled", "quiver": quiver_to_json(v.base), "dims": list(v.dims)}
        rep = v.rep
    else:
        doc = {"quiver": quiver_to_json(v.quiver), "dims": list(v.dims)}
        rep = v
    doc["field"] = rep.field.name
    doc["maps"] = {k: matrix_to_json(m) for k, m in rep.maps.items()}
    return doc


def rep_from_json(doc):
    """A ``Representation``, ``DoubledRepresentation`` or ``DoubledFramedRepresentation``."""
    _validated(doc, "rep")
    kind = doc.get("kind", "plain")
    base = quiver_from_json(doc["quiver"])
    field = field_from_name(doc["field"])
    dims = tuple(doc["dims"])
    if kind == "doubled-framed":
        framing = tuple(doc["framing_dims"])
        q = framed_double_quiver(base)
        all_dims = dims + framing
    else:
        q = double_quiver(base) if kind == "doubled" else base
        all_dims = dims
    maps = {}
    for a in q.arrows:
        if a.id in doc["maps"]:
            maps[a.id] = _matrix(field, doc["maps"][a.id], (all_dims[a.target], all_dims[a.source]))
    if kind == "doubled-framed":
        return DoubledFramedRepresentation.build(base, field, dims, framing, maps)
    if kind == "doubled":
        return DoubledRepresentation.build(base, field, dims, maps)
    return Representation(base, field, dims, maps)


def pencil_to_json(p: KroneckerPencil) -> dict:
    return {"field": "Q", "n": p.n, "m": p.m, "b0": matrix_to_json(p.b0), "b1": matrix_to_json(p.b1)}


def pencil_from_json(doc) -> KroneckerPencil:
    _validated(doc, "pencil")
    shape = (doc["n"], doc["m"])
    return KroneckerPencil(_matrix(QQ, doc["b0"], shape), _matrix(QQ, doc["b1"], shape))


def adhm_to_json(d: AdhmData) -> dict:
    return {"field": d.field.name, "n": d.n, "r": d.r, "B1": matrix_to_json(d.B1),
            "B2": matrix_to_json(d.B2), "i": matrix_to_json(d.i), "j": matrix_to_json(d.j)}


def adhm_from_json(doc) -> AdhmData:
    _validated(doc, "adhm")
    field = field_from_name(doc["field"])
    n, r = doc["n"], doc["r"]
    return AdhmData(field, n, r, _matrix(field, doc["B1"], (n, n)), _matrix(field, doc["B2"], (n, n)),
                    _matrix(field, doc["i"], (n, r)), _matrix(field, doc["j"], (r, n)))


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def dumps(obj) -> str:
    """Canonical form: sorted keys, two-space indent."""
    return json.dumps(obj, sort_keys=True, indent=2)
