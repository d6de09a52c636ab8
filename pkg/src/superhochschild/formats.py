"""JSON file formats for algebras and bimodules.

Algebra document::

    {"name": "clifford1", "field": "Q",
     "basis": [{"label": "1", "parity": 0}, {"label": "ε", "parity": 1}],
     "unit": ["1", "0"],
     "products": [{"i": 1, "j": 1, "terms": [{"k": 0, "coeff": "1"}]}, ...]}

Bimodule documents carry ``left_algebra`` / ``right_algebra`` names and
``left_action`` (``i`` = algebra index, ``j`` = module index) and
``right_action`` (``i`` = module index, ``j`` = algebra index) tables in the
same sparse format.  Coefficients are exact strings (``"3"``, ``"-1/2"``);
floats are rejected.  A file holds one document or a list of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Mapping

from .bimod import GradedBimodule
from .builders import MoritaContext
from .exactlin import Field, parse_exact, parse_field
from .superalg import SuperAlgebra

__all__ = [
    "FormatError",
    "Workspace",
    "algebra_to_doc",
    "bimodule_to_doc",
    "algebra_from_doc",
    "bimodule_from_doc",
    "context_to_docs",
    "dumps",
    "load_paths",
    "load_text",
]


class FormatError(ValueError):
    """Malformed input document."""


def _coeff_str(field: Field, c) -> str:
    return field.format(c)


def _table_to_doc(table: Mapping[tuple[int, int], Mapping[int, object]], field: Field) -> list[dict]:
    return [{"i": i, "j": j, "terms": [{"k": k, "coeff": _coeff_str(field, c)} for k, c in sorted(t.items())]}
            for (i, j), t in sorted(table.items())]


def _basis_doc(labels, parities) -> list[dict]:
    return [{"label": lab, "parity": int(p)} for lab, p in zip(labels, parities)]


def algebra_to_doc(A: SuperAlgebra) -> dict:
    return {
        "name": A.name,
        "field": A.field.tag,
        "basis": _basis_doc(A.labels, A.parities),
        "unit": [_coeff_str(A.field, A.unit.get(i, 0)) for i in range(A.dim)],
        "products": _table_to_doc(A.products, A.field),
    }


def bimodule_to_doc(M: GradedBimodule) -> dict:
    return {
        "name": M.name,
        "field": M.field.tag,
        "left_algebra": M.left.name,
        "right_algebra": M.right.name,
        "basis": _basis_doc(M.labels, M.parities),
        "left_action": _table_to_doc(M.left_action, M.field),
        "right_action": _table_to_doc(M.right_action, M.field),
    }


def context_to_docs(ctx: MoritaContext) -> list[dict]:
    docs, seen = [], set()
    for obj in (ctx.A, ctx.B, ctx.P, ctx.Q):
        if obj.name in seen:
            continue
        seen.add(obj.name)
        docs.append(algebra_to_doc(obj) if isinstance(obj, SuperAlgebra) else bimodule_to_doc(obj))
    return docs


def dumps(docs) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(docs, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# parsing ---------------------------------------------------------------

def _need(doc: Mapping, key: str, kind: type | tuple):
    if key not in doc:
        raise FormatError(f"missing key {key!r} in {doc.get('name', '<unnamed>')!r}")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise FormatError(f"key {key!r} has the wrong type")
    return val


def _coeff(raw, field: Field):
    if isinstance(raw, bool) or isinstance(raw, float):
        raise FormatError(f"inexact coefficient {raw!r}; write it as a string like \"1/2\"")
    if isinstance(raw, int):
        return field(raw)
    if not isinstance(raw, str):
        raise FormatError(f"bad coefficient {raw!r}")
    try:
        return field(parse_exact(raw))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from None


def _index(raw, bound: int, what: str) -> int:
    if not isinstance(raw, int) or isinstance(raw, bool) or not 0 <= raw < bound:
        raise FormatError(f"{what} index {raw!r} out of range 0..{bound - 1}")
    return raw


def _basis(doc) -> tuple[list[str], list[int]]:
    labels, parities = [], []
    for entry in _need(doc, "basis", list):
        if not isinstance(entry, dict):
            raise FormatError("basis entries must be objects")
        labels.append(str(_need(entry, "label", str)))
        par = _need(entry, "parity", int)
        if par not in (0, 1):
            raise FormatError(f"parity must be 0 or 1, got {par!r}")
        parities.append(par)
    return labels, parities


def _table(raw, n_i: int, n_j: int, n_k: int, field: Field, what: str) -> dict:
    table = {}
    if not isinstance(raw, list):
        raise FormatError(f"{what} must be a list")
    for entry in raw:
        if not isinstance(entry, dict):
            raise FormatError(f"{what} entries must be objects")
        i = _index(_need(entry, "i", int), n_i, f"{what} i")
        j = _index(_need(entry, "j", int), n_j, f"{what} j")
        if (i, j) in table:
            raise FormatError(f"duplicate {what} entry ({i}, {j})")
        terms = {}
        for t in _need(entry, "terms", list):
            k = _index(_need(t, "k", int), n_k, f"{what} k")
            if k in terms:
                raise FormatError(f"duplicate term k={k} in {what} ({i}, {j})")
            terms[k] = _coeff(t.get("coeff"), field)
        table[(i, j)] = terms
    return table


def _field(doc, override: Field | None) -> Field:
    try:
        f = parse_field(_need(doc, "field", str))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return f if override is None else override


def algebra_from_doc(doc: Mapping, field: Field | None = None) -> SuperAlgebra:
    f = _field(doc, field)
    labels, parities = _basis(doc)
    n = len(labels)
    unit = [_coeff(c, f) for c in _need(doc, "unit", list)]
    if len(unit) != n:
        raise FormatError(f"unit has {len(unit)} entries for {n} basis elements")
    products = _table(doc.get("products", []), n, n, n, f, "products")
    return SuperAlgebra(str(_need(doc, "name", str)), labels, parities, unit, products, f)


def bimodule_from_doc(doc: Mapping, algebras: Mapping[str, SuperAlgebra], field: Field | None = None) -> GradedBimodule:
    f = _field(doc, field)
    refs = []
    for key in ("left_algebra", "right_algebra"):
        ref = _need(doc, key, str)
        if ref not in algebras:
            raise FormatError(f"{key} {ref!r} is not loaded in this invocation")
        refs.append(algebras[ref])
    left, right = refs
    labels, parities = _basis(doc)
    n = len(labels)
    la = _table(doc.get("left_action", []), left.dim, n, n, f, "left_action")
    ra = _table(doc.get("right_action", []), n, right.dim, n, f, "right_action")
    return GradedBimodule(str(_need(doc, "name", str)), left, right, labels, parities, la, ra)


@dataclass
class Workspace:
    """Everything loaded in one invocation, in file order."""

    algebras: dict[str, SuperAlgebra] = dc_field(default_factory=dict)
    bimodules: dict[str, GradedBimodule] = dc_field(default_factory=dict)

    def add_docs(self, docs: list, field: Field | None = None):
        for doc in docs:
            if not isinstance(doc, dict):
                raise FormatError("documents must be JSON objects")
            if "left_algebra" not in doc:
                A = algebra_from_doc(doc, field)
                if A.name in self.algebras or A.name in self.bimodules:
                    raise FormatError(f"duplicate name {A.name!r}")
                self.algebras[A.name] = A
        for doc in docs:
            if "left_algebra" in doc:
                M = bimodule_from_doc(doc, self.algebras, field)
                if M.name in self.algebras or M.name in self.bimodules:
                    raise FormatError(f"duplicate name {M.name!r}")
                self.bimodules[M.name] = M

    def objects(self):
        return list(self.algebras.values()) + list(self.bimodules.values())


def _parse_json(text: str, origin: str) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{origin}: invalid JSON ({exc})") from None
    return data if isinstance(data, list) else [data]


def load_text(text: str, field: Field | None = None, origin: str = "<string>") -> Workspace:
    ws = Workspace()
    ws.add_docs(_parse_json(text, origin), field)
    return ws


def load_paths(paths, field: Field | None = None, workspace: Workspace | None = None) -> Workspace:
    """Load several files; algebras from every file are visible to every bimodule."""
    docs = []
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except OSError as exc:
            raise FormatError(f"cannot read {p}: {exc.strerror}") from None
        docs.extend(_parse_json(text, str(p)))
    ws = workspace if workspace is not None else Workspace()
    ws.add_docs(docs, field)
    return ws
