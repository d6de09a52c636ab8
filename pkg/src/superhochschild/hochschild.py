"""The super Hochschild complex ``C_m(A, M) = M ⊗ A^{⊗m}`` and its homology.

Basis tensors ``m ⊗ a_1 ⊗ ... ⊗ a_m`` are indexed row-major, i.e. by
``m·dim(A)^m + Σ a_j·dim(A)^{m-j}``.  Faces:

* ``δ_0``  : ``m·a_1 ⊗ a_2 ⊗ ... ⊗ a_m``
* ``δ_i``  : ``m ⊗ ... ⊗ a_i a_{i+1} ⊗ ...``                 (0 < i < m)
* ``δ_m``  : ``(-1)^{|a_m|(|m|+|a_1|+...+|a_{m-1}|)} a_m·m ⊗ a_1 ⊗ ... ⊗ a_{m-1}``

and ``d = Σ (-1)^i δ_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Iterator

from .bimod import BalancedTensor, GradedBimodule, regular_bimodule, tensor_ground, tensor_over, validate_bimodule
from .builders import ground_field
from .exactlin import Field, SparseMatrix, compose, rank
from .superalg import SuperAlgebra, supercommutator_span_dim, validate

__all__ = [
    "NotAComplexError",
    "ChainComplex",
    "HomologyTable",
    "face",
    "degeneracy",
    "hochschild_boundary",
    "hochschild_complex",
    "homology",
    "hochschild_homology",
    "h0_cross_check",
    "BarLemmaMaps",
    "bar_lemma_maps",
    "LemmaReport",
    "bar_lemma_vanishing",
    "bar_lemma_vanishing_dual",
]


class NotAComplexError(ValueError):
    """A sequence of maps with ``d∘d ≠ 0``."""


@dataclass
class ChainComplex:
    """Spaces ``C_0..C_N`` and boundaries ``d_m: C_m → C_{m-1}`` for ``1 ≤ m ≤ N``."""

    dims: list[int]
    boundaries: dict[int, SparseMatrix]
    field: Field
    name: str = ""

    @property
    def max_degree(self) -> int:
        return len(self.dims) - 1

    def d(self, m: int) -> SparseMatrix:
        if m in self.boundaries:
            return self.boundaries[m]
        rows = self.dims[m - 1] if 1 <= m <= self.max_degree + 1 else 0
        cols = self.dims[m] if 0 <= m <= self.max_degree else 0
        return SparseMatrix.zero(rows, cols, self.field)

    def d_squared_failures(self) -> list[int]:
        """Degrees ``m`` with ``d_{m-1} ∘ d_m ≠ 0``."""
        return [m for m in range(2, self.max_degree + 1)
                if not compose(self.d(m - 1), self.d(m)).is_zero()]

    def is_complex(self) -> bool:
        return not self.d_squared_failures()


@dataclass
class HomologyTable:
    """Homology dimensions in degrees ``0..N``; degree ``N`` is kernel-only."""

    dims: list[int]
    metadata: dict = dc_field(default_factory=dict)

    @property
    def max_degree(self) -> int:
        return len(self.dims) - 1

    @property
    def truncated_degree(self) -> int:
        return self.max_degree

    @property
    def reliable(self) -> list[int]:
        return self.dims[:-1]

    def to_dict(self) -> dict:
        return {
            "dims": self.dims,
            "reliable_dims": self.reliable,
            "truncated_degree": self.truncated_degree,
            **self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"{'degree':>6}  {'dim':>6}"]
        for m, d in enumerate(self.dims):
            mark = "  (truncated)" if m == self.truncated_degree else ""
            lines.append(f"{m:>6}  {d:>6}{mark}")
        return "\n".join(lines)


# ----------------------------------------------------------------------
# faces, degeneracies, differential

class _Tables:
    """Flattened lookup tables for fast face evaluation."""

    def __init__(self, A: SuperAlgebra, M: GradedBimodule):
        if M.left != A or M.right != A:
            raise ValueError(f"{M.name} is not an {A.name}-bimodule")
        self.nA = A.dim
        self.nM = M.dim
        self.pA = [int(p) for p in A.parities]
        self.pM = [int(p) for p in M.parities]
        self.mul = A.products
        self.left = M.left_action
        self.right = M.right_action
        self.unit = A.unit
        self.field = A.field

    def decode(self, idx: int, m: int) -> tuple[int, list[int]]:
        slots = [0] * m
        for j in range(m - 1, -1, -1):
            idx, slots[j] = divmod(idx, self.nA)
        return idx, slots

    def encode(self, mu: int, slots) -> int:
        idx = mu
        for a in slots:
            idx = idx * self.nA + a
        return idx

    def face_terms(self, m: int, i: int, mu: int, s: list[int]) -> Iterator[tuple[int, object]]:
        if i == 0:
            for nu, c in self.right.get((mu, s[0]), {}).items():
                yield self.encode(nu, s[1:]), c
        elif i < m:
            for k, c in self.mul.get((s[i - 1], s[i]), {}).items():
                yield self.encode(mu, s[:i - 1] + [k] + s[i + 1:]), c
        else:
            last = s[-1]
            e = self.pA[last] * (self.pM[mu] + sum(self.pA[a] for a in s[:-1]))
            sg = -1 if e % 2 else 1
            for nu, c in self.left.get((last, mu), {}).items():
                yield self.encode(nu, s[:-1]), sg * c


def _space_dim(A: SuperAlgebra, M: GradedBimodule, m: int) -> int:
    return M.dim * A.dim ** m


def face(m: int, i: int, A: SuperAlgebra, M: GradedBimodule) -> SparseMatrix:
    """``δ_i : C_m(A, M) → C_{m-1}(A, M)``."""
    if m < 1 or not 0 <= i <= m:
        raise IndexError(f"face index {i} out of range for degree {m}")
    t = _Tables(A, M)
    f = t.field
    cols = []
    for idx in range(_space_dim(A, M, m)):
        mu, s = t.decode(idx, m)
        col: dict = {}
        for r, c in t.face_terms(m, i, mu, s):
            col[r] = f(col.get(r, 0) + c)
        cols.append(col)
    return SparseMatrix(_space_dim(A, M, m - 1), len(cols), cols, f)


def degeneracy(m: int, i: int, A: SuperAlgebra, M: GradedBimodule) -> SparseMatrix:
    """``s_i : C_m → C_{m+1}``, inserting the unit after slot ``i`` (slot 0 is ``M``)."""
    if m < 0 or not 0 <= i <= m:
        raise IndexError(f"degeneracy index {i} out of range for degree {m}")
    t = _Tables(A, M)
    cols = []
    for idx in range(_space_dim(A, M, m)):
        mu, s = t.decode(idx, m)
        cols.append({t.encode(mu, s[:i] + [u] + s[i:]): c for u, c in t.unit.items()})
    return SparseMatrix(_space_dim(A, M, m + 1), len(cols), cols, t.field)


def _normalizer(A: SuperAlgebra):
    """Complement of the unit line and the projection ``A → A/k·1`` on it."""
    f = A.field
    pivot = min(A.unit)
    keep = [i for i in range(A.dim) if i != pivot]
    pos = {i: n for n, i in enumerate(keep)}
    inv = f.inv(A.unit[pivot])
    proj = {i: {pos[i]: 1} for i in keep}
    proj[pivot] = {pos[i]: f(-c * inv) for i, c in A.unit.items() if i != pivot}
    return keep, proj


def hochschild_boundary(A: SuperAlgebra, M: GradedBimodule, m: int, normalized: bool = False) -> SparseMatrix:
    """``d_m = Σ (-1)^i δ_i`` (or its image on the normalized complex)."""
    t = _Tables(A, M)
    f = t.field
    if not normalized:
        cols = []
        for idx in range(_space_dim(A, M, m)):
            mu, s = t.decode(idx, m)
            col: dict = {}
            for i in range(m + 1):
                sg = -1 if i % 2 else 1
                for r, c in t.face_terms(m, i, mu, s):
                    col[r] = col.get(r, 0) + sg * c
            cols.append({r: w for r, v in col.items() if (w := f(v))})
        return SparseMatrix(_space_dim(A, M, m - 1), len(cols), cols, f, _trusted=True)

    keep, proj = _normalizer(A)
    nb = len(keep)
    cols = []
    for idx in range(M.dim * nb ** m):
        s = [0] * m
        rest = idx
        for j in range(m - 1, -1, -1):
            rest, r = divmod(rest, nb)
            s[j] = keep[r]
        mu = rest
        col: dict = {}
        for i in range(m + 1):
            sg = -1 if i % 2 else 1
            for r, c in t.face_terms(m, i, mu, s):
                nu, slots = t.decode(r, m - 1)
                # expand each slot in the complement basis
                partial = [(nu, sg * c)]
                for a in slots:
                    partial = [(x * nb + k, w * v) for x, w in partial for k, v in proj[a].items()]
                for x, w in partial:
                    col[x] = col.get(x, 0) + w
        cols.append({r: w for r, v in col.items() if (w := f(v))})
    return SparseMatrix(M.dim * nb ** (m - 1), len(cols), cols, f, _trusted=True)


def hochschild_complex(A: SuperAlgebra, M: GradedBimodule | None = None, max_degree: int = 3,
                       normalized: bool = False, check: bool = True) -> ChainComplex:
    """``C_0..C_N`` of ``A`` with coefficients in ``M`` (default: ``A`` itself)."""
    if M is None:
        M = regular_bimodule(A)
    if check:
        validate(A).raise_if_invalid()
        validate_bimodule(M).raise_if_invalid()
    nb = A.dim - 1 if normalized else A.dim
    dims = [M.dim * nb ** m for m in range(max_degree + 1)]
    bounds = {m: hochschild_boundary(A, M, m, normalized) for m in range(1, max_degree + 1)}
    name = f"C({A.name}, {M.name})" + (" normalized" if normalized else "")
    return ChainComplex(dims, bounds, A.field, name)


def homology(cx: ChainComplex, check: bool = True, **metadata) -> HomologyTable:
    """``dim H_m = dim ker d_m - rank d_{m+1}``; the top degree is kernel-only."""
    if check:
        bad = cx.d_squared_failures()
        if bad:
            raise NotAComplexError(f"{cx.name}: d∘d ≠ 0 at degrees {bad}")
    N = cx.max_degree
    ranks = [0] * (N + 2)
    for m in range(1, N + 1):
        ranks[m] = rank(cx.d(m))
    dims = [cx.dims[m] - ranks[m] - ranks[m + 1] for m in range(N + 1)]
    meta = {"complex": cx.name, "field": cx.field.tag, "max_degree": N}
    meta.update(metadata)
    return HomologyTable(dims, meta)


def hochschild_homology(A: SuperAlgebra, M: GradedBimodule | None = None, max_degree: int = 3,
                        normalized: bool = False) -> HomologyTable:
    M = M if M is not None else regular_bimodule(A)
    cx = hochschild_complex(A, M, max_degree, normalized)
    return homology(cx, algebra=A.name, coefficients=M.name)


def h0_cross_check(A: SuperAlgebra) -> bool:
    """``dim H_0(A, A) == dim A - dim {A, A}``."""
    if A.field.characteristic == 2:
        raise ValueError("supercommutator checks are meaningless in characteristic 2")
    h0 = homology(hochschild_complex(A, max_degree=1)).dims[0]
    return h0 == A.dim - supercommutator_span_dim(A)


# ----------------------------------------------------------------------
# bar resolution lemma

@dataclass(frozen=True, eq=False)
class BarLemmaMaps:
    """``f: (M⊗Q)⊗A^n → Q⊗_A(M⊗A⊗A^n)`` and ``g`` back, on the quotient basis."""

    f: SparseMatrix
    g: SparseMatrix
    target: BalancedTensor
    g_ambient: SparseMatrix

    def __iter__(self):
        return iter((self.f, self.g))


def _bar_module(A: SuperAlgebra, M: GradedBimodule, n: int) -> GradedBimodule:
    """``M ⊗ A ⊗ A^n`` as a left ``A``-module acting on the first ``A`` slot.

    ``a·(m ⊗ a_0 ⊗ ā) = (-1)^{|a||m|} m ⊗ a a_0 ⊗ ā``.
    """
    k = ground_field(A.field)
    nA, tail = A.dim, A.dim ** n
    stride = nA * tail
    pA = [int(p) for p in A.parities]
    labels, parities = [], []
    for m in range(M.dim):
        for idx in range(stride):
            labels.append(f"{M.labels[m]}|{idx}")
            a0, rest = divmod(idx, tail)
            e = int(M.parities[m]) + pA[a0]
            r = rest
            for _ in range(n):
                r, a = divmod(r, nA)
                e += pA[a]
            parities.append(e % 2)
    la, ra = {}, {}
    for m in range(M.dim):
        pm = int(M.parities[m])
        for a0 in range(nA):
            for a in range(nA):
                prod = A.mul(a, a0)
                if not prod:
                    continue
                sg = -1 if (pA[a] * pm) % 2 else 1
                for rest in range(tail):
                    src = m * stride + a0 * tail + rest
                    la[(a, src)] = {m * stride + k2 * tail + rest: sg * c for k2, c in prod.items()}
    for x in range(M.dim * stride):
        ra[(x, 0)] = {x: 1}
    return GradedBimodule(f"{M.name}⊗{A.name}^{n + 1}", A, k, labels, parities, la, ra)


def bar_lemma_maps(A: SuperAlgebra, M: GradedBimodule, Q: GradedBimodule, n: int) -> BarLemmaMaps:
    """The comparison maps between ``C_n(A, M⊗Q)`` and ``Q⊗_A(M⊗A^{n+1})``.

    ``f(m⊗q⊗ā) = (-1)^{|m||q|} q⊗(m⊗1⊗ā)`` and
    ``g(q⊗(m⊗a_0⊗ā)) = (-1)^{|m||q|} (m⊗q·a_0)⊗ā``.
    """
    if M.left != A:
        raise ValueError(f"{M.name} is not a left {A.name}-module")
    if Q.right != A:
        raise ValueError(f"{Q.name} is not a right {A.name}-module")
    f = A.field
    X = _bar_module(A, M, n)
    bal = tensor_over(Q, X)
    nA, nQ, nM = A.dim, Q.dim, M.dim
    tail = nA ** n
    stride = nA * tail
    nX = X.dim
    pM = [int(p) for p in M.parities]
    pQ = [int(p) for p in Q.parities]

    dom = nM * nQ * tail
    f_cols = []
    for idx in range(dom):
        mq, rest = divmod(idx, tail)
        m, q = divmod(mq, nQ)
        sg = -1 if (pM[m] * pQ[q]) % 2 else 1
        f_cols.append({q * nX + m * stride + u * tail + rest: sg * c for u, c in A.unit.items()})
    f_amb = SparseMatrix(bal.ambient.dim, dom, f_cols, f)

    g_cols = []
    for idx in range(bal.ambient.dim):
        q, x = divmod(idx, nX)
        m, inner = divmod(x, stride)
        a0, rest = divmod(inner, tail)
        sg = -1 if (pM[m] * pQ[q]) % 2 else 1
        g_cols.append({(m * nQ + k) * tail + rest: sg * c for k, c in Q.act_right(q, a0).items()})
    g_amb = SparseMatrix(dom, bal.ambient.dim, g_cols, f)

    return BarLemmaMaps(compose(bal.projection, f_amb), compose(g_amb, bal.section), bal, g_amb)


@dataclass
class LemmaReport:
    homology: HomologyTable
    expected_h0: int
    h0_ok: bool
    vanishing_ok: bool

    @property
    def ok(self) -> bool:
        return self.h0_ok and self.vanishing_ok

    def to_dict(self) -> dict:
        return {"homology": self.homology.to_dict(), "expected_h0": self.expected_h0,
                "h0_ok": self.h0_ok, "vanishing_ok": self.vanishing_ok, "ok": self.ok}


def _lemma_report(A: SuperAlgebra, left: GradedBimodule, right: GradedBimodule, max_degree: int) -> LemmaReport:
    coeff = tensor_ground(left, right)
    table = homology(hochschild_complex(A, coeff, max_degree),
                     algebra=A.name, coefficients=coeff.name)
    expected = tensor_over(right, left).dim
    rel = table.reliable
    return LemmaReport(table, expected, bool(rel) and rel[0] == expected,
                       all(d == 0 for d in rel[1:]))


def bar_lemma_vanishing(A: SuperAlgebra, M: GradedBimodule, Q: GradedBimodule, max_degree: int = 3) -> LemmaReport:
    """``H_n(A, M⊗Q)`` for a left module ``M`` and a free right module ``Q``.

    Expected: ``Q⊗_A M`` in degree 0 and zero in degrees ``1 ≤ n < max_degree``.
    """
    if M.left != A or Q.right != A:
        raise ValueError("need a left A-module M and a right A-module Q")
    return _lemma_report(A, M, Q, max_degree)


def bar_lemma_vanishing_dual(A: SuperAlgebra, P: GradedBimodule, N: GradedBimodule, max_degree: int = 3) -> LemmaReport:
    """``H_n(A, P⊗N)`` for a free left module ``P`` and a right module ``N``; ``H_0 ≅ N⊗_A P``."""
    if P.left != A or N.right != A:
        raise ValueError("need a left A-module P and a right A-module N")
    return _lemma_report(A, P, N, max_degree)
