"""The Morita double complex ``C_{m,n} = P ⊗ B^n ⊗ Q ⊗ A^m`` and the invariance check.

Vertical maps ``d'`` are Hochschild boundaries of ``A`` with coefficients in
``P ⊗ B^n ⊗ Q``.  Horizontal maps are

    d''_{m,n} = (-1)^m · ω^{-1} ∘ b_B ∘ ω

where ``ω`` rotates ``p⊗b̄⊗q⊗ā`` to ``q⊗ā⊗p⊗b̄`` with a Koszul sign and
``b_B`` is the Hochschild boundary of ``B`` with coefficients in
``Q ⊗ A^m ⊗ P``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .bimod import GradedBimodule, coefficient_bimodule, tensor_over, validate_bimodule
from .builders import MoritaContext
from .exactlin import SparseMatrix, compose, kernel_basis, rank
from .hochschild import ChainComplex, HomologyTable, NotAComplexError, hochschild_boundary, hochschild_homology, homology
from .superalg import SuperAlgebra, validate

__all__ = [
    "SIGN_RULES",
    "omega",
    "DoubleComplex",
    "build_double_complex",
    "total_complex",
    "LineReport",
    "ExactnessReport",
    "row_column_exactness",
    "E2Pages",
    "e2_pages",
    "MoritaReport",
    "verify_morita_invariance",
    "verify_context",
]

# Exponent of the rotation sign.  Only "koszul" is correct; the others are
# negative controls.  "sum" is |p|+|q|+Σ|a|+Σ|b|; "endpoints" is |p||q|.
SIGN_RULES = ("koszul", "sum", "endpoints")


def _power_parities(A: SuperAlgebra, n: int) -> list[int]:
    par = [0]
    for _ in range(n):
        par = [(x + int(y)) % 2 for x in par for y in A.parities]
    return par


def omega(m: int, n: int, A: SuperAlgebra, B: SuperAlgebra, P: GradedBimodule, Q: GradedBimodule,
          sign_rule: str = "koszul") -> SparseMatrix:
    """Signed rotation ``P⊗B^n⊗Q⊗A^m → Q⊗A^m⊗P⊗B^n``."""
    if sign_rule not in SIGN_RULES:
        raise ValueError(f"unknown sign rule {sign_rule!r}")
    nP, nQ = P.dim, Q.dim
    nAm, nBn = A.dim ** m, B.dim ** n
    parA, parB = _power_parities(A, m), _power_parities(B, n)
    pP = [int(x) for x in P.parities]
    pQ = [int(x) for x in Q.parities]
    cols = []
    for idx in range(nP * nBn * nQ * nAm):
        rest, a = divmod(idx, nAm)
        rest, q = divmod(rest, nQ)
        p, b = divmod(rest, nBn)
        head = pP[p] + parB[b]
        tail = pQ[q] + parA[a]
        if sign_rule == "koszul":
            e = head * tail
        elif sign_rule == "sum":
            e = head + tail
        else:
            e = pP[p] * pQ[q]
        cols.append({((q * nAm + a) * nP + p) * nBn + b: -1 if e % 2 else 1})
    total = len(cols)
    return SparseMatrix(total, total, cols, A.field, _trusted=True)


@dataclass(eq=False)
class DoubleComplex:
    """Bigraded spaces ``C_{m,n}`` for ``m + n ≤ N`` with ``d'`` and ``d''``.

    ``vertical[(m, n)] = d'_{m,n}: C_{m,n} → C_{m-1,n}`` and
    ``horizontal[(m, n)] = d''_{m,n}: C_{m,n} → C_{m,n-1}``.
    """

    context: MoritaContext
    max_total_degree: int
    dims: dict[tuple[int, int], int]
    vertical: dict[tuple[int, int], SparseMatrix]
    horizontal: dict[tuple[int, int], SparseMatrix]
    sign_rule: str = "koszul"

    @property
    def field(self):
        return self.context.A.field

    def bidegrees(self):
        N = self.max_total_degree
        return [(m, k - m) for k in range(N + 1) for m in range(k + 1)]

    @cached_property
    def identity_failures(self) -> dict[str, list[tuple[int, int]]]:
        """Bidegrees where ``d'²``, ``d''²`` or ``d'd'' + d''d'`` is nonzero."""
        out = {"vertical_squared": [], "horizontal_squared": [], "anticommutator": []}
        v, h = self.vertical, self.horizontal
        for m, n in self.bidegrees():
            if m >= 2 and not compose(v[(m - 1, n)], v[(m, n)]).is_zero():
                out["vertical_squared"].append((m, n))
            if n >= 2 and not compose(h[(m, n - 1)], h[(m, n)]).is_zero():
                out["horizontal_squared"].append((m, n))
            if m >= 1 and n >= 1:
                s = compose(v[(m, n - 1)], h[(m, n)]) + compose(h[(m - 1, n)], v[(m, n)])
                if not s.is_zero():
                    out["anticommutator"].append((m, n))
        return out

    @property
    def identities_hold(self) -> bool:
        return not any(self.identity_failures.values())

    def identity_flags(self) -> dict[str, bool]:
        return {k: not v for k, v in self.identity_failures.items()}


def build_double_complex(A: SuperAlgebra, B: SuperAlgebra, P: GradedBimodule, Q: GradedBimodule,
                         max_total_degree: int, sign_rule: str = "koszul", check: bool = True) -> DoubleComplex:
    ctx = MoritaContext(A, B, P, Q)
    if check:
        for rep in ctx.validate():
            rep.raise_if_invalid()
    N = max_total_degree
    coeffA = {n: coefficient_bimodule(P, n, Q, check=False) for n in range(N + 1)}
    coeffB = {m: coefficient_bimodule(Q, m, P, check=False) for m in range(N + 1)}
    dims = {}
    vertical, horizontal = {}, {}
    omegas = {}
    for k in range(N + 1):
        for m in range(k + 1):
            n = k - m
            dims[(m, n)] = coeffA[n].dim * A.dim ** m
            omegas[(m, n)] = omega(m, n, A, B, P, Q, sign_rule)
    for (m, n) in dims:
        if m >= 1:
            vertical[(m, n)] = hochschild_boundary(A, coeffA[n], m)
        if n >= 1:
            b = hochschild_boundary(B, coeffB[m], n)
            d = compose(omegas[(m, n - 1)].transpose(), compose(b, omegas[(m, n)]))
            horizontal[(m, n)] = d.scale(-1) if m % 2 else d
    return DoubleComplex(ctx, N, dims, vertical, horizontal, sign_rule)


def total_complex(D: DoubleComplex, check: bool = True) -> ChainComplex:
    """``Tot_k = ⊕_{m+n=k} C_{m,n}`` (blocks ordered by ``m``) with ``d = d' + d''``."""
    if check and not D.identities_hold:
        raise NotAComplexError(f"double complex identities fail: {D.identity_failures}")
    N = D.max_total_degree
    dims = [sum(D.dims[(m, k - m)] for m in range(k + 1)) for k in range(N + 1)]
    bounds = {}
    for k in range(1, N + 1):
        col_sizes = [D.dims[(m, k - m)] for m in range(k + 1)]
        row_sizes = [D.dims[(m, k - 1 - m)] for m in range(k)]
        blocks = {}
        for m in range(k + 1):
            n = k - m
            if m >= 1:
                blocks[(m - 1, m)] = D.vertical[(m, n)]
            if n >= 1:
                blocks[(m, m)] = D.horizontal[(m, n)]
        bounds[k] = SparseMatrix.block(blocks, row_sizes, col_sizes, D.field)
    cx = ChainComplex(dims, bounds, D.field, f"Tot({D.context.note or 'context'})")
    if check and not cx.is_complex():
        raise NotAComplexError("total differential does not square to zero")
    return cx


# ----------------------------------------------------------------------
# rows, columns and E² pages

@dataclass
class LineReport:
    index: int
    dims: list[int]
    reliable: int
    expected: list[int]

    @property
    def ok(self) -> bool:
        return self.dims[:self.reliable] == self.expected[:self.reliable]


@dataclass
class ExactnessReport:
    rows: list[LineReport]
    columns: list[LineReport]

    @property
    def rows_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def columns_ok(self) -> bool:
        return all(c.ok for c in self.columns)

    @property
    def ok(self) -> bool:
        return self.rows_ok and self.columns_ok

    def to_dict(self) -> dict:
        line = lambda r: {"index": r.index, "dims": r.dims, "reliable_degrees": r.reliable,  # noqa: E731
                          "expected": r.expected, "ok": r.ok}
        return {"rows": [line(r) for r in self.rows], "columns": [line(c) for c in self.columns],
                "rows_ok": self.rows_ok, "columns_ok": self.columns_ok}


def _line_homology(dims: list[int], maps: dict[int, SparseMatrix], field) -> list[int]:
    cx = ChainComplex(dims, maps, field)
    return homology(cx, check=False).dims


def row_column_exactness(D: DoubleComplex) -> ExactnessReport:
    """Homology of each row (``d''``) and column (``d'``) inside the window.

    Row ``p`` should have ``dim(P⊗_B Q)·dim(A)^p`` in degree 0 and vanish
    above; column ``n`` should have ``dim(B)^n·dim(Q⊗_A P)`` in degree 0.
    Only degrees with an incoming map inside the window are compared.
    """
    ctx = D.context
    N = D.max_total_degree
    pq = tensor_over(ctx.P, ctx.Q).dim
    qp = tensor_over(ctx.Q, ctx.P).dim
    rows, cols = [], []
    for p in range(N + 1):
        length = N - p
        dims = [D.dims[(p, n)] for n in range(length + 1)]
        maps = {n: D.horizontal[(p, n)] for n in range(1, length + 1)}
        h = _line_homology(dims, maps, D.field)
        expected = [pq * ctx.A.dim ** p] + [0] * length
        rows.append(LineReport(p, h, length, expected))
    for n in range(N + 1):
        length = N - n
        dims = [D.dims[(m, n)] for m in range(length + 1)]
        maps = {m: D.vertical[(m, n)] for m in range(1, length + 1)}
        h = _line_homology(dims, maps, D.field)
        expected = [ctx.B.dim ** n * qp] + [0] * length
        cols.append(LineReport(n, h, length, expected))
    return ExactnessReport(rows, cols)


@dataclass
class E2Pages:
    """Both E² pages, keyed ``(p, q)`` with ``q = 0`` the expected collapse line.

    ``first``: ``H'_p H''`` (``p`` is the A-degree); ``second``: ``H''_p H'``
    (``p`` is the B-degree).  Entries exist for ``p + q ≤ N - 2``, where
    every map they need lies inside the window.
    """

    first: dict[tuple[int, int], int]
    second: dict[tuple[int, int], int]
    max_total_degree: int

    def collapsed(self) -> bool:
        return all(v == 0 for page in (self.first, self.second) for (p, q), v in page.items() if q >= 1)

    def line(self, which: str, q: int = 0) -> list[int]:
        page = self.first if which == "first" else self.second
        return [page[(p, q)] for p in range(self.max_total_degree - 1 - q)]

    def to_dict(self) -> dict:
        enc = lambda page: {f"{p},{q}": v for (p, q), v in sorted(page.items())}  # noqa: E731
        return {"first": enc(self.first), "second": enc(self.second), "collapsed": self.collapsed()}


def _e2_page(N, dim, inner, outer, field) -> dict[tuple[int, int], int]:
    """Generic E² by subquotients: homology of ``inner`` first, then of the map ``outer`` induces."""
    kernels, images, h = {}, {}, {}

    def ker(p, q):
        if (p, q) not in kernels:
            kernels[(p, q)] = (SparseMatrix.identity(dim(p, q), field) if q == 0
                               else kernel_basis(inner(p, q)))
        return kernels[(p, q)]

    def img(p, q):
        # image of the inner map arriving at (p, q)
        if (p, q) not in images:
            images[(p, q)] = inner(p, q + 1)
        return images[(p, q)]

    def hdim(p, q):
        if (p, q) not in h:
            h[(p, q)] = ker(p, q).n_cols - rank(img(p, q))
        return h[(p, q)]

    def induced_rank(p, q):
        if p == 0:
            return 0
        moved = compose(outer(p, q), ker(p, q))
        target = img(p - 1, q)
        return rank(SparseMatrix.hstack([moved, target])) - rank(target)

    page = {}
    for k in range(N - 1):
        for p in range(k + 1):
            q = k - p
            page[(p, q)] = hdim(p, q) - induced_rank(p, q) - induced_rank(p + 1, q)
    return page


def e2_pages(D: DoubleComplex) -> E2Pages:
    if not D.identities_hold:
        raise NotAComplexError(f"double complex identities fail: {D.identity_failures}")
    N = D.max_total_degree
    first = _e2_page(N, lambda p, q: D.dims[(p, q)],
                     lambda p, q: D.horizontal[(p, q)], lambda p, q: D.vertical[(p, q)], D.field)
    second = _e2_page(N, lambda p, q: D.dims[(q, p)],
                      lambda p, q: D.vertical[(q, p)], lambda p, q: D.horizontal[(q, p)], D.field)
    return E2Pages(first, second, N)


# ----------------------------------------------------------------------
# verification

@dataclass
class MoritaReport:
    max_degree: int
    dims_tot: list[int] | None
    dims_A_side: list[int]
    dims_B_side: list[int]
    identities: dict[str, bool]
    exactness: ExactnessReport | None
    balanced_dims: tuple[int, int]
    sign_rule: str = "koszul"
    note: str = ""
    e2: E2Pages | None = None
    reasons: list[str] = dc_field(default_factory=list)

    @property
    def reliable_degrees(self) -> list[int]:
        return list(range(self.max_degree))

    @property
    def verdict(self) -> str:
        return "verified" if not self.reasons else "failed"

    def to_dict(self) -> dict:
        return {
            "context": self.note,
            "max_degree": self.max_degree,
            "truncated_degree": self.max_degree,
            "sign_rule": self.sign_rule,
            "dims_tot": self.dims_tot,
            "dims_A_side": self.dims_A_side,
            "dims_B_side": self.dims_B_side,
            "balanced_dims": {"P⊗_BQ": self.balanced_dims[0], "Q⊗_AP": self.balanced_dims[1]},
            "identities": self.identities,
            "exactness": self.exactness.to_dict() if self.exactness else None,
            "e2": self.e2.to_dict() if self.e2 else None,
            "verdict": self.verdict,
            "reasons": self.reasons,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        N = self.max_degree
        fmt = lambda xs: "  ".join(f"{x:>4}" for x in xs) if xs is not None else "   -"  # noqa: E731
        lines = [f"Morita check: {self.note}  (degrees 0..{N}, degree {N} truncated)",
                 f"{'degree':<14}{fmt(range(N + 1))}",
                 f"{'H(Tot)':<14}{fmt(self.dims_tot)}",
                 f"{'H(A,P⊗_BQ)':<14}{fmt(self.dims_A_side)}",
                 f"{'H(B,Q⊗_AP)':<14}{fmt(self.dims_B_side)}"]
        for k, v in self.identities.items():
            lines.append(f"{k:<20}{'ok' if v else 'FAIL'}")
        if self.exactness is not None:
            lines.append(f"{'rows exact':<20}{'ok' if self.exactness.rows_ok else 'FAIL'}")
            lines.append(f"{'columns exact':<20}{'ok' if self.exactness.columns_ok else 'FAIL'}")
        if self.e2 is not None:
            lines.append(f"{'E2 collapse':<20}{'ok' if self.e2.collapsed() else 'FAIL'}")
        lines.append(f"verdict: {self.verdict}")
        lines += [f"  - {r}" for r in self.reasons]
        return "\n".join(lines)


def verify_morita_invariance(A: SuperAlgebra, B: SuperAlgebra, P: GradedBimodule, Q: GradedBimodule,
                             max_degree: int = 3, sign_rule: str = "koszul", with_e2: bool = False,
                             note: str = "") -> MoritaReport:
    """Compare ``H(Tot)``, ``H(A, P⊗_B Q)`` and ``H(B, Q⊗_A P)`` on degrees ``< max_degree``."""
    for rep in (validate(A), validate(B), validate_bimodule(P), validate_bimodule(Q)):
        rep.raise_if_invalid()
    N = max_degree
    PQ = tensor_over(P, Q)
    QP = tensor_over(Q, P)
    side_a = hochschild_homology(A, PQ.module, N)
    side_b = hochschild_homology(B, QP.module, N)
    D = build_double_complex(A, B, P, Q, N, sign_rule, check=False)
    reasons = []
    flags = D.identity_flags()
    for k, v in flags.items():
        if not v:
            reasons.append(f"{k} fails at bidegrees {D.identity_failures[k]}")
    dims_tot = exact = e2 = None
    if D.identities_hold:
        dims_tot = homology(total_complex(D)).dims
        exact = row_column_exactness(D)
        if not exact.rows_ok:
            reasons.append("rows not exact")
        if not exact.columns_ok:
            reasons.append("columns not exact")
        if with_e2:
            e2 = e2_pages(D)
            if not e2.collapsed():
                reasons.append("E2 pages do not collapse")
        if not (dims_tot[:N] == side_a.reliable == side_b.reliable):
            reasons.append(f"homology mismatch on degrees 0..{N - 1}")
    else:
        reasons.append("total complex skipped")
    return MoritaReport(N, dims_tot, side_a.dims, side_b.dims, flags, exact,
                        (PQ.dim, QP.dim), sign_rule, note, e2, reasons)


def verify_context(ctx: MoritaContext, max_degree: int = 3, sign_rule: str = "koszul",
                   with_e2: bool = False) -> MoritaReport:
    return verify_morita_invariance(ctx.A, ctx.B, ctx.P, ctx.Q, max_degree, sign_rule, with_e2, ctx.note)
