"""Exact scalars and sparse matrices over the rationals or a prime field.

Scalars are plain Python numbers normalized by a :class:`Field`: over the
rationals they are ``int`` (when integral) or :class:`fractions.Fraction`,
over ``F_p`` they are ``int`` in ``range(p)``.  Nothing is ever rounded.

Matrices are stored column-wise as ``{row: value}`` dictionaries without
explicit zeros, which is the natural layout for boundary maps assembled one
basis vector at a time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Field",
    "QQ",
    "GF",
    "parse_field",
    "ShapeError",
    "SparseMatrix",
    "rank",
    "kernel_dim",
    "kernel_basis",
    "compose",
    "quotient_dim",
    "quotient_basis",
    "rref",
]

_EXACT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class ShapeError(ValueError):
    """Raised when matrix or vector dimensions do not fit together."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """The ground field: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus != 0 and not _is_prime(self.modulus):
            raise ValueError(f"field modulus {self.modulus} is not prime")

    @property
    def characteristic(self) -> int:
        return self.modulus

    @property
    def tag(self) -> str:
        return "Q" if self.modulus == 0 else f"Fp:{self.modulus}"

    def __str__(self):
        return self.tag

    def __call__(self, value) -> int | Fraction:
        """Coerce ``value`` (int, Fraction or exact string) into the field."""
        if isinstance(value, str):
            value = parse_exact(value)
        elif isinstance(value, float):
            raise TypeError("floating-point scalars are not exact")
        if self.modulus:
            if isinstance(value, Fraction):
                den = value.denominator % self.modulus
                if den == 0:
                    raise ZeroDivisionError(f"denominator vanishes in {self.tag}")
                return value.numerator * pow(den, -1, self.modulus) % self.modulus
            return int(value) % self.modulus
        if type(value) is int:
            return value
        value = Fraction(value)
        return value.numerator if value.denominator == 1 else value

    def inv(self, value):
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus:
            return pow(value, -1, self.modulus)
        if type(value) is int:
            return 1 if value == 1 else Fraction(1, value)
        return self(1 / value)

    def format(self, value) -> str:
        """Canonical exact string: ``"3"``, ``"-1/2"``."""
        value = self(value)
        if isinstance(value, Fraction):
            return f"{value.numerator}/{value.denominator}"
        return str(value)


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def parse_field(text: str) -> Field:
    """Parse ``"Q"`` or ``"Fp:<prime>"``."""
    text = text.strip()
    if text in ("Q", "QQ"):
        return QQ
    if text.startswith("Fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            raise ValueError(f"bad field {text!r}") from None
        return Field(p)
    raise ValueError(f"unknown field {text!r}; expected 'Q' or 'Fp:<prime>'")


def parse_exact(text: str) -> int | Fraction:
    """Parse an integer or ``p/q`` string; decimals and exponents are rejected."""
    m = _EXACT_RE.match(text)
    if not m:
        raise ValueError(f"not an exact rational: {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return QQ(Fraction(num, den))


class SparseMatrix:
    """Immutable sparse matrix over a :class:`Field`, stored by columns."""

    __slots__ = ("n_rows", "n_cols", "field", "_cols")

    def __init__(self, n_rows: int, n_cols: int, columns: Sequence[Mapping[int, object]] | None = None,
                 field: Field = QQ, *, _trusted: bool = False):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.field = field
        if columns is None:
            self._cols = tuple({} for _ in range(n_cols))
            return
        if len(columns) != n_cols:
            raise ShapeError(f"expected {n_cols} columns, got {len(columns)}")
        if _trusted:
            self._cols = tuple(columns)
            return
        cols = []
        for col in columns:
            clean = {}
            for r, v in col.items():
                if not 0 <= r < n_rows:
                    raise ShapeError(f"row index {r} out of range for {n_rows} rows")
                v = field(v)
                if v:
                    clean[r] = v
            cols.append(clean)
        self._cols = tuple(cols)

    # construction -----------------------------------------------------
    @classmethod
    def from_entries(cls, n_rows: int, n_cols: int, entries: Iterable[tuple[int, int, object]],
                     field: Field = QQ) -> SparseMatrix:
        """Build from ``(row, col, value)`` triples; repeated coordinates are summed."""
        cols = [dict() for _ in range(n_cols)]
        for r, c, v in entries:
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise ShapeError(f"entry ({r}, {c}) outside {n_rows}x{n_cols}")
            col = cols[c]
            col[r] = field(col.get(r, 0) + field(v))
        for col in cols:
            for r in [r for r, v in col.items() if not v]:
                del col[r]
        return cls(n_rows, n_cols, cols, field, _trusted=True)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]], field: Field = QQ,
                   n_cols: int | None = None) -> SparseMatrix:
        n_rows = len(rows)
        if n_cols is None:
            n_cols = len(rows[0]) if rows else 0
        entries = []
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise ShapeError("ragged dense matrix")
            entries.extend((i, j, v) for j, v in enumerate(row) if v)
        return cls.from_entries(n_rows, n_cols, entries, field)

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Mapping[int, object]], field: Field = QQ) -> SparseMatrix:
        return cls(n_rows, len(columns), columns, field)

    @classmethod
    def zero(cls, n_rows: int, n_cols: int, field: Field = QQ) -> SparseMatrix:
        return cls(n_rows, n_cols, None, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> SparseMatrix:
        return cls(n, n, [{i: 1} for i in range(n)], field, _trusted=True)

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def column(self, j: int) -> Mapping[int, object]:
        return self._cols[j]

    def columns(self) -> tuple[Mapping[int, object], ...]:
        return self._cols

    def entries(self) -> Iterator[tuple[int, int, object]]:
        for c, col in enumerate(self._cols):
            for r in sorted(col):
                yield r, c, col[r]

    def rows(self) -> list[dict[int, object]]:
        out = [dict() for _ in range(self.n_rows)]
        for c, col in enumerate(self._cols):
            for r, v in col.items():
                out[r][c] = v
        return out

    def __getitem__(self, rc):
        r, c = rc
        return self._cols[c].get(r, 0)

    def to_dense(self) -> list[list[object]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for r, c, v in self.entries():
            out[r][c] = v
        return out

    def is_zero(self) -> bool:
        return not any(self._cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self._cols == other._cols

    def __hash__(self):
        return hash((self.shape, self.field, tuple(tuple(sorted(c.items())) for c in self._cols)))

    def __repr__(self):
        return f"SparseMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz}, field={self.field.tag})"

    # arithmetic -------------------------------------------------------
    def _check_field(self, other: SparseMatrix):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        f = self.field
        cols = []
        for a, b in zip(self._cols, other._cols):
            col = dict(a)
            for r, v in b.items():
                s = f(col.get(r, 0) + v)
                if s:
                    col[r] = s
                else:
                    col.pop(r, None)
            cols.append(col)
        return SparseMatrix(self.n_rows, self.n_cols, cols, f, _trusted=True)

    def __neg__(self) -> SparseMatrix:
        return self.scale(-1)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scale(self, c) -> SparseMatrix:
        f = self.field
        c = f(c)
        if not c:
            return SparseMatrix.zero(self.n_rows, self.n_cols, f)
        cols = [{r: f(c * v) for r, v in col.items()} for col in self._cols]
        return SparseMatrix(self.n_rows, self.n_cols, cols, f, _trusted=True)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        return compose(self, other)

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self.n_cols, self.n_rows, self.rows(), self.field, _trusted=True)

    @property
    def T(self) -> SparseMatrix:
        return self.transpose()

    def apply(self, vec: Mapping[int, object]) -> dict[int, object]:
        """Image of a sparse column vector."""
        f = self.field
        out: dict[int, object] = {}
        for j, x in vec.items():
            for r, v in self._cols[j].items():
                out[r] = out.get(r, 0) + x * v
        return {r: f(v) for r, v in out.items() if f(v)}

    def select_columns(self, idx: Sequence[int]) -> SparseMatrix:
        return SparseMatrix(self.n_rows, len(idx), [self._cols[j] for j in idx], self.field, _trusted=True)

    @staticmethod
    def hstack(mats: Sequence[SparseMatrix], n_rows: int | None = None, field: Field | None = None) -> SparseMatrix:
        if not mats:
            return SparseMatrix.zero(n_rows or 0, 0, field or QQ)
        n = mats[0].n_rows
        if any(m.n_rows != n for m in mats):
            raise ShapeError("hstack needs equal row counts")
        cols = [c for m in mats for c in m._cols]
        return SparseMatrix(n, len(cols), cols, mats[0].field, _trusted=True)

    @staticmethod
    def block(blocks: Mapping[tuple[int, int], SparseMatrix], row_sizes: Sequence[int],
              col_sizes: Sequence[int], field: Field = QQ) -> SparseMatrix:
        """Assemble a block matrix; missing blocks are zero."""
        row_off = [0]
        for s in row_sizes:
            row_off.append(row_off[-1] + s)
        col_off = [0]
        for s in col_sizes:
            col_off.append(col_off[-1] + s)
        cols: list[dict] = [dict() for _ in range(col_off[-1])]
        for (bi, bj), m in blocks.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ShapeError(f"block ({bi},{bj}) has shape {m.shape}, expected "
                                 f"{(row_sizes[bi], col_sizes[bj])}")
            ro, co = row_off[bi], col_off[bj]
            for j, col in enumerate(m._cols):
                target = cols[co + j]
                for r, v in col.items():
                    s = field(target.get(ro + r, 0) + v)
                    if s:
                        target[ro + r] = s
                    else:
                        target.pop(ro + r, None)
        return SparseMatrix(row_off[-1], col_off[-1], cols, field, _trusted=True)


def compose(m1: SparseMatrix, m2: SparseMatrix) -> SparseMatrix:
    """The product ``m1 @ m2`` (apply ``m2`` first)."""
    if m1.n_cols != m2.n_rows:
        raise ShapeError(f"cannot compose {m1.shape} with {m2.shape}")
    m1._check_field(m2)
    f = m1.field
    left = m1._cols
    cols = []
    for col in m2._cols:
        acc: dict[int, object] = {}
        for k, x in col.items():
            for r, v in left[k].items():
                acc[r] = acc.get(r, 0) + x * v
        cols.append({r: w for r, v in acc.items() if (w := f(v))})
    return SparseMatrix(m1.n_rows, m2.n_cols, cols, f, _trusted=True)


# elimination ----------------------------------------------------------

def _echelon(vectors: Iterable[Mapping[int, object]], field: Field, limit: int | None = None,
             full: bool = False) -> dict[int, dict[int, object]]:
    """Reduce vectors to echelon form keyed by pivot (the smallest index).

    Each stored vector has leading coefficient 1 at its pivot.  With
    ``full=True`` the result is reduced (pivot columns cleared elsewhere).
    Vectors are processed sparsest first, which keeps fill-in small on the
    block-structured boundary maps this package produces.
    """
    p = field.modulus
    inv = field.inv
    piv: dict[int, dict[int, object]] = {}
    order = sorted(vectors, key=len)
    for vec in order:
        if limit is not None and len(piv) >= limit:
            break
        if not vec:
            continue
        v = dict(vec)
        while v:
            k = min(v)
            row = piv.get(k)
            if row is None:
                break
            c = v[k]
            if p:
                for j, w in row.items():
                    s = (v.get(j, 0) - c * w) % p
                    if s:
                        v[j] = s
                    else:
                        v.pop(j, None)
            else:
                for j, w in row.items():
                    s = v.get(j, 0) - c * w
                    if s:
                        v[j] = s
                    else:
                        v.pop(j, None)
        if not v:
            continue
        k = min(v)
        c = inv(v[k])
        if c != 1:
            v = {j: field(w * c) for j, w in v.items()}
        piv[k] = v
    if full:
        for k in sorted(piv, reverse=True):
            row = piv[k]
            for k2 in piv:
                if k2 < k and k in piv[k2]:
                    other = piv[k2]
                    c = other[k]
                    for j, w in row.items():
                        s = field(other.get(j, 0) - c * w)
                        if s:
                            other[j] = s
                        else:
                            other.pop(j, None)
    if not p:
        for row in piv.values():
            for j, w in row.items():
                if type(w) is not int and w.denominator == 1:
                    row[j] = w.numerator
    return piv


def rref(vectors: Iterable[Mapping[int, object]], field: Field = QQ) -> dict[int, dict[int, object]]:
    """Reduced row echelon basis of the span, keyed by pivot coordinate."""
    return _echelon(vectors, field, full=True)


def rank(m: SparseMatrix) -> int:
    """Dimension of the column space, by exact sparse elimination."""
    if m.n_rows == 0 or m.n_cols == 0:
        return 0
    limit = min(m.n_rows, m.n_cols)
    # eliminate along whichever side has fewer vectors
    vecs = m.columns() if m.n_cols <= m.n_rows else m.rows()
    return len(_echelon(vecs, m.field, limit=limit))


def kernel_dim(m: SparseMatrix) -> int:
    return m.n_cols - rank(m)


def kernel_basis(m: SparseMatrix) -> SparseMatrix:
    """Columns spanning the null space of ``m`` (one per free column)."""
    f = m.field
    red = _echelon(m.rows(), f, full=True)
    pivots = set(red)
    basis = []
    for free in range(m.n_cols):
        if free in pivots:
            continue
        vec = {free: 1}
        for k, row in red.items():
            c = row.get(free)
            if c:
                vec[k] = f(-c)
        basis.append(vec)
    return SparseMatrix(m.n_cols, len(basis), basis, f, _trusted=True)


def _check_vectors(ambient_dim: int, spanning_vectors) -> list[dict[int, object]]:
    out = []
    for v in spanning_vectors:
        if isinstance(v, Mapping):
            if any(not 0 <= i < ambient_dim for i in v):
                raise ShapeError(f"sparse vector index outside ambient dimension {ambient_dim}")
            out.append(v)
        else:
            if len(v) != ambient_dim:
                raise ShapeError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            out.append({i: x for i, x in enumerate(v) if x})
    return out


def quotient_dim(ambient_dim: int, spanning_vectors, field: Field = QQ) -> int:
    """Dimension of ``k^ambient_dim / span(spanning_vectors)``."""
    vecs = [{i: field(x) for i, x in v.items() if field(x)}
            for v in _check_vectors(ambient_dim, spanning_vectors)]
    return ambient_dim - len(_echelon(vecs, field, limit=ambient_dim))


def quotient_basis(ambient_dim: int, spanning_vectors, field: Field = QQ) -> tuple[SparseMatrix, SparseMatrix]:
    """Projection onto and section of the quotient by a span.

    The quotient basis is given by the non-pivot coordinate vectors, so the
    section is a coordinate inclusion and ``projection @ section`` is the
    identity.  When the span is graded by a coordinate parity, the section
    picks homogeneous representatives.
    """
    vecs = [{i: field(x) for i, x in v.items() if field(x)}
            for v in _check_vectors(ambient_dim, spanning_vectors)]
    red = _echelon(vecs, field, full=True)
    free = [j for j in range(ambient_dim) if j not in red]
    slot = {j: i for i, j in enumerate(free)}
    q = len(free)
    proj_cols = []
    for j in range(ambient_dim):
        if j in slot:
            proj_cols.append({slot[j]: 1})
        else:
            # e_j = -sum(row[j'] e_j') modulo the span
            proj_cols.append({slot[i]: field(-c) for i, c in red[j].items() if i != j})
    projection = SparseMatrix(q, ambient_dim, proj_cols, field, _trusted=True)
    section = SparseMatrix(ambient_dim, q, [{j: 1} for j in free], field, _trusted=True)
    return projection, section
