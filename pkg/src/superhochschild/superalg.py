"""Finite-dimensional associative unital superalgebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from enum import IntEnum
from itertools import product
from typing import Iterable, Mapping, Sequence

from .exactlin import QQ, Field, SparseMatrix, rank

__all__ = [
    "Parity",
    "AxiomError",
    "Violation",
    "ValidationReport",
    "SuperAlgebra",
    "SuperVector",
    "validate",
    "multiply",
    "graded_tensor",
    "supercommutator",
    "supercommutator_span_dim",
    "sign",
]


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__

    def __str__(self):
        return self.name.lower()


def sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class AxiomError(ValueError):
    """An algebra or bimodule fails its axioms where validity is required."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(report.summary())


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple
    detail: str = ""

    def __str__(self):
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind}({idx})" + (f": {self.detail}" if self.detail else "")


@dataclass
class ValidationReport:
    subject: str
    violations: list[Violation] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, *indices, detail: str = ""):
        self.violations.append(Violation(kind, tuple(indices), detail))

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: valid"
        lines = [f"{self.subject}: {len(self.violations)} violation(s)"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)

    def raise_if_invalid(self):
        if not self.ok:
            raise AxiomError(self)


def _clean(vec: Mapping[int, object], f: Field) -> dict[int, object]:
    out = {}
    for k, c in vec.items():
        c = f(c)
        if c:
            out[k] = c
    return out


def _add_into(acc: dict, vec: Mapping[int, object], coeff, f: Field):
    for k, c in vec.items():
        s = f(acc.get(k, 0) + coeff * c)
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


class SuperAlgebra:
    """An associative unital superalgebra with a fixed homogeneous basis.

    ``products[(i, j)]`` is the sparse expansion ``{k: mu_ij^k}`` of
    ``e_i * e_j``; absent keys are zero products.  Construction does not
    check the axioms; call :func:`validate`.
    """

    def __init__(self, name: str, labels: Sequence[str], parities: Sequence[int],
                 unit: Sequence[object] | Mapping[int, object],
                 products: Mapping[tuple[int, int], Mapping[int, object]], field: Field = QQ):
        if len(labels) != len(parities):
            raise ValueError("labels and parities differ in length")
        self.name = name
        self.labels = tuple(labels)
        self.parities = tuple(Parity(int(p)) for p in parities)
        self.field = field
        n = len(self.labels)
        if isinstance(unit, Mapping):
            unit_vec = dict(unit)
        else:
            if len(unit) != n:
                raise ValueError(f"unit has {len(unit)} coefficients for dimension {n}")
            unit_vec = {i: c for i, c in enumerate(unit)}
        if any(not 0 <= i < n for i in unit_vec):
            raise ValueError("unit index out of range")
        self.unit = _clean(unit_vec, field)
        table = {}
        for (i, j), terms in products.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in terms):
                raise ValueError(f"product index out of range at ({i}, {j})")
            t = _clean(terms, field)
            if t:
                table[(i, j)] = t
        self.products = table

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.dim

    def __repr__(self):
        return f"SuperAlgebra({self.name!r}, dim={self.dim}, field={self.field.tag})"

    def _key(self):
        return (self.labels, self.parities, self.field,
                tuple(sorted(self.unit.items())),
                tuple(sorted((ij, tuple(sorted(t.items()))) for ij, t in self.products.items())))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SuperAlgebra):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def mul(self, i: int, j: int) -> Mapping[int, object]:
        return self.products.get((i, j), {})

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def basis_vector(self, i: int | str) -> "SuperVector":
        if isinstance(i, str):
            i = self.index(i)
        return SuperVector(self, {i: 1})

    def __getitem__(self, label):
        return self.basis_vector(label)

    def one(self) -> "SuperVector":
        return SuperVector(self, self.unit)

    def vector(self, coeffs) -> "SuperVector":
        return SuperVector(self, coeffs)

    def even_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.parities) if p == Parity.EVEN]

    def over(self, field: Field) -> "SuperAlgebra":
        """The same structure constants read in another field."""
        if field == self.field:
            return self
        return SuperAlgebra(self.name, self.labels, self.parities,
                            {k: field(c) for k, c in self.unit.items()},
                            {ij: {k: field(c) for k, c in t.items()} for ij, t in self.products.items()},
                            field)

    def structure_matrix(self, i: int) -> SparseMatrix:
        """Left multiplication by ``e_i`` as a matrix."""
        return SparseMatrix(self.dim, self.dim, [self.mul(i, j) for j in range(self.dim)], self.field)


class SuperVector:
    """A coefficient vector in the basis of an algebra or bimodule."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space, coeffs):
        self.space = space
        n = space.dim
        if not isinstance(coeffs, Mapping):
            if len(coeffs) != n:
                raise ValueError(f"vector of length {len(coeffs)} in a space of dimension {n}")
            coeffs = {i: c for i, c in enumerate(coeffs)}
        elif any(not 0 <= i < n for i in coeffs):
            raise ValueError("coefficient index out of range")
        self.coeffs = _clean(coeffs, space.field)

    def __eq__(self, other):
        if not isinstance(other, SuperVector):
            return NotImplemented
        return self.space == other.space and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        labels = self.space.labels
        return " + ".join(f"{c}*{labels[i]}" for i, c in sorted(self.coeffs.items()))

    def dense(self) -> list:
        return [self.coeffs.get(i, 0) for i in range(self.space.dim)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "SuperVector") -> "SuperVector":
        _same_space(self, other)
        acc = dict(self.coeffs)
        _add_into(acc, other.coeffs, 1, self.space.field)
        return SuperVector(self.space, acc)

    def __neg__(self):
        return SuperVector(self.space, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        if isinstance(scalar, SuperVector):
            return NotImplemented
        s = self.space.field(scalar)
        return SuperVector(self.space, {i: s * c for i, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, SuperVector):
            return multiply(self, other)
        return self.__rmul__(other)

    def parity(self) -> Parity | None:
        """Parity of a nonzero homogeneous vector; ``None`` otherwise."""
        ps = {self.space.parities[i] for i in self.coeffs}
        return ps.pop() if len(ps) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.parity() is not None

    def homogeneous_parts(self) -> dict[Parity, "SuperVector"]:
        parts: dict[Parity, dict] = {}
        for i, c in self.coeffs.items():
            parts.setdefault(self.space.parities[i], {})[i] = c
        return {p: SuperVector(self.space, v) for p, v in parts.items()}


def _same_space(x: SuperVector, y: SuperVector):
    if x.space is not y.space and x.space != y.space:
        raise ValueError(f"vectors live in different spaces: {x.space!r} vs {y.space!r}")


def multiply(x: SuperVector, y: SuperVector) -> SuperVector:
    """Bilinear extension of the structure constants."""
    _same_space(x, y)
    A = x.space
    f = A.field
    acc: dict = {}
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            t = A.products.get((i, j))
            if t:
                _add_into(acc, t, a * b, f)
    return SuperVector(A, acc)


def supercommutator(x: SuperVector, y: SuperVector) -> SuperVector:
    """``xy - (-1)^{|x||y|} yx`` on homogeneous parts, extended bilinearly."""
    _same_space(x, y)
    result = SuperVector(x.space, {})
    for px, xh in x.homogeneous_parts().items():
        for py, yh in y.homogeneous_parts().items():
            result = result + multiply(xh, yh) - sign(px * py) * multiply(yh, xh)
    return result


def supercommutator_span_dim(A: SuperAlgebra) -> int:
    """Rank of the span of all basis supercommutators."""
    cols = []
    n = A.dim
    for i, j in product(range(n), repeat=2):
        cols.append(supercommutator(A.basis_vector(i), A.basis_vector(j)).coeffs)
    return rank(SparseMatrix(n, len(cols), cols, A.field))


def validate(A: SuperAlgebra) -> ValidationReport:
    """Exhaustive check of parity homogeneity, associativity and the unit laws."""
    rep = ValidationReport(f"algebra {A.name}")
    f = A.field
    n = A.dim
    par = A.parities
    for (i, j), terms in sorted(A.products.items()):
        for k in terms:
            if par[k] != par[i] + par[j]:
                rep.add("parity", i, j, k, detail=f"{A.labels[i]}*{A.labels[j]} has a component on {A.labels[k]}")
    for i, j, k in product(range(n), repeat=3):
        left: dict = {}
        for l, c in A.mul(i, j).items():
            _add_into(left, A.mul(l, k), c, f)
        right: dict = {}
        for l, c in A.mul(j, k).items():
            _add_into(right, A.mul(i, l), c, f)
        if left != right:
            rep.add("associativity", i, j, k,
                    detail=f"({A.labels[i]}{A.labels[j]}){A.labels[k]} != {A.labels[i]}({A.labels[j]}{A.labels[k]})")
    if not A.unit:
        rep.add("unit", detail="unit vector is zero")
    for i in A.unit:
        if par[i] != Parity.EVEN:
            rep.add("unit-parity", i, detail=f"unit has a component on odd {A.labels[i]}")
    for x in range(n):
        lhs: dict = {}
        rhs: dict = {}
        for u, c in A.unit.items():
            _add_into(lhs, A.mul(u, x), c, f)
            _add_into(rhs, A.mul(x, u), c, f)
        if lhs != {x: 1}:
            rep.add("unit-left", x, detail=f"1*{A.labels[x]} != {A.labels[x]}")
        if rhs != {x: 1}:
            rep.add("unit-right", x, detail=f"{A.labels[x]}*1 != {A.labels[x]}")
    return rep


def graded_tensor(A: SuperAlgebra, B: SuperAlgebra, name: str | None = None) -> SuperAlgebra:
    """``A ⊗ B`` with ``(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa' ⊗ bb'``."""
    if A.field != B.field:
        raise ValueError("algebras over different fields")
    validate(A).raise_if_invalid()
    validate(B).raise_if_invalid()
    f = A.field
    nb = B.dim
    labels = [f"{a}⊗{b}" for a in A.labels for b in B.labels]
    parities = [pa + pb for pa in A.parities for pb in B.parities]
    unit = {}
    for i, c in A.unit.items():
        for j, d in B.unit.items():
            unit[i * nb + j] = c * d
    products = {}
    for (i, i2), ta in A.products.items():
        for (j, j2), tb in B.products.items():
            s = sign(B.parities[j] * A.parities[i2])
            terms = {}
            for k, c in ta.items():
                for l, d in tb.items():
                    terms[k * nb + l] = s * c * d
            products[(i * nb + j, i2 * nb + j2)] = terms
    return SuperAlgebra(name or f"{A.name}⊗{B.name}", labels, parities, unit, products, f)
