"""Catalog of superalgebras, bimodules and Morita contexts used as test inputs."""

from __future__ import annotations

from dataclasses import dataclass

from .bimod import GradedBimodule, direct_sum, regular_bimodule, tensor_over, validate_bimodule
from .exactlin import QQ, Field
from .superalg import Parity, SuperAlgebra, ValidationReport, graded_tensor, validate

__all__ = [
    "MoritaContext",
    "ground_field",
    "matrix_superalgebra",
    "clifford1",
    "dual_numbers",
    "column_module",
    "row_module",
    "free_right_module",
    "free_left_module",
    "standard_matrix_context",
    "self_context",
    "clifford1_squared",
    "catalog_algebras",
    "algebra_builtin",
    "context_builtin",
    "ALGEBRA_BUILTINS",
    "CONTEXT_BUILTINS",
]


def ground_field(field: Field = QQ) -> SuperAlgebra:
    return SuperAlgebra("k", ["1"], [0], [1], {(0, 0): {0: 1}}, field)


def _block(i: int, p: int) -> int:
    return 0 if i < p else 1


def matrix_superalgebra(p: int, q: int, field: Field = QQ) -> SuperAlgebra:
    """``M_{p|q}``: matrix units ``E_ij`` with parity ``block(i) + block(j)``."""
    n = p + q
    if p < 0 or q < 0 or n == 0:
        raise ValueError("matrix superalgebra needs p + q >= 1")
    idx = lambda i, j: i * n + j  # noqa: E731
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    parities = [(_block(i, p) + _block(j, p)) % 2 for i in range(n) for j in range(n)]
    products = {(idx(i, j), idx(j, l)): {idx(i, l): 1}
                for i in range(n) for j in range(n) for l in range(n)}
    unit = {idx(i, i): 1 for i in range(n)}
    return SuperAlgebra(f"M_{{{p}|{q}}}", labels, parities, unit, products, field)


def clifford1(field: Field = QQ) -> SuperAlgebra:
    """``k[ε]/(ε² - 1)`` with ``ε`` odd."""
    if field.characteristic == 2:
        raise ValueError("clifford1 is not a useful sign test in characteristic 2")
    return SuperAlgebra("clifford1", ["1", "ε"], [0, 1], [1, 0],
                        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}, field)


def dual_numbers(epsilon_parity: int = Parity.EVEN, field: Field = QQ) -> SuperAlgebra:
    """``k[ε]/(ε²)`` with ``ε`` of the given parity."""
    par = Parity(int(epsilon_parity))
    return SuperAlgebra(f"dual_{par}", ["1", "ε"], [0, par], [1, 0],
                        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, field)


def column_module(p: int, q: int, field: Field = QQ, A: SuperAlgebra | None = None) -> GradedBimodule:
    """Column vectors ``k^{p|q}`` as an ``M_{p|q}``-``k`` bimodule."""
    A = A or matrix_superalgebra(p, q, field)
    k = ground_field(A.field)
    n = p + q
    la = {(i * n + j, j): {i: 1} for i in range(n) for j in range(n)}
    ra = {(i, 0): {i: 1} for i in range(n)}
    return GradedBimodule(f"col^{{{p}|{q}}}", A, k, [f"v{i + 1}" for i in range(n)],
                          [_block(i, p) for i in range(n)], la, ra)


def row_module(p: int, q: int, field: Field = QQ, A: SuperAlgebra | None = None) -> GradedBimodule:
    """Row vectors ``k^{p|q}`` as a ``k``-``M_{p|q}`` bimodule."""
    A = A or matrix_superalgebra(p, q, field)
    k = ground_field(A.field)
    n = p + q
    la = {(0, i): {i: 1} for i in range(n)}
    ra = {(i, i * n + j): {j: 1} for i in range(n) for j in range(n)}
    return GradedBimodule(f"row^{{{p}|{q}}}", k, A, [f"w{i + 1}" for i in range(n)],
                          [_block(i, p) for i in range(n)], la, ra)


def free_right_module(A: SuperAlgebra, rank: int) -> GradedBimodule:
    """``A^{⊕rank}`` as a ``k``-``A`` bimodule (free right ``A``-module)."""
    k = ground_field(A.field)
    left = {(0, m): {m: 1} for m in range(A.dim)}
    summand = GradedBimodule(f"{A.name}.right", k, A, A.labels, A.parities, left, A.products)
    return summand if rank == 1 else direct_sum([summand] * rank, f"{A.name}.right^{rank}")


def free_left_module(A: SuperAlgebra, rank: int) -> GradedBimodule:
    """``A^{⊕rank}`` as an ``A``-``k`` bimodule (free left ``A``-module)."""
    k = ground_field(A.field)
    right = {(m, 0): {m: 1} for m in range(A.dim)}
    summand = GradedBimodule(f"{A.name}.left", A, k, A.labels, A.parities, A.products, right)
    return summand if rank == 1 else direct_sum([summand] * rank, f"{A.name}.left^{rank}")


@dataclass(frozen=True, eq=False)
class MoritaContext:
    """``(A, B, P, Q)`` with ``P`` an A-B and ``Q`` a B-A bimodule."""

    A: SuperAlgebra
    B: SuperAlgebra
    P: GradedBimodule
    Q: GradedBimodule
    note: str = ""

    def __post_init__(self):
        if self.P.left != self.A or self.P.right != self.B:
            raise ValueError("P must be an A-B bimodule")
        if self.Q.left != self.B or self.Q.right != self.A:
            raise ValueError("Q must be a B-A bimodule")

    def validate(self) -> list[ValidationReport]:
        return [validate(self.A), validate(self.B), validate_bimodule(self.P), validate_bimodule(self.Q)]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.validate())

    def balanced_dims(self) -> tuple[int, int]:
        """``(dim P⊗_B Q, dim Q⊗_A P)``."""
        return tensor_over(self.P, self.Q).dim, tensor_over(self.Q, self.P).dim


def standard_matrix_context(p: int, q: int, field: Field = QQ) -> MoritaContext:
    """``A = M_{p|q}``, ``B = k``, ``P`` = columns, ``Q`` = rows."""
    A = matrix_superalgebra(p, q, field)
    P = column_module(p, q, A=A)
    Q = row_module(p, q, A=A)
    return MoritaContext(A, P.right, P, Q, note=f"standard_matrix_context({p},{q})")


def self_context(A: SuperAlgebra) -> MoritaContext:
    validate(A).raise_if_invalid()
    R = regular_bimodule(A)
    return MoritaContext(A, A, R, R, note=f"self_context({A.name})")


def clifford1_squared(field: Field = QQ) -> SuperAlgebra:
    c = clifford1(field)
    return graded_tensor(c, c, "clifford1⊗clifford1")


def catalog_algebras(field: Field = QQ) -> dict[str, SuperAlgebra]:
    """The odd-rich test catalog keyed by builtin name."""
    algs = {
        "field": ground_field(field),
        "dual-even": dual_numbers(Parity.EVEN, field),
        "dual-odd": dual_numbers(Parity.ODD, field),
        "matrix-super:1,1": matrix_superalgebra(1, 1, field),
        "matrix-super:2,1": matrix_superalgebra(2, 1, field),
    }
    if field.characteristic != 2:
        algs["clifford1"] = clifford1(field)
        algs["clifford1-squared"] = clifford1_squared(field)
    return algs


def _pq(arg: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in arg.split(","))
    except ValueError:
        raise ValueError(f"expected 'p,q', got {arg!r}") from None
    return p, q


ALGEBRA_BUILTINS = {
    "field": "ground field k",
    "clifford1": "k[ε]/(ε²-1), ε odd",
    "clifford1-squared": "clifford1 ⊗ clifford1 (graded tensor)",
    "dual-even": "k[ε]/(ε²), ε even",
    "dual-odd": "k[ε]/(ε²), ε odd",
    "matrix-super:p,q": "matrix superalgebra M_{p|q}",
}

CONTEXT_BUILTINS = {
    "matrix:p,q": "(M_{p|q}, k, columns, rows)",
    "self:<algebra>": "(A, A, A, A) for an algebra builtin",
}


def _strip(name: str) -> str:
    return name[len("builtin:"):] if name.startswith("builtin:") else name


def algebra_builtin(name: str, field: Field = QQ) -> SuperAlgebra:
    name = _strip(name)
    if name == "field":
        return ground_field(field)
    if name == "clifford1":
        return clifford1(field)
    if name == "clifford1-squared":
        return clifford1_squared(field)
    if name == "dual-even":
        return dual_numbers(Parity.EVEN, field)
    if name == "dual-odd":
        return dual_numbers(Parity.ODD, field)
    if name.startswith("matrix-super:"):
        return matrix_superalgebra(*_pq(name.split(":", 1)[1]), field)
    raise KeyError(f"unknown algebra builtin {name!r}")


def context_builtin(name: str, field: Field = QQ) -> MoritaContext:
    name = _strip(name)
    if name.startswith("matrix:"):
        return standard_matrix_context(*_pq(name.split(":", 1)[1]), field)
    if name.startswith("self:"):
        return self_context(algebra_builtin(name.split(":", 1)[1], field))
    raise KeyError(f"unknown context builtin {name!r}")
