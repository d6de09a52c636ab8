"""Graded bimodules, their ground-field tensor products and balanced tensor products."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .exactlin import SparseMatrix, quotient_basis
from .superalg import Parity, SuperAlgebra, SuperVector, ValidationReport, _add_into, _clean, validate

__all__ = [
    "GradedBimodule",
    "BalancedTensor",
    "validate_bimodule",
    "regular_bimodule",
    "tensor_ground",
    "tensor_over",
    "coefficient_bimodule",
    "direct_sum",
    "quotient_bimodule",
]


class GradedBimodule:
    """A ``left``-``right`` superbimodule with a homogeneous basis.

    ``left_action[(a, m)]`` expands ``e_a · m_m`` and ``right_action[(m, a)]``
    expands ``m_m · e_a`` in the module basis; absent keys are zero.
    """

    def __init__(self, name: str, left: SuperAlgebra, right: SuperAlgebra,
                 labels: Sequence[str], parities: Sequence[int],
                 left_action: Mapping[tuple[int, int], Mapping[int, object]],
                 right_action: Mapping[tuple[int, int], Mapping[int, object]]):
        if left.field != right.field:
            raise ValueError("left and right algebras live over different fields")
        if len(labels) != len(parities):
            raise ValueError("labels and parities differ in length")
        self.name = name
        self.left = left
        self.right = right
        self.field = left.field
        self.labels = tuple(labels)
        self.parities = tuple(Parity(int(p)) for p in parities)
        n = len(self.labels)
        self.left_action = self._table(left_action, left.dim, n, "left")
        self.right_action = self._table(right_action, n, right.dim, "right")

    def _table(self, table, n1, n2, side):
        n = self.dim
        out = {}
        for (i, j), terms in table.items():
            if not (0 <= i < n1 and 0 <= j < n2) or any(not 0 <= k < n for k in terms):
                raise ValueError(f"{side} action index out of range at ({i}, {j})")
            t = _clean(terms, self.field)
            if t:
                out[(i, j)] = t
        return out

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __repr__(self):
        return f"GradedBimodule({self.name!r}, {self.left.name}-{self.right.name}, dim={self.dim})"

    def _key(self):
        return (self.left, self.right, self.labels, self.parities,
                tuple(sorted((k, tuple(sorted(t.items()))) for k, t in self.left_action.items())),
                tuple(sorted((k, tuple(sorted(t.items()))) for k, t in self.right_action.items())))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GradedBimodule):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def act_left(self, a: int, m: int) -> Mapping[int, object]:
        return self.left_action.get((a, m), {})

    def act_right(self, m: int, a: int) -> Mapping[int, object]:
        return self.right_action.get((m, a), {})

    def basis_vector(self, i: int) -> SuperVector:
        return SuperVector(self, {i: 1})

    def lmul(self, a: SuperVector, m: SuperVector) -> SuperVector:
        acc: dict = {}
        for i, c in a.coeffs.items():
            for j, d in m.coeffs.items():
                _add_into(acc, self.act_left(i, j), c * d, self.field)
        return SuperVector(self, acc)

    def rmul(self, m: SuperVector, a: SuperVector) -> SuperVector:
        acc: dict = {}
        for j, d in m.coeffs.items():
            for i, c in a.coeffs.items():
                _add_into(acc, self.act_right(j, i), c * d, self.field)
        return SuperVector(self, acc)

    def left_matrix(self, a: int) -> SparseMatrix:
        return SparseMatrix(self.dim, self.dim, [self.act_left(a, m) for m in range(self.dim)], self.field)

    def right_matrix(self, a: int) -> SparseMatrix:
        return SparseMatrix(self.dim, self.dim, [self.act_right(m, a) for m in range(self.dim)], self.field)


def _compose_terms(first: Mapping[int, object], then, f) -> dict:
    acc: dict = {}
    for k, c in first.items():
        _add_into(acc, then(k), c, f)
    return acc


def validate_bimodule(M: GradedBimodule) -> ValidationReport:
    """Exhaustive check of the bimodule axioms on basis elements."""
    rep = ValidationReport(f"bimodule {M.name}")
    A, B, f = M.left, M.right, M.field
    pm, pa, pb = M.parities, A.parities, B.parities
    for (a, m), terms in sorted(M.left_action.items()):
        for k in terms:
            if pm[k] != pa[a] + pm[m]:
                rep.add("left-parity", a, m, k)
    for (m, b), terms in sorted(M.right_action.items()):
        for k in terms:
            if pm[k] != pm[m] + pb[b]:
                rep.add("right-parity", m, b, k)
    n = M.dim
    for a, a2, m in product(range(A.dim), range(A.dim), range(n)):
        lhs = _compose_terms(M.act_left(a2, m), lambda k: M.act_left(a, k), f)
        rhs = _compose_terms(A.mul(a, a2), lambda k: M.act_left(k, m), f)
        if lhs != rhs:
            rep.add("left-associativity", a, a2, m)
    for m, b, b2 in product(range(n), range(B.dim), range(B.dim)):
        lhs = _compose_terms(M.act_right(m, b), lambda k: M.act_right(k, b2), f)
        rhs = _compose_terms(B.mul(b, b2), lambda k: M.act_right(m, k), f)
        if lhs != rhs:
            rep.add("right-associativity", m, b, b2)
    for a, m, b in product(range(A.dim), range(n), range(B.dim)):
        lhs = _compose_terms(M.act_left(a, m), lambda k: M.act_right(k, b), f)
        rhs = _compose_terms(M.act_right(m, b), lambda k: M.act_left(a, k), f)
        if lhs != rhs:
            rep.add("compatibility", a, m, b)
    for m in range(n):
        lu: dict = {}
        for u, c in A.unit.items():
            _add_into(lu, M.act_left(u, m), c, f)
        if lu != {m: 1}:
            rep.add("left-unit", m)
        ru: dict = {}
        for u, c in B.unit.items():
            _add_into(ru, M.act_right(m, u), c, f)
        if ru != {m: 1}:
            rep.add("right-unit", m)
    return rep


def _require_valid(*modules: GradedBimodule):
    for M in modules:
        validate_bimodule(M).raise_if_invalid()


def regular_bimodule(A: SuperAlgebra, name: str | None = None) -> GradedBimodule:
    """``A`` as a bimodule over itself."""
    return GradedBimodule(name or f"{A.name}.bimod", A, A, A.labels, A.parities, A.products, A.products)


def direct_sum(modules: Sequence[GradedBimodule], name: str | None = None) -> GradedBimodule:
    """Direct sum of bimodules sharing both algebras; blocks in order."""
    first = modules[0]
    for M in modules[1:]:
        if M.left != first.left or M.right != first.right:
            raise ValueError("direct summands must share their algebras")
    labels, parities, la, ra = [], [], {}, {}
    off = 0
    for s, M in enumerate(modules):
        labels += [f"{lab}#{s}" for lab in M.labels]
        parities += list(M.parities)
        for (a, m), t in M.left_action.items():
            la[(a, m + off)] = {k + off: c for k, c in t.items()}
        for (m, b), t in M.right_action.items():
            ra[(m + off, b)] = {k + off: c for k, c in t.items()}
        off += M.dim
    return GradedBimodule(name or "⊕".join(M.name for M in modules), first.left, first.right,
                          labels, parities, la, ra)


def _end_slot_tensor(name: str, left_mod: GradedBimodule, middle_labels: Sequence[str],
                     middle_parities: Sequence[int], right_mod: GradedBimodule) -> GradedBimodule:
    """``L ⊗ V ⊗ R`` over (left of L, right of R), acting on the end slots only.

    Basis index is row-major in (l, v, r).  No Koszul sign: the left algebra
    only meets the first factor and the right algebra only the last.
    """
    nv, nr = len(middle_labels), right_mod.dim
    labels, parities = [], []
    for l in range(left_mod.dim):
        for v in range(nv):
            for r in range(nr):
                labels.append("⊗".join(x for x in (left_mod.labels[l], middle_labels[v], right_mod.labels[r]) if x))
                parities.append((left_mod.parities[l] + middle_parities[v] + right_mod.parities[r]) % 2)
    stride_l = nv * nr
    la = {}
    for (a, l), t in left_mod.left_action.items():
        for rest in range(stride_l):
            la[(a, l * stride_l + rest)] = {k * stride_l + rest: c for k, c in t.items()}
    ra = {}
    for (r, d), t in right_mod.right_action.items():
        for head in range(left_mod.dim * nv):
            ra[(head * nr + r, d)] = {head * nr + k: c for k, c in t.items()}
    return GradedBimodule(name, left_mod.left, right_mod.right, labels, parities, la, ra)


def tensor_ground(M: GradedBimodule, N: GradedBimodule, name: str | None = None) -> GradedBimodule:
    """``M ⊗ N`` over the ground field, an (M.left)-(N.right) bimodule."""
    if M.field != N.field:
        raise ValueError("modules over different fields")
    _require_valid(M, N)
    return _end_slot_tensor(name or f"{M.name}⊗{N.name}", M, [""], [0], N)


def _tensor_power(A: SuperAlgebra, n: int) -> tuple[list[str], list[int]]:
    labels, parities = [""], [0]
    for _ in range(n):
        labels = [f"{x}⊗{y}" if x else y for x in labels for y in A.labels]
        parities = [(p + q) % 2 for p in parities for q in A.parities]
    return labels, parities


def coefficient_bimodule(P: GradedBimodule, n: int, Q: GradedBimodule,
                         name: str | None = None, check: bool = True) -> GradedBimodule:
    """``P ⊗ B^n ⊗ Q`` with ``B = P.right``, as a (P.left)-(Q.right) bimodule."""
    if n < 0:
        raise ValueError("tensor power must be non-negative")
    B = P.right
    if Q.left != B:
        raise ValueError(f"{Q.name} is not a left module over {B.name}")
    if check:
        _require_valid(P, Q)
    labels, parities = _tensor_power(B, n)
    return _end_slot_tensor(name or f"{P.name}⊗{B.name}^{n}⊗{Q.name}", P, labels, parities, Q)


def quotient_bimodule(ambient: GradedBimodule, relations, name: str) -> tuple[GradedBimodule, SparseMatrix, SparseMatrix]:
    """Quotient of a bimodule by a sub-bimodule spanned by homogeneous relations.

    Returns ``(quotient, projection, section)``; the induced actions are
    ``a·[x] = proj(a · section[x])``.
    """
    f = ambient.field
    proj, sec = quotient_basis(ambient.dim, relations, f)
    reps = [next(iter(sec.column(i))) for i in range(sec.n_cols)]
    labels = [ambient.labels[j] for j in reps]
    parities = [ambient.parities[j] for j in reps]
    la, ra = {}, {}
    for i, j in enumerate(reps):
        for a in range(ambient.left.dim):
            t = ambient.act_left(a, j)
            if t:
                la[(a, i)] = proj.apply(t)
        for b in range(ambient.right.dim):
            t = ambient.act_right(j, b)
            if t:
                ra[(i, b)] = proj.apply(t)
    return (GradedBimodule(name, ambient.left, ambient.right, labels, parities, la, ra), proj, sec)


@dataclass(frozen=True, eq=False)
class BalancedTensor:
    """``M ⊗_B N`` realized as an explicit quotient of ``M ⊗ N``."""

    left_factor: GradedBimodule
    right_factor: GradedBimodule
    ambient: GradedBimodule
    relations: SparseMatrix
    projection: SparseMatrix
    section: SparseMatrix
    module: GradedBimodule

    @property
    def dim(self) -> int:
        return self.module.dim

    def cls(self, m: int, n: int) -> dict:
        """Class of the basis tensor ``m ⊗ n`` in the quotient basis."""
        return dict(self.projection.column(m * self.right_factor.dim + n))


def balanced_relations(M: GradedBimodule, N: GradedBimodule) -> list[dict]:
    """Vectors ``(m·b)⊗n - m⊗(b·n)`` in ``M ⊗ N`` for all basis ``m, b, n``."""
    f = M.field
    nn = N.dim
    rels = []
    for m, b, n in product(range(M.dim), range(M.right.dim), range(nn)):
        vec: dict = {}
        for k, c in M.act_right(m, b).items():
            _add_into(vec, {k * nn + n: 1}, c, f)
        for k, c in N.act_left(b, n).items():
            _add_into(vec, {m * nn + k: 1}, -c, f)
        if vec:
            rels.append(vec)
    return rels


def tensor_over(M: GradedBimodule, N: GradedBimodule, name: str | None = None) -> BalancedTensor:
    """``M ⊗_B N`` for an A-B bimodule ``M`` and a B-C bimodule ``N``."""
    if M.right != N.left:
        raise ValueError(f"middle algebras differ: {M.right.name} vs {N.left.name}")
    ambient = tensor_ground(M, N)
    rels = balanced_relations(M, N)
    name = name or f"{M.name}⊗_{M.right.name}{N.name}"
    module, proj, sec = quotient_bimodule(ambient, rels, name)
    relmat = SparseMatrix(ambient.dim, len(rels), rels, M.field)
    return BalancedTensor(M, N, ambient, relmat, proj, sec, module)
