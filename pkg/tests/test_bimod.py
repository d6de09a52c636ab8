import pytest
from hypothesis import given, settings, strategies as st

from superhochschild.bimod import (
    GradedBimodule,
    coefficient_bimodule,
    direct_sum,
    regular_bimodule,
    tensor_ground,
    tensor_over,
    validate_bimodule,
)
from superhochschild.builders import (
    catalog_algebras,
    column_module,
    free_left_module,
    free_right_module,
    ground_field,
    matrix_superalgebra,
    row_module,
    standard_matrix_context,
)
from superhochschild.exactlin import QQ, compose, SparseMatrix
from superhochschild.superalg import AxiomError
from oracles import balanced_tensor_dim

CATALOG = catalog_algebras()
M11 = CATALOG["matrix-super:1,1"]
C1 = CATALOG["clifford1"]
COL, ROW = column_module(1, 1, A=M11), row_module(1, 1, A=M11)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_regular_bimodule_valid(name):
    assert validate_bimodule(regular_bimodule(CATALOG[name])).ok


def test_column_module_valid():
    assert validate_bimodule(COL).ok and validate_bimodule(ROW).ok


def test_compatibility_violation_listed():
    k = ground_field()
    good = GradedBimodule("p", C1, k, C1.labels, C1.parities, C1.products, {(0, 0): {0: 1}, (1, 0): {1: 1}})
    assert validate_bimodule(good).ok
    # k acts on ε by 2 instead of 1: breaks the unit and (1 m) k = 1 (m k) on one triple
    bad = GradedBimodule("bad", C1, k, C1.labels, C1.parities, C1.products, {(0, 0): {0: 1}, (1, 0): {1: 2}})
    rep = validate_bimodule(bad)
    assert ("compatibility", (1, 0, 0)) in {(v.kind, v.indices) for v in rep.violations}
    assert ("right-unit", (1,)) in {(v.kind, v.indices) for v in rep.violations}


def test_tensor_ground_examples():
    PQ = tensor_ground(COL, ROW)
    assert PQ.dim == 4 and validate_bimodule(PQ).ok
    k = ground_field()
    kM = tensor_ground(regular_bimodule(k), ROW)
    assert kM.dim == ROW.dim


@pytest.mark.parametrize("M,N,dim", [
    (COL, ROW, 4),
    (ROW, COL, 1),
    (regular_bimodule(M11), regular_bimodule(M11), 4),
    (regular_bimodule(C1), regular_bimodule(C1), 2),
])
def test_tensor_over_examples(M, N, dim):
    T = tensor_over(M, N)
    assert T.dim == dim == balanced_tensor_dim(M, N)
    assert validate_bimodule(T.module).ok
    assert T.dim <= M.dim * N.dim
    assert compose(T.projection, T.relations).is_zero()
    assert compose(T.projection, T.section) == SparseMatrix.identity(T.dim)


def test_unit_algebra_tensor_identifies_module():
    for M in (COL, regular_bimodule(C1)):
        left = tensor_over(regular_bimodule(M.left), M)
        right = tensor_over(M, regular_bimodule(M.right))
        assert left.dim == right.dim == M.dim
        # a·[1⊗m] = [1⊗a·m], with 1 the (possibly multi-term) unit of the left algebra
        def unit_class(m):
            out = {}
            for u, c in M.left.unit.items():
                for y, d in left.cls(u, m).items():
                    out[y] = out.get(y, 0) + c * d
            return out

        for a in range(M.left.dim):
            for m in range(M.dim):
                acted = {}
                for x, c in unit_class(m).items():
                    for y, d in left.module.act_left(a, x).items():
                        acted[y] = acted.get(y, 0) + c * d
                expect = {}
                for m2, c in M.act_left(a, m).items():
                    for y, d in unit_class(m2).items():
                        expect[y] = expect.get(y, 0) + c * d
                assert {k: v for k, v in acted.items() if v} == {k: v for k, v in expect.items() if v}


def test_coefficient_bimodule_dims():
    ctx = standard_matrix_context(1, 1)
    assert coefficient_bimodule(ctx.P, 2, ctx.Q).dim == 4
    R = regular_bimodule(C1)
    for n in range(3):
        C = coefficient_bimodule(R, n, R)
        assert C.dim == 2 * 2 ** n * 2
        assert validate_bimodule(C).ok


def test_coefficient_bimodule_n0_matches_tensor_ground():
    ctx = standard_matrix_context(1, 1)
    a, b = coefficient_bimodule(ctx.P, 0, ctx.Q), tensor_ground(ctx.P, ctx.Q)
    assert a.left_action == b.left_action and a.right_action == b.right_action
    assert list(a.parities) == list(b.parities)


def test_direct_sum_and_free_modules():
    for r in (1, 2):
        assert validate_bimodule(free_right_module(C1, r)).ok
        assert validate_bimodule(free_left_module(M11, r)).ok
    D = direct_sum([COL, COL])
    assert D.dim == 4 and validate_bimodule(D).ok


def test_tensor_over_rejects_mismatch():
    with pytest.raises(ValueError):
        tensor_over(COL, COL)


def test_invalid_inputs_rejected_by_tensor_ground():
    k = ground_field()
    bad = GradedBimodule("bad", C1, k, C1.labels, C1.parities, C1.products, {(0, 0): {0: 1}, (1, 0): {1: 2}})
    with pytest.raises(AxiomError):
        tensor_ground(bad, free_right_module(C1, 1))


PAIRS = [
    (COL, ROW), (ROW, COL),
    (regular_bimodule(C1), free_left_module(C1, 2)),
    (free_right_module(M11, 2), COL),
    (regular_bimodule(CATALOG["dual-odd"]), regular_bimodule(CATALOG["dual-odd"])),
]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(PAIRS))
def test_balanced_tensor_parity_additive(pair):
    M, N = pair
    T = tensor_over(M, N)
    rep = validate_bimodule(T.module)
    assert not [v for v in rep.violations if "parity" in v.kind]
    assert T.dim == balanced_tensor_dim(M, N)


def test_matrix_context_balanced_dims():
    for p, q in [(1, 0), (1, 1), (2, 1)]:
        ctx = standard_matrix_context(p, q)
        assert ctx.balanced_dims() == ((p + q) ** 2, 1)
    A = matrix_superalgebra(1, 1, QQ)
    assert A == M11
