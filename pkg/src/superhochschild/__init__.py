"""Exact Z/2-graded Hochschild homology and a machine check of its Morita invariance."""

from .bimod import (
    BalancedTensor,
    GradedBimodule,
    coefficient_bimodule,
    direct_sum,
    regular_bimodule,
    tensor_ground,
    tensor_over,
    validate_bimodule,
)
from .builders import (
    MoritaContext,
    clifford1,
    dual_numbers,
    ground_field,
    matrix_superalgebra,
    self_context,
    standard_matrix_context,
)
from .exactlin import GF, QQ, Field, SparseMatrix, compose, kernel_dim, quotient_basis, quotient_dim, rank
from .hochschild import (
    ChainComplex,
    HomologyTable,
    bar_lemma_maps,
    bar_lemma_vanishing,
    bar_lemma_vanishing_dual,
    degeneracy,
    face,
    h0_cross_check,
    hochschild_complex,
    hochschild_homology,
    homology,
)
from .morita import (
    DoubleComplex,
    MoritaReport,
    build_double_complex,
    e2_pages,
    omega,
    row_column_exactness,
    total_complex,
    verify_context,
    verify_morita_invariance,
)
from .superalg import (
    Parity,
    SuperAlgebra,
    SuperVector,
    graded_tensor,
    multiply,
    supercommutator,
    supercommutator_span_dim,
    validate,
)

__version__ = "0.1.0"
