import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from acbm.errors import Singular
from acbm.linalg import (
    LinearSystem,
    RowReducer,
    SpanSolver,
    in_span,
    invert,
    nullspace,
    rank_of,
    signature,
)
from acbm.sampling import unimodular
from acbm.tensor import eq, identity, tensor

scalars = st.integers(min_value=-6, max_value=6)


def test_row_reducer_rank_and_rejection_of_dependent_rows():
    r = RowReducer(3)
    assert r.add([1, 2, 3])
    assert r.add([0, 1, 1])
    assert not r.add([1, 3, 4])  # sum of the first two
    assert r.rank == 2


def test_row_reducer_nullspace_annihilates_added_rows():
    r = RowReducer(4)
    rows = [[1, 0, 2, -1], [0, 1, 1, 1]]
    for row in rows:
        r.add([mpq(x) for x in row])
    null = r.nullspace()
    assert len(null) == 2
    for v in null:
        for row in rows:
            assert sum(mpq(a) * b for a, b in zip(row, v)) == 0


def test_nullspace_of_full_rank_square_system_is_trivial():
    assert nullspace([[1, 0], [1, 1]], 2) == []


def test_linear_system_particular_and_nullspace():
    sys_ = LinearSystem(3)
    sys_.add_equation([1, 1, 0], 3)
    sys_.add_equation([0, 1, 1], 5)
    assert sys_.consistent
    part = sys_.particular()
    null = sys_.nullspace()
    assert len(null) == 1
    for coeffs, rhs in (([1, 1, 0], 3), ([0, 1, 1], 5)):
        assert sum(mpq(c) * x for c, x in zip(coeffs, part)) == rhs
        assert sum(mpq(c) * x for c, x in zip(coeffs, null[0])) == 0


def test_linear_system_detects_inconsistency():
    sys_ = LinearSystem(2)
    sys_.add_equation([1, 1], 1)
    sys_.add_equation([2, 2], 3)
    assert not sys_.consistent


def test_linear_system_untouched_columns_and_pin():
    sys_ = LinearSystem(3)
    sys_.add_equation([1, 0, 0], 2)
    assert sys_.untouched_columns() == [1, 2]
    sys_.pin(1)
    sys_.pin(2)
    assert sys_.particular() == [mpq(2), mpq(0), mpq(0)]
    assert sys_.nullspace() == []


def test_span_solver_reproduces_coefficients():
    basis = [[1, 0, 1], [0, 2, 0]]
    sp = SpanSolver(basis)
    coeffs = sp.solve([3, -4, 3])
    assert coeffs is not None
    combo = [
        sum(c * mpq(b[i]) for c, b in zip(coeffs, basis)) for i in range(3)
    ]
    assert combo == [mpq(3), mpq(-4), mpq(3)]
    assert sp.solve([1, 0, 0]) is None
    assert sp.contains([2, 2, 2])
    assert not sp.contains([0, 0, 1])


def test_rank_and_span_helpers():
    assert rank_of([[1, 0], [0, 1], [1, 1]]) == 2
    ok, coeffs = in_span([2, 2], [[1, 0], [0, 1]])
    assert ok and coeffs == [mpq(2), mpq(2)]
    ok, coeffs = in_span([1, 1, 1], [[1, 0, 0]])
    assert not ok and coeffs is None


@given(st.integers(min_value=0, max_value=10**6))
def test_invert_recovers_identity_on_unimodular_matrices(seed):
    m = unimodular(4, seed)
    mi = invert(m)
    assert eq(tensor(np.dot(m, mi), (4, 4)), identity(4))


def test_invert_raises_on_singular_input():
    with pytest.raises(Singular):
        invert(tensor([[1, 2], [2, 4]], (2, 2)))


def test_signature_on_diagonal_forms():
    g = tensor([[1, 0, 0], [0, -1, 0], [0, 0, 0]], (3, 3))
    assert signature(g) == (1, 1, 1)


def test_signature_handles_zero_diagonal_blocks():
    # hyperbolic plane: no nonzero diagonal entry to pivot on
    g = tensor([[0, 1], [1, 0]], (2, 2))
    assert signature(g) == (1, 1, 0)


@given(st.integers(min_value=0, max_value=10**6))
def test_signature_is_a_congruence_invariant(seed):
    g = tensor([[1, 0, 0], [0, -1, 0], [0, 0, 1]], (3, 3))
    p = unimodular(3, seed)
    moved = tensor(np.dot(p.T, np.dot(g, p)), (3, 3))
    assert signature(moved) == (2, 1, 0)
