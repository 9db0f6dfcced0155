import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlbit.errors import DegreeOutOfRange, NotRegular, NotSymmetric, ParityViolation, SelfLoop
from qlbit.graphs import circulant_offsets, circulant_regular, verify_regular, weighted_regular_block


def test_circulant_examples():
    g = circulant_regular(6, 3)
    assert set(g.offsets) == {1, 5, 3}  # {±1, 3} mod 6
    assert np.all(g.adjacency.sum(axis=1) == 3)
    assert np.array_equal(circulant_regular(4, 0).adjacency, np.zeros((4, 4)))
    with pytest.raises(ParityViolation):
        circulant_regular(5, 3)
    with pytest.raises(DegreeOutOfRange):
        circulant_regular(4, 4)
    with pytest.raises(DegreeOutOfRange):
        circulant_regular(4, -1)


def test_verify_regular_examples():
    k4 = np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
    assert verify_regular(k4) == 3
    p3 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    with pytest.raises(NotRegular):
        verify_regular(p3)
    assert verify_regular(circulant_regular(8, 5).adjacency) == 5


def test_verify_regular_rejections():
    with pytest.raises(NotSymmetric):
        verify_regular(np.array([[0, 1], [0, 0]]))
    with pytest.raises(SelfLoop):
        verify_regular(np.array([[1, 0], [0, 1]]))
    with pytest.raises(NotRegular):
        verify_regular(np.array([[0, 2], [2, 0]]))
    with pytest.raises(NotRegular):
        verify_regular(np.zeros((2, 3)))


def test_round_trip_all_even_q():
    for q in range(2, 33, 2):
        for k in range(q):
            g = circulant_regular(q, k)
            assert verify_regular(g.adjacency) == k
            assert g.ones_eigen_residual <= 1e-13


@given(st.integers(1, 60), st.data())
def test_generated_graphs_are_regular(q, data):
    k = data.draw(st.integers(0, q - 1))
    if (q * k) % 2:
        with pytest.raises(ParityViolation):
            circulant_offsets(q, k)
        return
    g = circulant_regular(q, k)
    a = g.adjacency
    assert np.array_equal(a, a.T) and not np.any(np.diag(a))
    assert verify_regular(a) == k
    assert len(g.offsets) == k
    assert g.ones_eigen_residual <= 1e-13


@given(st.integers(2, 20), st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_weighted_block_has_ones_eigenvector(q, k):
    A = weighted_regular_block(k, q)
    v = np.ones(q)
    assert np.allclose(A @ v, k * v, atol=1e-12 * (1 + abs(k)))
    if k.imag == 0:
        assert np.array_equal(A, A.T)
