import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlbit.coupling import (
    Alphabet,
    CouplingBlock,
    algebraic_regularity,
    cyclic_shift,
    lattice_member,
    matching_coupling,
    rank_one_coupling,
)
from qlbit.errors import LatticeViolation, NotAlgebraicallyRegular
from qlbit.numerics import GaussianInt


def lattice(q):
    return [GaussianInt(c, d) for c in range(-q, q + 1) for d in range(-q, q + 1) if abs(c) + abs(d) <= q]


def test_rank_one_examples():
    assert np.array_equal(rank_one_coupling(0, 3, 5).entries, np.zeros((3, 5)))
    assert np.array_equal(rank_one_coupling(1, 4, 4).entries, np.full((4, 4), 0.25))
    C = rank_one_coupling(2 - 1j, 2, 8)
    assert np.allclose(C.entries, (2 - 1j) / 4, atol=0)
    rep = algebraic_regularity(C)
    assert abs(rep.sA - 2 * (2 - 1j)) <= 1e-14 and abs(rep.sB - 0.5 * (2 - 1j)) <= 1e-14
    assert abs(2 * rep.sA - 8 * rep.sB) <= 1e-13
    assert abs(rep.effective_l - (2 - 1j)) <= 1e-13 and rep.residual <= 1e-13


@given(st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False),
       st.integers(1, 40), st.integers(1, 40))
def test_rank_one_synchronized_action(l, n, m):
    C = rank_one_coupling(l, n, m).entries
    va, vb = np.full(n, 1 / math.sqrt(n)), np.full(m, 1 / math.sqrt(m))
    scale = 1 + abs(l)
    assert np.linalg.norm(C @ vb - l * va) <= 1e-13 * scale
    assert np.linalg.norm(C.conj().T @ va - np.conj(l) * vb) <= 1e-13 * scale
    assert abs(algebraic_regularity(rank_one_coupling(l, n, m), tol=1e-12 * scale).effective_l - l) <= 1e-13 * scale


def test_matching_examples():
    C = matching_coupling(2 - 1j, 4)
    expected = cyclic_shift(0, 4) + cyclic_shift(1, 4) - 1j * cyclic_shift(2, 4)
    assert np.array_equal(C.entries, expected)
    assert np.all(C.entries.sum(axis=1) == 2 - 1j) and np.all(C.entries.sum(axis=0) == 2 - 1j)
    rep = algebraic_regularity(C)
    assert rep.effective_l == 2 - 1j and rep.residual == 0
    assert np.array_equal(matching_coupling(0, 2).entries, np.zeros((2, 2)))
    with pytest.raises(LatticeViolation):
        matching_coupling(GaussianInt(3, 2), 4)


def test_lattice_member_examples():
    assert lattice_member(GaussianInt(2, 2), 4)
    assert not lattice_member(GaussianInt(3, 2), 4)
    assert lattice_member(GaussianInt(4), 4)
    assert lattice_member(GaussianInt(-3, -1), 4)


def test_exhaustive_lattice_sweep():
    for q in (2, 4, 6):
        for l in lattice(q):
            C = matching_coupling(l, q)
            re, im = C.exact
            assert np.all(np.abs(re) + np.abs(im) <= 1)  # disjoint matchings, entries in mu4-zero
            assert set(np.unique(C.entries)) <= {0, 1, -1, 1j, -1j}
            assert np.all(re.sum(axis=1) == l.c) and np.all(im.sum(axis=1) == l.d)
            assert np.all(re.sum(axis=0) == l.c) and np.all(im.sum(axis=0) == l.d)
            assert algebraic_regularity(C).effective_l == complex(l)
            # Hermitian implication: C^dagger V_A = conj(l) V_B exactly, on the unnormalized ones vector
            ones = np.ones(q, dtype=np.int64)
            assert np.all(re.T @ ones == l.c) and np.all(-im.T @ ones == -l.d)


def test_lattice_bound_is_necessary():
    for q in (2, 3, 4, 6):
        for c in range(-(q + 1), q + 2):
            d = q + 1 - abs(c)
            for l in {GaussianInt(c, d), GaussianInt(c, -d)}:
                with pytest.raises(LatticeViolation):
                    matching_coupling(l, q)


def test_irregular_block_detected():
    C = rank_one_coupling(1, 4, 4).entries.copy()
    C[2, 1] += 0.1
    with pytest.raises(NotAlgebraicallyRegular) as info:
        algebraic_regularity(CouplingBlock(C))
    assert info.value.axis in ("row", "column")
    B = matching_coupling(1 + 1j, 4).entries.copy()
    B[0, 3] = -1
    with pytest.raises(NotAlgebraicallyRegular) as info:
        algebraic_regularity(CouplingBlock(B, Alphabet.MU4_ZERO))
    assert (info.value.axis, info.value.index) == ("row", 0)


def test_mu4_alphabet_enforced():
    with pytest.raises(ValueError):
        CouplingBlock(np.array([[1 + 1j]]), Alphabet.MU4_ZERO)
    with pytest.raises(ValueError):
        CouplingBlock(np.array([[0.5]]), Alphabet.MU4_ZERO)
    C = matching_coupling(1 - 1j, 2)
    assert np.array_equal(C.H.entries, C.entries.conj().T)
    assert np.array_equal(C.H.exact[1], -C.exact[1].T)


def test_edge_count():
    for q in (4, 6):
        for l in lattice(q):
            assert np.count_nonzero(matching_coupling(l, q).entries) == q * (abs(l.c) + abs(l.d))
