"""Off-diagonal coupling blocks and the algebraic regularity check."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import LatticeViolation, NotAlgebraicallyRegular
from .numerics import GaussianInt

CONTINUOUS_REGULARITY_TOL = 1e-12


class Alphabet(enum.Enum):
    CONTINUOUS = "continuous"
    MU4_ZERO = "mu4-zero"


MU4_ZERO = (0, 1, -1, 1j, -1j)


@dataclass(frozen=True, eq=False)
class CouplingBlock:
    """An ``n x m`` coupling block.

    For the ``MU4_ZERO`` alphabet, ``exact`` holds the integer real and
    imaginary parts so row sums can be checked without rounding.
    """

    entries: np.ndarray
    alphabet: Alphabet = Alphabet.CONTINUOUS
    exact: Optional[tuple[np.ndarray, np.ndarray]] = None

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.ndim != 2:
            raise ValueError("coupling entries must be a 2-D array")
        object.__setattr__(self, "entries", e)
        if self.alphabet is Alphabet.MU4_ZERO:
            if self.exact is None:
                re, im = e.real, e.imag
                if not (np.array_equal(re, np.round(re)) and np.array_equal(im, np.round(im))):
                    raise ValueError("mu4-zero block has non-integer entries")
                object.__setattr__(self, "exact", (re.astype(np.int64), im.astype(np.int64)))
            re, im = self.exact
            ok = ((np.abs(re) + np.abs(im)) <= 1)
            if not np.all(ok):
                raise ValueError("entry outside {0, ±1, ±i}")

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def T(self) -> CouplingBlock:
        ex = None if self.exact is None else (self.exact[0].T, self.exact[1].T)
        return CouplingBlock(self.entries.T, self.alphabet, ex)

    @property
    def H(self) -> CouplingBlock:
        ex = None if self.exact is None else (self.exact[0].T, -self.exact[1].T)
        return CouplingBlock(self.entries.conj().T, self.alphabet, ex)

    def __neg__(self) -> CouplingBlock:
        ex = None if self.exact is None else (-self.exact[0], -self.exact[1])
        return CouplingBlock(-self.entries, self.alphabet, ex)


class RegularityReport(NamedTuple):
    sA: complex
    sB: complex
    effective_l: complex
    residual: float


def zero_coupling(n: int, m: int) -> CouplingBlock:
    return CouplingBlock(np.zeros((n, m), dtype=complex))


def rank_one_coupling(l: complex, n: int, m: int) -> CouplingBlock:
    """``C = l * V_A V_B^dagger``: every entry equals ``l / sqrt(n m)``."""
    if n < 1 or m < 1:
        raise ValueError("block sizes must be positive")
    return CouplingBlock(np.full((n, m), complex(l) / math.sqrt(n * m), dtype=complex))


def lattice_member(l, q: int) -> bool:
    """``|Re l| + |Im l| <= q``."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    l = GaussianInt.coerce(l)
    return abs(l.c) + abs(l.d) <= q


def cyclic_shift(j: int, q: int) -> np.ndarray:
    """Permutation matrix with ones at ``(i, i + j mod q)``."""
    p = np.zeros((q, q), dtype=np.int64)
    p[np.arange(q), (np.arange(q) + j) % q] = 1
    return p


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def matching_shifts(l, q: int) -> tuple[list[int], list[int]]:
    """Shift indices carrying the real and imaginary parts of ``l``."""
    l = GaussianInt.coerce(l)
    if not lattice_member(l, q):
        raise LatticeViolation(f"|{l.c}| + |{l.d}| = {abs(l.c) + abs(l.d)} > q = {q}")
    a, b = abs(l.c), abs(l.d)
    return list(range(a)), list(range(a, a + b))


def matching_coupling(l, q: int) -> CouplingBlock:
    """Balanced ``q x q`` block over ``{0, ±1, ±i}`` with row and column sums ``l``.

    ``|c|`` disjoint cyclic shifts carry ``sign(c)`` and the next ``|d|``
    carry ``i*sign(d)``, where ``l = c + d i``.
    """
    if q < 1:
        raise ValueError("q must be positive")
    l = GaussianInt.coerce(l)
    real_shifts, imag_shifts = matching_shifts(l, q)
    re = np.zeros((q, q), dtype=np.int64)
    im = np.zeros((q, q), dtype=np.int64)
    for j in real_shifts:
        re += _sign(l.c) * cyclic_shift(j, q)
    for j in imag_shifts:
        im += _sign(l.d) * cyclic_shift(j, q)
    return CouplingBlock(re + 1j * im, Alphabet.MU4_ZERO, (re, im))


def algebraic_regularity(C: CouplingBlock, tol: float | None = None) -> RegularityReport:
    """Check constant row and column sums; report the effective scalar coupling.

    ``tol`` defaults to 1e-12 for continuous blocks and 0 (exact integer
    arithmetic) for ``MU4_ZERO`` blocks.
    """
    n, m = C.shape
    if C.alphabet is Alphabet.MU4_ZERO and tol in (None, 0):
        re, im = C.exact
        rows = (re.sum(axis=1), im.sum(axis=1))
        cols = (re.sum(axis=0), im.sum(axis=0))
        for axis, (sr, si) in (("row", rows), ("column", cols)):
            # blame the first sum that differs from the most common one
            keys, counts = np.unique(np.column_stack([sr, si]), axis=0, return_counts=True)
            ref = keys[np.argmax(counts)]
            bad = np.flatnonzero((sr != ref[0]) | (si != ref[1]))
            if bad.size:
                raise NotAlgebraicallyRegular(
                    f"{axis} {int(bad[0])} sum differs from the common {axis} sum", axis, int(bad[0])
                )
        sA = complex(int(rows[0][0]), int(rows[1][0]))
        sB = complex(int(cols[0][0]), int(cols[1][0]))
        return RegularityReport(sA, sB, sA * math.sqrt(n / m), 0.0)

    tol = CONTINUOUS_REGULARITY_TOL if tol is None else tol
    row_sums = C.entries.sum(axis=1)
    col_sums = C.entries.sum(axis=0)
    sA, sB = complex(row_sums.mean()), complex(col_sums.mean())
    dev_rows = np.abs(row_sums - sA)
    dev_cols = np.abs(col_sums - sB)
    for axis, dev in (("row", dev_rows), ("column", dev_cols)):
        worst = int(np.argmax(dev))
        if dev[worst] > tol:
            raise NotAlgebraicallyRegular(
                f"{axis} {worst} sum deviates by {dev[worst]:.3g} > {tol:g}", axis, worst
            )
    residual = float(max(dev_rows.max(), dev_cols.max()))
    return RegularityReport(sA, sB, sA * math.sqrt(n / m), residual)
