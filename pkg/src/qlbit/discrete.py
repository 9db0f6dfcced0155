"""Exact balanced discrete Hermitian realizations over Z[i].

A Gaussian-rational ratio ``r = z/w`` is realized at ``lam = 0`` with
``tau = |z|^2``: the coupling is ``l = w conj(z)``, the diagonal degrees are
``kA = |z|^2`` and ``kB = |w|^2``, and the gap is ``delta = |z|^2 + |w|^2``.
All blocks are ``q x q`` with ``q`` even: circulant regular graphs on the
diagonal and a cyclic-shift matching block over ``{0, ±1, ±i}`` between.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .assembly import BlockOperator, assemble
from .coupling import Alphabet, CouplingBlock, algebraic_regularity, matching_coupling, matching_shifts
from .design import CouplingClass
from .errors import DegreeOutOfRange, ExactCheckFailed, LatticeViolation, ParityViolation
from .graphs import circulant_offsets, circulant_regular, verify_regular
from .numerics import GaussianInt, GaussianRational, state_from_ratio

DENSE_VERIFY_CAP = 256


@dataclass(frozen=True)
class DiscreteDesign:
    z: GaussianInt
    w: GaussianInt
    q: int
    lam: int = 0

    @property
    def tau(self) -> int:
        return self.z.norm()

    @property
    def l(self) -> GaussianInt:
        return self.w * self.z.conjugate()

    @property
    def kA(self) -> int:
        return self.z.norm()

    @property
    def kB(self) -> int:
        return self.w.norm()

    @property
    def delta(self) -> int:
        return self.z.norm() + self.w.norm()

    @property
    def ratio(self) -> GaussianRational:
        return GaussianRational(self.z, self.w)

    def target_state(self, global_phase: float = 0.0):
        return state_from_ratio(complex(self.ratio), global_phase)


def minimal_even_q(l, kA: int, kB: int) -> int:
    """Smallest even ``q`` with ``l`` in the lattice and ``max(kA, kB) <= q - 1``."""
    l = GaussianInt.coerce(l)
    q = max(abs(l.c) + abs(l.d), kA + 1, kB + 1, 1)
    return q + (q % 2)


def _eigen_identities(z: GaussianInt, w: GaussianInt, l: GaussianInt, kA: int, kB: int):
    # block components of H (w 1, z 1) at lam = 0
    return kA * w - l * z, kB * z - l.conjugate() * w


def discrete_design_from_ratio(z, w, q: Optional[int] = None) -> DiscreteDesign:
    z, w = GaussianInt.coerce(z), GaussianInt.coerce(w)
    if not z or not w:
        raise ValueError("z and w must be nonzero Gaussian integers")
    l, kA, kB = w * z.conjugate(), z.norm(), w.norm()
    if q is None:
        q = minimal_even_q(l, kA, kB)
    _check_admissible(l, kA, kB, q)
    top, bottom = _eigen_identities(z, w, l, kA, kB)
    if top or bottom:
        raise ExactCheckFailed(f"eigen identities fail: {top}, {bottom}")
    return DiscreteDesign(z, w, int(q))


def _check_admissible(l: GaussianInt, kA: int, kB: int, q: int):
    if q < 1 or q % 2:
        raise ParityViolation(f"balanced designs need an even positive q, got {q}")
    if abs(l.c) + abs(l.d) > q:
        raise LatticeViolation(f"l = {l} is outside the lattice for q = {q}")
    if max(kA, kB) > q - 1:
        raise DegreeOutOfRange(f"degrees ({kA}, {kB}) exceed q - 1 = {q - 1}")


def projective_distance(r1, r2) -> float:
    """Chordal distance between ratios on CP^1; ``None`` or ``inf`` is the point at infinity."""
    inf1, inf2 = _is_infinite(r1), _is_infinite(r2)
    if inf1 and inf2:
        return 0.0
    if inf1 or inf2:
        finite = complex(r2 if inf1 else r1)
        return 1.0 / math.hypot(1.0, abs(finite))
    a, b = complex(r1), complex(r2)
    if max(abs(a), abs(b)) < 1e150:
        return abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))
    # points near infinity: hypot avoids overflowing the squares
    return abs(a - b) / math.hypot(1.0, abs(a)) / math.hypot(1.0, abs(b))


def _is_infinite(r) -> bool:
    if r is None:
        return True
    if isinstance(r, GaussianRational):
        return False
    return cmath.isinf(complex(r))


class ApproximationResult(NamedTuple):
    target: complex
    approx: GaussianRational
    projective_error: float
    design: DiscreteDesign


def _first_quadrant(N: int) -> np.ndarray:
    """Gaussian integers ``c + d i`` with ``c > 0, d >= 0`` and norm ``<= N``."""
    s = math.isqrt(N)
    c, d = np.meshgrid(np.arange(1, s + 1), np.arange(0, s + 1), indexing="ij")
    c, d = c.ravel(), d.ravel()
    keep = c * c + d * d <= N
    return np.column_stack([c[keep], d[keep]]).astype(np.int64)


def approximate_ratio(target, epsilon: float, max_norm: int = 1 << 40) -> ApproximationResult:
    """Deterministic Gaussian-rational approximation with an exact discrete design.

    Sweeps denominators ``w`` (one per unit class) with ``|w|^2 <= N`` and
    takes ``z`` as the nearest Gaussian integer to ``target * w``. ``N``
    doubles until some candidate is within ``epsilon``; among those, the one
    with smallest ``q``, then smallest error, then smallest ``w`` wins.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if isinstance(target, GaussianRational):
        design = discrete_design_from_ratio(target.num, target.den)
        return ApproximationResult(complex(target), target, 0.0, design)
    t = complex(target)
    if t == 0 or not cmath.isfinite(t):
        raise ValueError("target ratio must be finite and nonzero")

    N = 1
    while N <= max_norm:
        ws = _first_quadrant(N)
        wc, wd = ws[:, 0], ws[:, 1]
        tw = t * (wc + 1j * wd)
        zc, zd = np.round(tw.real).astype(np.int64), np.round(tw.imag).astype(np.int64)
        ok = (zc != 0) | (zd != 0)
        wc, wd, zc, zd = wc[ok], wd[ok], zc[ok], zd[ok]
        approx = (zc + 1j * zd) / (wc + 1j * wd)
        err = np.abs(approx - t) / np.sqrt((1 + np.abs(approx) ** 2) * (1 + abs(t) ** 2))
        hit = np.flatnonzero(err < epsilon)
        if hit.size:
            lc = wc * zc + wd * zd
            ld = wd * zc - wc * zd
            q = np.maximum.reduce([np.abs(lc) + np.abs(ld), zc * zc + zd * zd + 1, wc * wc + wd * wd + 1])
            q = q + (q % 2)
            order = np.lexsort((wd[hit], wc[hit], wc[hit] ** 2 + wd[hit] ** 2, err[hit], q[hit]))
            j = hit[order[0]]
            z = GaussianInt(int(zc[j]), int(zd[j]))
            w = GaussianInt(int(wc[j]), int(wd[j]))
            design = discrete_design_from_ratio(z, w)
            return ApproximationResult(t, GaussianRational(z, w), float(err[j]), design)
        N *= 2
    raise RuntimeError(f"no approximation within {epsilon} up to |w|^2 <= {max_norm}")


class DiscreteVerification(NamedTuple):
    passed: bool
    method: str
    q: int
    top: GaussianInt
    bottom: GaussianInt


def _verify_structural(d: DiscreteDesign):
    """Exact regularity from the circulant generators, without dense matrices."""
    q = d.q
    for k in (d.kA, d.kB):
        offsets = circulant_offsets(q, k)
        closed = {(-o) % q for o in offsets} == set(offsets)
        if len(offsets) != k or 0 in offsets or not closed:
            raise ExactCheckFailed(f"circulant generator for degree {k} is not {k}-regular")
    real_shifts, imag_shifts = matching_shifts(d.l, q)
    shifts = real_shifts + imag_shifts
    if len(set(shifts)) != len(shifts) or any(not 0 <= j < q for j in shifts):
        raise ExactCheckFailed("matchings are not disjoint cyclic shifts")
    sign = lambda x: (x > 0) - (x < 0)
    row_sum = GaussianInt(sign(d.l.c) * len(real_shifts), sign(d.l.d) * len(imag_shifts))
    if row_sum != d.l:
        raise ExactCheckFailed(f"matching row sum {row_sum} != l = {d.l}")
    # circulants: every row and column sum equals the generator sum
    return d.kA, d.kB, row_sum


def _verify_dense(d: DiscreteDesign):
    q = d.q
    A = circulant_regular(q, d.kA).adjacency
    B = circulant_regular(q, d.kB).adjacency
    if verify_regular(A) != d.kA or verify_regular(B) != d.kB:
        raise ExactCheckFailed("diagonal blocks are not regular of the design degree")
    C = matching_coupling(d.l, q)
    report = algebraic_regularity(C, tol=0)
    if report.sA != complex(d.l) or report.sB != complex(d.l):
        raise ExactCheckFailed(f"coupling sums {report.sA}, {report.sB} != l = {d.l}")
    cre, cim = C.exact
    one = np.ones(q, dtype=np.int64)
    z, w = d.z, d.w
    # H psi with psi = (w 1, z 1), split into real/imag integer parts
    top_re = A @ (w.c * one) - (cre @ (z.c * one) - cim @ (z.d * one))
    top_im = A @ (w.d * one) - (cre @ (z.d * one) + cim @ (z.c * one))
    bot_re = B @ (z.c * one) - (cre.T @ (w.c * one) + cim.T @ (w.d * one))
    bot_im = B @ (z.d * one) - (cre.T @ (w.d * one) - cim.T @ (w.c * one))
    for part in (top_re, top_im, bot_re, bot_im):
        if np.any(part != part[0]):
            raise ExactCheckFailed("H psi is not block constant")
    return GaussianInt(int(top_re[0]), int(top_im[0])), GaussianInt(int(bot_re[0]), int(bot_im[0]))


def exact_verify_discrete(d: DiscreteDesign, dense: Optional[bool] = None) -> DiscreteVerification:
    """Verify ``H (w 1_q, z 1_q) = 0`` with zero arithmetic error.

    The dense path multiplies the integer matrices; the structural path
    (default above ``q = 256``) checks the circulant and matching generators
    and then the two block identities ``kA w - l z`` and ``kB z - conj(l) w``.
    """
    _check_admissible(d.l, d.kA, d.kB, d.q)
    if dense is None:
        dense = d.q <= DENSE_VERIFY_CAP
    if dense:
        top, bottom = _verify_dense(d)
        method = "dense"
    else:
        kA, kB, l = _verify_structural(d)
        top, bottom = _eigen_identities(d.z, d.w, l, kA, kB)
        method = "structural"
    if top or bottom:
        raise ExactCheckFailed(f"H psi = ({top}, {bottom}) != 0")
    return DiscreteVerification(True, method, d.q, top, bottom)


def discrete_operator(d: DiscreteDesign, lam_shift: float = 0.0) -> BlockOperator:
    """Dense Hermitian operator of a discrete design; optionally shifted by ``lam_shift * I``."""
    A = circulant_regular(d.q, d.kA)
    B = circulant_regular(d.q, d.kB)
    op = assemble(CouplingClass.HERMITIAN, A, B, matching_coupling(d.l, d.q))
    return op.shifted(lam_shift) if lam_shift else op


def basis_state_operator(q: int, kA: int = 0, kB: int = 0) -> BlockOperator:
    """Decoupled operator (``l = 0``); ``|0>`` and ``|1>`` are exact eigenvectors."""
    A = circulant_regular(q, kA)
    B = circulant_regular(q, kB)
    C = CouplingBlock(np.zeros((q, q), dtype=complex), Alphabet.MU4_ZERO)
    return assemble(CouplingClass.HERMITIAN, A, B, C)
