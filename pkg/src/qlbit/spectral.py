"""Full-operator spectra, reducing-subspace checks, and time evolution."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg

from .assembly import BlockOperator, SynchronizedBasis, restrict_to_sync
from .design import SpectralSpec, eig2
from .errors import (
    DimensionMismatch,
    IllConditionedDiagonalization,
    InitialStateNotSynchronized,
    SizeCapExceeded,
    SolverFailure,
)

SIZE_CAP = 512
COLLISION_THRESHOLD = 1e-6
EIGEN_RESIDUAL_TOL = 1e-10
PERTURBATION_TOL = 1e-12
SYNC_TOL = 1e-12
COND_CAP = 1e8


def _matrix(op) -> np.ndarray:
    if isinstance(op, BlockOperator):
        return op.full
    return np.asarray(op, dtype=complex)


def _is_hermitian(op, hermitian: Optional[bool]) -> bool:
    if hermitian is not None:
        return hermitian
    if isinstance(op, BlockOperator):
        return op.hermitian
    M = _matrix(op)
    return bool(np.array_equal(M, M.conj().T))


def opnorm(M) -> float:
    """Spectral norm."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def orthogonal_complement(n: int) -> np.ndarray:
    """Orthonormal basis of the complement of the all-ones direction in C^n.

    Columns 2..n of the Householder reflector sending ``e1`` to ``-1/sqrt(n)``.
    """
    if n == 1:
        return np.zeros((1, 0))
    u = np.full(n, 1 / math.sqrt(n))
    u[0] += 1.0
    H = np.eye(n) - 2.0 * np.outer(u, u) / (u @ u)
    return H[:, 1:]


def perp_basis(n: int, m: int) -> np.ndarray:
    """``(n+m) x (n+m-2)`` isometry onto the orthogonal complement of ``S``."""
    Pa, Pb = orthogonal_complement(n), orthogonal_complement(m)
    Q = np.zeros((n + m, n + m - 2), dtype=complex)
    Q[:n, : n - 1] = Pa
    Q[n:, n - 1:] = Pb
    return Q


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    max_imag: float
    max_residual: float
    sync_eigenvalues: tuple[complex, complex]
    perp_eigenvalues: np.ndarray
    collision_margin: float


def eig_full(op: BlockOperator, cap: int = SIZE_CAP) -> SpectrumReport:
    """Dense eigendecomposition plus the synchronized / complementary split."""
    M = op.full
    if op.dim > cap:
        raise SizeCapExceeded(f"operator dimension {op.dim} exceeds cap {cap}")
    # a class label alone does not make a loaded matrix Hermitian
    hermitian = op.hermitian and np.array_equal(M, M.conj().T)
    try:
        if hermitian:
            evals, evecs = scipy.linalg.eigh(M)
        else:
            evals, evecs = scipy.linalg.eig(M)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverFailure(str(exc)) from exc
    evals = np.asarray(evals, dtype=complex)
    scale = max(opnorm(M), 1e-300)
    residuals = np.linalg.norm(M @ evecs - evecs * evals, axis=0)
    max_residual = float(residuals.max()) if residuals.size else 0.0
    if max_residual > EIGEN_RESIDUAL_TOL * scale:
        raise SolverFailure(f"eigenpair residual {max_residual:.3g} exceeds tolerance")

    Qp = perp_basis(op.n, op.m)
    compressed = Qp.conj().T @ M @ Qp
    if hermitian:
        perp = np.linalg.eigvalsh(compressed).astype(complex)
    else:
        perp = np.linalg.eigvals(compressed)
    block, _ = restrict_to_sync(op)
    sync = eig2(block).eigenvalues
    return SpectrumReport(
        eigenvalues=evals,
        eigenvectors=evecs,
        max_imag=float(np.abs(evals.imag).max()) if evals.size else 0.0,
        max_residual=max_residual,
        sync_eigenvalues=sync,
        perp_eigenvalues=perp,
        collision_margin=_margin(sync, perp),
    )


def _margin(targets, perp) -> float:
    perp = np.asarray(perp, dtype=complex)
    if perp.size == 0:
        return math.inf
    return float(min(np.abs(perp - mu).min() for mu in targets))


def collision_check(report: SpectrumReport, spec: SpectralSpec) -> float:
    """Distance from ``{lam, lam + delta}`` to the complementary spectrum."""
    return _margin((spec.lam, spec.lam + spec.delta), report.perp_eigenvalues)


def multiset_distance(a, b) -> float:
    """Greedy nearest matching of two spectra; ``inf`` if sizes differ."""
    a = list(np.asarray(a, dtype=complex))
    b = np.asarray(b, dtype=complex)
    if len(a) != len(b):
        return math.inf
    used = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for x in sorted(a, key=lambda z: (z.real, z.imag)):
        d = np.abs(b - x)
        d[used] = np.inf
        j = int(np.argmin(d))
        used[j] = True
        worst = max(worst, float(d[j]))
    return worst


class EigenpairCheck(NamedTuple):
    residual: float
    passed: bool


def verify_eigenpair(op, psi, lam: float, tol: float = 1e-11) -> EigenpairCheck:
    """``||R psi - lam psi||``; passes when at most ``tol * (1 + ||R||)``."""
    M = _matrix(op)
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
        raise ValueError("psi must be a unit vector")
    residual = float(np.linalg.norm(M @ psi - lam * psi))
    return EigenpairCheck(residual, residual <= tol * (1.0 + opnorm(M)))


class ReducingNorms(NamedTuple):
    sync_to_perp: float
    perp_to_sync: float


def reducing_check(op: BlockOperator) -> ReducingNorms:
    """Norms of the off-diagonal blocks of ``R`` in the ``S + S^perp`` splitting.

    ``sync_to_perp`` is ``||P_perp R P_S||`` (invariance of ``S``);
    ``perp_to_sync`` is ``||P_S R P_perp||`` (invariance of ``S^perp``).
    """
    Qs = op.basis.matrix
    Qp = perp_basis(op.n, op.m)
    M = op.full
    return ReducingNorms(opnorm(Qp.conj().T @ M @ Qs), opnorm(Qs.conj().T @ M @ Qp))


class Propagator:
    """``psi -> exp(-i t R) psi``, decomposing ``R`` once.

    Hermitian operators use ``eigh``. Others use ``eig`` when the eigenvector
    matrix is well conditioned, else fall back to ``scipy.linalg.expm`` and
    emit :class:`IllConditionedDiagonalization`.
    """

    def __init__(self, op, hermitian: Optional[bool] = None, cond_cap: float = COND_CAP):
        self.M = _matrix(op)
        self.hermitian = _is_hermitian(op, hermitian)
        self.fallback = False
        if self.hermitian:
            self.evals, self.V = np.linalg.eigh(self.M)
            self.Vinv = self.V.conj().T
            return
        evals, V = scipy.linalg.eig(self.M)
        cond = np.linalg.cond(V) if V.size else 1.0
        if not np.isfinite(cond) or cond > cond_cap:
            warnings.warn(
                f"eigenvector condition number {cond:.3g} > {cond_cap:g}; using expm",
                IllConditionedDiagonalization,
                stacklevel=2,
            )
            self.fallback = True
            return
        self.evals, self.V = evals, V
        self.Vinv = np.linalg.inv(V)

    def __call__(self, psi0, t: float) -> np.ndarray:
        psi0 = np.asarray(psi0, dtype=complex)
        if self.fallback:
            return scipy.linalg.expm(-1j * t * self.M) @ psi0
        coeffs = self.Vinv @ psi0
        return self.V @ (np.exp(-1j * t * self.evals) * coeffs)


def evolve(op, psi0, t: float, hermitian: Optional[bool] = None) -> np.ndarray:
    """``exp(-i t R) psi0``."""
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-12:
        raise ValueError("psi0 must be a unit vector")
    return Propagator(op, hermitian)(psi0, t)


@dataclass(frozen=True, eq=False)
class LeakageReport:
    times: np.ndarray
    leakage: np.ndarray
    norms: np.ndarray

    @property
    def max_leakage(self) -> float:
        return float(self.leakage.max()) if self.leakage.size else 0.0


def leakage_scan(op: BlockOperator, psi0, times: Sequence[float],
                 allow_any: bool = False) -> LeakageReport:
    """Track ``||(I - P_S) psi(t)||`` for an initial state in ``S``."""
    basis = op.basis
    psi0 = np.asarray(psi0, dtype=complex)
    initial = basis.leakage(psi0)
    if initial > SYNC_TOL and not allow_any:
        raise InitialStateNotSynchronized(
            f"initial state has {initial:.3g} weight outside the synchronized subspace"
        )
    prop = Propagator(op)
    times = np.asarray(list(times), dtype=float)
    states = [prop(psi0, t) for t in times]
    leakage = np.array([basis.leakage(s) for s in states])
    norms = np.array([np.linalg.norm(s) for s in states])
    return LeakageReport(times, leakage, norms)


class PerturbationReport(NamedTuple):
    preserves: bool
    residuals: tuple[float, float, float, float]


def perturbation_preserves_sync(dA, dB, dX, dY=None, tol: float = PERTURBATION_TOL) -> PerturbationReport:
    """Whether a perturbation leaves the synchronized block untouched.

    Residuals are ``||dA V_A||``, ``||dB V_B||``, ``||dX V_B||`` and
    ``||dY V_A||``, where ``dY`` defaults to ``dX^dagger``.
    """
    dA, dB, dX = (np.asarray(x, dtype=complex) for x in (dA, dB, dX))
    n, m = dA.shape[0], dB.shape[0]
    dY = dX.conj().T if dY is None else np.asarray(dY, dtype=complex)
    if dA.shape != (n, n) or dB.shape != (m, m) or dX.shape != (n, m) or dY.shape != (m, n):
        raise DimensionMismatch("perturbation blocks have incompatible shapes")
    va = np.full(n, 1 / math.sqrt(n))
    vb = np.full(m, 1 / math.sqrt(m))
    res = tuple(float(np.linalg.norm(x)) for x in (dA @ va, dB @ vb, dX @ vb, dY @ va))
    return PerturbationReport(all(x <= tol for x in res), res)


def sync_leakage_of_eigenvectors(report: SpectrumReport, basis: SynchronizedBasis,
                                 targets: Sequence[float], window: float):
    """For each target, the eigenvalues within ``window`` and the leakage of their vectors."""
    out = []
    for mu in targets:
        idx = np.flatnonzero(np.abs(report.eigenvalues - mu) <= window)
        out.append((mu, [basis.leakage(report.eigenvectors[:, j]) for j in idx]))
    return out
