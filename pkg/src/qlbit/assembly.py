"""Full block operators ``[[A, -X], [-Y, B]]`` and their synchronized restriction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coupling import CouplingBlock, matching_coupling, rank_one_coupling
from .design import CouplingClass, DesignParams, EffectiveBlock
from .errors import ClassInvariantViolation, DimensionMismatch
from .graphs import RegularGraph, weighted_regular_block
from .numerics import TargetState


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """Operator with diagonal blocks ``A``, ``B`` and stored couplings ``X``, ``Y``.

    The assembled matrix holds ``-X`` and ``-Y`` in its off-diagonal blocks.
    """

    A: np.ndarray
    B: np.ndarray
    X: CouplingBlock
    Y: CouplingBlock
    cls: CouplingClass
    full: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[0]

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def hermitian(self) -> bool:
        return self.cls is CouplingClass.HERMITIAN

    @property
    def basis(self) -> SynchronizedBasis:
        return SynchronizedBasis(self.n, self.m)

    def shifted(self, lam: float) -> BlockOperator:
        """Add ``lam * I``; both synchronized eigenvalues move by ``lam``."""
        return BlockOperator(
            self.A + lam * np.eye(self.n), self.B + lam * np.eye(self.m),
            self.X, self.Y, self.cls, self.full + lam * np.eye(self.dim),
        )

    @classmethod
    def from_matrix(cls, full, n: int, m: int, coupling_class=CouplingClass.GENERALIZED) -> BlockOperator:
        """Split a dense matrix back into blocks (the inverse of :func:`assemble`)."""
        full = np.asarray(full, dtype=complex)
        if full.shape != (n + m, n + m):
            raise DimensionMismatch(f"matrix shape {full.shape} does not match n={n}, m={m}")
        return cls(
            full[:n, :n], full[n:, n:],
            CouplingBlock(-full[:n, n:]), CouplingBlock(-full[n:, :n]),
            CouplingClass.parse(coupling_class), full,
        )


@dataclass(frozen=True)
class SynchronizedBasis:
    n: int
    m: int

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def ket0(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[: self.n] = 1 / np.sqrt(self.n)
        return v

    @property
    def ket1(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.n:] = 1 / np.sqrt(self.m)
        return v

    @property
    def matrix(self) -> np.ndarray:
        """``(n+m) x 2`` isometry with columns ``|0>``, ``|1>``."""
        return np.column_stack([self.ket0, self.ket1])

    def project(self, v) -> np.ndarray:
        Q = self.matrix
        return Q @ (Q.conj().T @ v)

    def leakage(self, v) -> float:
        """Norm of the component of ``v`` outside the synchronized subspace."""
        v = np.asarray(v, dtype=complex)
        return float(np.linalg.norm(v - self.project(v)))


def _as_block(M) -> np.ndarray:
    if isinstance(M, RegularGraph):
        M = M.adjacency
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"diagonal block must be square, got shape {M.shape}")
    return M.astype(complex)


def _as_coupling(C) -> CouplingBlock:
    return C if isinstance(C, CouplingBlock) else CouplingBlock(np.asarray(C, dtype=complex))


def assemble(cls, A, B, X, Y=None) -> BlockOperator:
    """Assemble ``[[A, -X], [-Y, B]]`` under the structure of ``cls``.

    Symmetric classes take ``Y = X^T`` and Hermitian takes ``Y = X^dagger``;
    for these ``Y`` must be omitted. The directed classes need ``Y``.
    """
    cls = CouplingClass.parse(cls)
    A, B, X = _as_block(A), _as_block(B), _as_coupling(X)
    n, m = A.shape[0], B.shape[0]
    if X.shape != (n, m):
        raise DimensionMismatch(f"X has shape {X.shape}, expected {(n, m)}")
    if cls.symmetric or cls is CouplingClass.HERMITIAN:
        if Y is not None:
            raise ClassInvariantViolation(f"{cls.value} derives Y from X; do not pass Y")
        Y = X.H if cls is CouplingClass.HERMITIAN else X.T
    elif Y is None:
        raise ClassInvariantViolation(f"{cls.value} needs an explicit lower coupling Y")
    Y = _as_coupling(Y)
    if Y.shape != (m, n):
        raise DimensionMismatch(f"Y has shape {Y.shape}, expected {(m, n)}")
    if cls is CouplingClass.HERMITIAN:
        if not (np.array_equal(A, A.conj().T) and np.array_equal(B, B.conj().T)):
            raise ClassInvariantViolation("hermitian class needs Hermitian diagonal blocks")
    if cls.symmetric:
        if not (np.array_equal(A, A.T) and np.array_equal(B, B.T)):
            raise ClassInvariantViolation("symmetric classes need symmetric diagonal blocks")
    full = np.block([[A, -X.entries], [-Y.entries, B]])
    return BlockOperator(A, B, X, Y, cls, full)


def embed_state(s: TargetState, basis: SynchronizedBasis) -> np.ndarray:
    """``omega1 |0> + omega2 |1>`` in the full space."""
    return s.omega1 * basis.ket0 + s.omega2 * basis.ket1


def restrict_to_sync(op: BlockOperator) -> tuple[EffectiveBlock, float]:
    """Synchronized 2x2 block and the invariance residual of ``S``.

    The residual is ``max ||(I - P_S) R |j>||`` over the two basis kets.
    """
    Q = op.basis.matrix
    RQ = op.full @ Q
    M = Q.conj().T @ RQ
    residual = float(np.linalg.norm(RQ - Q @ M, axis=0).max())
    return EffectiveBlock.from_matrix(M), residual


def operator_from_design(
    p: DesignParams,
    n: int,
    m: Optional[int] = None,
    degree_a: Optional[int] = None,
    degree_b: Optional[int] = None,
) -> BlockOperator:
    """Realize ``p`` with weighted regular diagonal blocks and rank-one couplings."""
    m = n if m is None else m
    A = weighted_regular_block(p.kA, n, degree_a)
    B = weighted_regular_block(p.kB, m, degree_b)
    X = rank_one_coupling(p.lA, n, m)
    if p.cls.symmetric or p.cls is CouplingClass.HERMITIAN:
        return assemble(p.cls, A, B, X)
    Y = rank_one_coupling(p.lB, m, n)
    return assemble(p.cls, A, B, X, Y)


def hermitian_matching_operator(kA: float, kB: float, l, q: int,
                                degree_a: Optional[int] = None,
                                degree_b: Optional[int] = None) -> BlockOperator:
    """Hermitian operator whose coupling is the exact matching block for Gaussian ``l``."""
    A = weighted_regular_block(kA, q, degree_a)
    B = weighted_regular_block(kB, q, degree_b)
    return assemble(CouplingClass.HERMITIAN, A, B, matching_coupling(l, q))
