"""Regular diagonal blocks.

Circulant graphs are the canonical generator: on ``Z_q`` connect ``i`` to
``i ± 1, ..., i ± floor(k/2)``, plus the antipode ``i + q/2`` when ``k`` is
odd (which needs ``q`` even).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeOutOfRange, NotRegular, NotSymmetric, ParityViolation, SelfLoop


@dataclass(frozen=True, eq=False)
class RegularGraph:
    q: int
    k: int
    adjacency: np.ndarray
    offsets: tuple = ()

    @property
    def ones_eigen_residual(self) -> float:
        v = np.full(self.q, 1 / np.sqrt(self.q))
        return float(np.linalg.norm(self.adjacency @ v - self.k * v))


def circulant_offsets(q: int, k: int) -> tuple[int, ...]:
    """Connection set (as offsets in ``1..q-1``) of the circulant ``k``-regular graph."""
    if q < 1:
        raise DegreeOutOfRange(f"need q >= 1, got {q}")
    if not 0 <= k <= q - 1:
        raise DegreeOutOfRange(f"degree {k} outside 0..{q - 1}")
    if (q * k) % 2:
        raise ParityViolation(f"q*k = {q * k} is odd; no {k}-regular graph on {q} vertices")
    half = k // 2
    offsets = set(range(1, half + 1)) | {q - j for j in range(1, half + 1)}
    if k % 2:
        offsets.add(q // 2)
    return tuple(sorted(offsets))


def circulant_regular(q: int, k: int) -> RegularGraph:
    offsets = circulant_offsets(q, k)
    first_row = np.zeros(q, dtype=np.int64)
    first_row[list(offsets)] = 1
    idx = (np.arange(q)[None, :] - np.arange(q)[:, None]) % q
    adjacency = first_row[idx]
    return RegularGraph(q, k, adjacency, offsets)


def verify_regular(adjacency) -> int:
    """Return the common degree of a simple undirected graph, or raise."""
    a = np.asarray(adjacency)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotRegular(f"adjacency must be square, got shape {a.shape}")
    if not np.all((a == 0) | (a == 1)):
        raise NotRegular("adjacency entries must be 0 or 1")
    if not np.array_equal(a, a.T):
        raise NotSymmetric("adjacency is not symmetric")
    if np.any(np.diag(a) != 0):
        raise SelfLoop(f"self-loop at vertex {int(np.flatnonzero(np.diag(a))[0])}")
    if a.shape[0] == 0:
        return 0
    degrees = a.sum(axis=1)
    if np.any(degrees != degrees[0]):
        bad = int(np.flatnonzero(degrees != degrees[0])[0])
        raise NotRegular(f"vertex {bad} has degree {int(degrees[bad])}, vertex 0 has {int(degrees[0])}")
    return int(degrees[0])


def default_degree(q: int) -> int:
    """A mid-range admissible degree for ``q`` vertices."""
    k = q // 2
    if (q * k) % 2:
        k -= 1
    return max(k, 0)


def weighted_regular_block(k: complex, q: int, degree: int | None = None) -> np.ndarray:
    """A ``q x q`` block with ``A 1 = k 1`` for arbitrary scalar ``k``.

    Built as a circulant ``degree``-regular graph plus the uniform diagonal
    shift ``(k - degree) I``. Hermitian whenever ``k`` is real.
    """
    if degree is None:
        degree = default_degree(q)
    g = circulant_regular(q, degree)
    k = complex(k)
    dtype = float if k.imag == 0 else complex
    shift = k.real - degree if k.imag == 0 else k - degree
    return g.adjacency.astype(dtype) + shift * np.eye(q, dtype=dtype)
