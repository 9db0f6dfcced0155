"""Reduced 2x2 synchronized blocks and their realization formulas.

Every coupling class reduces on the synchronized subspace to

    M = [[kA, -lA],
         [-lB, kB]]

and the functions here choose ``(kA, kB, lA, lB)`` so that ``(1, r)`` is an
eigenvector with eigenvalue ``lam`` and the other eigenvalue is
``lam + delta``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    BasisStateError,
    ClassInvariantViolation,
    DegenerateRatio,
    NonzeroGapImpossible,
    ObstructionViolated,
)
from .numerics import (
    REALITY_TOL,
    GaussianInt,
    GaussianRational,
    Ratio,
    TargetState,
    check_ratio,
    is_plus_minus_i,
    phase_classify,
    ratio_from_state,
)


class CouplingClass(enum.Enum):
    COMPLEX_SYMMETRIC = "complex-symmetric"
    REAL_SYM_COMPLEX_DETUNING = "real-coupling"
    HERMITIAN = "hermitian"
    ASYMMETRIC_COMMON_K = "asymmetric"
    GENERALIZED = "generalized"

    @classmethod
    def parse(cls, name) -> CouplingClass:
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for member in cls:
            if key in (member.value, member.name.lower().replace("_", "-")):
                return member
        raise ValueError(f"unknown coupling class {name!r}")

    @property
    def symmetric(self) -> bool:
        return self in (CouplingClass.COMPLEX_SYMMETRIC, CouplingClass.REAL_SYM_COMPLEX_DETUNING)


@dataclass(frozen=True)
class SpectralSpec:
    """Target eigenvalue ``lam`` and signed offset ``delta`` of the second one."""

    lam: float
    delta: float

    def __post_init__(self):
        for name in ("lam", "delta"):
            value = getattr(self, name)
            if isinstance(value, complex):
                if value.imag != 0:
                    raise ValueError(f"{name} must be real")
                value = value.real
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def second(self) -> float:
        return self.lam + self.delta

    def require_gap(self):
        if self.delta == 0:
            raise ValueError("prescribed-gap realizations need delta != 0")


@dataclass(frozen=True)
class DesignParams:
    """Effective scalars of the synchronized block for one coupling class.

    ``tau`` is the auxiliary real parameter of the construction (``tauA`` in
    the generalized class, where ``tau_b`` holds ``tauB``); it is ``None``
    where the construction has none.
    """

    cls: CouplingClass
    kA: complex
    kB: complex
    lA: complex
    lB: complex
    tau: Optional[float] = None
    tau_b: Optional[float] = None

    def __post_init__(self):
        for name in ("kA", "kB", "lA", "lB"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    def validate(self):
        """Raise :class:`ClassInvariantViolation` if the class structure fails."""
        cls = self.cls
        if cls is CouplingClass.COMPLEX_SYMMETRIC:
            if self.kA.imag != 0 or self.kB.imag != 0:
                raise ClassInvariantViolation("complex-symmetric class needs real kA, kB")
            if self.lA != self.lB:
                raise ClassInvariantViolation("complex-symmetric class needs lA == lB")
        elif cls is CouplingClass.REAL_SYM_COMPLEX_DETUNING:
            if self.lA != self.lB or self.lA.imag != 0:
                raise ClassInvariantViolation("real-coupling class needs lA == lB real")
        elif cls is CouplingClass.HERMITIAN:
            if self.kA.imag != 0 or self.kB.imag != 0:
                raise ClassInvariantViolation("hermitian class needs real kA, kB")
            if self.lB != self.lA.conjugate():
                raise ClassInvariantViolation("hermitian class needs lB == conj(lA)")
        elif cls is CouplingClass.ASYMMETRIC_COMMON_K:
            if self.kA != self.kB:
                raise ClassInvariantViolation("asymmetric class needs kA == kB")
        return self


@dataclass(frozen=True)
class EffectiveBlock:
    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def from_matrix(cls, m) -> EffectiveBlock:
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    @property
    def trace(self) -> complex:
        return self.m11 + self.m22

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21

    def params(self, cls: CouplingClass) -> DesignParams:
        """Read the effective scalars back off the block (no validation)."""
        return DesignParams(cls, self.m11, self.m22, -self.m12, -self.m21)


def reduce(p: DesignParams) -> EffectiveBlock:
    """The synchronized block ``[[kA, -lA], [-lB, kB]]`` of ``p``."""
    p.validate()
    return EffectiveBlock(p.kA, -p.lA, -p.lB, p.kB)


class Eig2(NamedTuple):
    eigenvalues: tuple[complex, complex]
    eigenvectors: np.ndarray  # columns, aligned with eigenvalues
    defective: bool


def _phase_fix(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    for x in v:
        if abs(x) > 1e-14:
            return v * (abs(x) / x)
    return v


def _kernel_vector(m: np.ndarray, lam: complex) -> np.ndarray:
    a, b = m[0, 0] - lam, m[0, 1]
    c, d = m[1, 0], m[1, 1] - lam
    v1 = np.array([b, -a])
    v2 = np.array([-d, c])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    return v


def eig2(m, defect_tol: float = 1e-13) -> Eig2:
    """Closed-form eigenpairs of a 2x2 block.

    Eigenvalues are sorted by (real, imag). Eigenvectors are unit norm with
    the first nonzero component real and positive. A non-diagonalizable
    block sets ``defective`` and returns the single eigenvector twice.
    """
    if isinstance(m, EffectiveBlock):
        m = m.matrix
    m = np.asarray(m, dtype=complex)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    mean = (a + d) / 2
    half = (a - d) / 2
    s = cmath.sqrt(half * half + b * c)
    lams = sorted((mean + s, mean - s), key=lambda z: (z.real, z.imag))
    scale = max(np.abs(m).max(), 1e-300)

    if abs(b) == 0 and abs(c) == 0:
        # diagonal: eigenvectors are the coordinate axes
        e = np.eye(2, dtype=complex)
        pairs = sorted([(a, e[:, 0]), (d, e[:, 1])], key=lambda t: (t[0].real, t[0].imag))
        return Eig2((complex(pairs[0][0]), complex(pairs[1][0])),
                    np.column_stack([pairs[0][1], pairs[1][1]]), False)

    if abs(s) <= defect_tol * scale:
        lam = complex(mean)
        v = _phase_fix(_kernel_vector(m, lam))
        return Eig2((lam, lam), np.column_stack([v, v]), True)

    vecs = [_phase_fix(_kernel_vector(m, lam)) for lam in lams]
    return Eig2((complex(lams[0]), complex(lams[1])), np.column_stack(vecs), False)


def eigen_residual(block: EffectiveBlock, r: complex, lam: float) -> float:
    """``||M (1, r) - lam (1, r)||`` for a synchronized block."""
    v = np.array([1.0, complex(r)], dtype=complex)
    return float(np.linalg.norm(block.matrix @ v - lam * v))


def _float_ratio(r: Ratio) -> complex:
    return complex(check_ratio(r))


def realize_complex_symmetric(r: Ratio, spec: SpectralSpec, tol: float = REALITY_TOL) -> DesignParams:
    """Complex-symmetric coupling ``l`` with real detunings ``kA, kB``.

    Requires ``r**2`` real and ``r != ±i``.
    """
    r = check_ratio(r)
    spec.require_gap()
    flags = phase_classify(r, tol)
    if not flags.r_squared_real:
        raise ObstructionViolated(f"r = {complex(r):.6g} has r^2 not real", locus="r^2 not real")
    if is_plus_minus_i(r, tol):
        raise DegenerateRatio("r = ±i: 1 + r^-2 = 0, no nonzero gap is reachable")
    r = _float_ratio(r)
    r2 = (r * r).real
    tau = spec.delta / (1.0 + 1.0 / r2)
    lcoup = tau / r
    return DesignParams(
        CouplingClass.COMPLEX_SYMMETRIC,
        kA=spec.lam + tau,
        kB=spec.lam + tau / r2,
        lA=lcoup,
        lB=lcoup,
        tau=tau,
    ).validate()


def realize_real_coupling(r: Ratio, spec: SpectralSpec, tol: float = REALITY_TOL) -> DesignParams:
    """Real symmetric coupling ``l`` with complex detunings ``kA, kB``.

    Requires ``r + 1/r`` real and, for a nonzero gap, ``r != ±i``.
    """
    r = check_ratio(r)
    spec.require_gap()
    flags = phase_classify(r, tol)
    if not flags.r_plus_inverse_real:
        raise ObstructionViolated(
            f"r = {complex(r):.6g} has r + 1/r not real", locus="r + 1/r not real"
        )
    if is_plus_minus_i(r, tol):
        raise NonzeroGapImpossible("r = ±i forces delta = l (r + 1/r) = 0")
    r = _float_ratio(r)
    lcoup = spec.delta / (r + 1.0 / r).real
    return DesignParams(
        CouplingClass.REAL_SYM_COMPLEX_DETUNING,
        kA=spec.lam + lcoup * r,
        kB=spec.lam + lcoup / r,
        lA=lcoup,
        lB=lcoup,
    ).validate()


def realize_hermitian(r: Ratio, spec: SpectralSpec) -> DesignParams:
    """Hermitian coupling: realizes every nonzero ``r``."""
    r = _float_ratio(r)
    spec.require_gap()
    mod2 = abs(r) ** 2
    tau = spec.delta / (1.0 + 1.0 / mod2)
    lcoup = tau / r
    return DesignParams(
        CouplingClass.HERMITIAN,
        kA=spec.lam + tau,
        kB=spec.lam + tau / mod2,
        lA=lcoup,
        lB=lcoup.conjugate(),
        tau=tau,
    ).validate()


def realize_hermitian_from_amplitudes(s: TargetState, spec: SpectralSpec) -> DesignParams:
    """The unique Hermitian block with eigenpairs ``(lam, psi)``, ``(lam+delta, psi_perp)``."""
    ratio_from_state(s)  # rejects basis states
    spec.require_gap()
    w1, w2 = s.omega1, s.omega2
    lcoup = spec.delta * w1 * w2.conjugate()
    return DesignParams(
        CouplingClass.HERMITIAN,
        kA=spec.lam + spec.delta * abs(w2) ** 2,
        kB=spec.lam + spec.delta * abs(w1) ** 2,
        lA=lcoup,
        lB=lcoup.conjugate(),
        tau=spec.delta * abs(w2) ** 2,
    ).validate()


def realize_asymmetric_common_k(r: Ratio, spec: SpectralSpec) -> DesignParams:
    """Directed couplings ``lA = tau/r``, ``lB = tau*r`` with ``kA = kB``."""
    r = _float_ratio(r)
    spec.require_gap()
    tau = spec.delta / 2
    k = spec.lam + tau
    return DesignParams(
        CouplingClass.ASYMMETRIC_COMMON_K, kA=k, kB=k, lA=tau / r, lB=tau * r, tau=tau
    ).validate()


def realize_generalized(r: Ratio, spec: SpectralSpec, tau_a: float) -> DesignParams:
    """Directed couplings with detuning; ``tau_a`` splits the gap ``delta``."""
    r = _float_ratio(r)
    spec.require_gap()
    tau_a = float(tau_a)
    if not math.isfinite(tau_a):
        raise ValueError("tau_a must be finite")
    tau_b = spec.delta - tau_a
    return DesignParams(
        CouplingClass.GENERALIZED,
        kA=spec.lam + tau_a,
        kB=spec.lam + tau_b,
        lA=tau_a / r,
        lB=tau_b * r,
        tau=tau_a,
        tau_b=tau_b,
    ).validate()


def realize(cls: CouplingClass, r: Ratio, spec: SpectralSpec, tau_a: Optional[float] = None,
            tol: float = REALITY_TOL) -> DesignParams:
    """Dispatch to the realization formula of ``cls``."""
    cls = CouplingClass.parse(cls)
    if cls is CouplingClass.COMPLEX_SYMMETRIC:
        return realize_complex_symmetric(r, spec, tol)
    if cls is CouplingClass.REAL_SYM_COMPLEX_DETUNING:
        return realize_real_coupling(r, spec, tol)
    if cls is CouplingClass.HERMITIAN:
        return realize_hermitian(r, spec)
    if cls is CouplingClass.ASYMMETRIC_COMMON_K:
        return realize_asymmetric_common_k(r, spec)
    if tau_a is None:
        raise ValueError("the generalized class needs an explicit tau_a")
    return realize_generalized(r, spec, tau_a)


def realize_zero_gap(cls: CouplingClass, r: Ratio, lam: float, scale: float = 1.0,
                     tol: float = REALITY_TOL) -> DesignParams:
    """Zero-gap realization at ``r = ±i`` for the two symmetric classes.

    Both synchronized eigenvalues equal ``lam`` and the block is a Jordan
    block, so :func:`eig2` reports it as defective. ``scale`` is the free
    real parameter (``tau`` for complex-symmetric, ``l`` for real coupling).
    """
    cls = CouplingClass.parse(cls)
    if not cls.symmetric:
        raise ValueError(f"{cls.value} has no degenerate zero-gap endpoint")
    r = check_ratio(r)
    if not is_plus_minus_i(r, tol):
        raise ValueError("zero-gap constructions are only defined at r = ±i")
    if scale == 0:
        raise ValueError("scale must be nonzero")
    r = 1j if _float_ratio(r).imag > 0 else -1j  # snap to ±i exactly
    lam = float(lam)
    if cls is CouplingClass.COMPLEX_SYMMETRIC:
        tau = float(scale)
        lcoup = tau / r
        return DesignParams(cls, kA=lam + tau, kB=lam - tau, lA=lcoup, lB=lcoup,
                            tau=tau).validate()
    lcoup = float(scale)
    return DesignParams(cls, kA=lam + lcoup * r, kB=lam + lcoup / r, lA=lcoup,
                        lB=lcoup).validate()


class VerdictKind(enum.Enum):
    REALIZABLE = "Realizable"
    OBSTRUCTED = "Obstructed"
    DEGENERATE_ONLY = "DegenerateOnly"


class Verdict(NamedTuple):
    kind: VerdictKind
    locus: Optional[str] = None

    @property
    def realizable(self) -> bool:
        return self.kind is VerdictKind.REALIZABLE


def taxonomy_verdict(cls: CouplingClass, r: Ratio, tol: float = REALITY_TOL) -> Verdict:
    """Whether ``r`` is realizable with a prescribed nonzero gap in ``cls``."""
    cls = CouplingClass.parse(cls)
    r = check_ratio(r)
    if not cls.symmetric:
        return Verdict(VerdictKind.REALIZABLE)
    flags = phase_classify(r, tol)
    if cls is CouplingClass.COMPLEX_SYMMETRIC and not flags.r_squared_real:
        return Verdict(VerdictKind.OBSTRUCTED, "r^2 not real")
    if cls is CouplingClass.REAL_SYM_COMPLEX_DETUNING and not flags.r_plus_inverse_real:
        return Verdict(VerdictKind.OBSTRUCTED, "r + 1/r not real")
    if is_plus_minus_i(r, tol):
        return Verdict(VerdictKind.DEGENERATE_ONLY, "r = ±i (zero gap only)")
    return Verdict(VerdictKind.REALIZABLE)


def taxonomy_verdict_from_square(cls: CouplingClass, r_squared) -> Verdict:
    """Exact verdict for a ratio known only through ``r^2`` in ``Q(i)``.

    Covers quadratic ratios such as ``e^{i pi/4}`` (``r^2 = i``). Both loci
    depend on ``r`` only through ``rho = r^2``: ``r^2`` real is ``Im rho = 0``,
    and ``r + 1/r`` is real iff ``(r + 1/r)^2 = rho + 1/rho + 2`` is a
    nonnegative real. ``r = ±i`` is ``rho = -1``.
    """
    cls = CouplingClass.parse(cls)
    rho = r_squared if isinstance(r_squared, GaussianRational) else GaussianRational(GaussianInt.coerce(r_squared))
    if not rho:
        raise BasisStateError("r = 0 is a basis state")
    if not cls.symmetric:
        return Verdict(VerdictKind.REALIZABLE)
    if cls is CouplingClass.COMPLEX_SYMMETRIC and not rho.is_real():
        return Verdict(VerdictKind.OBSTRUCTED, "r^2 not real")
    if cls is CouplingClass.REAL_SYM_COMPLEX_DETUNING:
        s = rho + GaussianRational(GaussianInt(1)) / rho + GaussianRational(GaussianInt(2))
        num, den = s.real_part
        if not s.is_real() or num * den < 0:
            return Verdict(VerdictKind.OBSTRUCTED, "r + 1/r not real")
    if rho == GaussianRational(GaussianInt(-1)):
        return Verdict(VerdictKind.DEGENERATE_ONLY, "r = ±i (zero gap only)")
    return Verdict(VerdictKind.REALIZABLE)


def magic_state(which: str) -> TargetState:
    """The benchmark states ``|H>`` and ``|T>``."""
    key = str(which).upper()
    if key == "H":
        return TargetState(math.cos(math.pi / 8), math.sin(math.pi / 8))
    if key == "T":
        return TargetState(1 / math.sqrt(2), cmath.exp(1j * math.pi / 4) / math.sqrt(2))
    raise ValueError(f"unknown magic state {which!r}; expected 'H' or 'T'")
