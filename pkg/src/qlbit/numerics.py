"""Exact Gaussian arithmetic and the state/ratio algebra.

Continuous scalars are plain Python ``complex``. Exact values live in
:class:`GaussianInt` (elements of Z[i]) and :class:`GaussianRational`
(elements of Q(i) stored as an unreduced fraction of Gaussian integers).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

from .errors import BasisStateError

REALITY_TOL = 1e-10
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class GaussianInt:
    """An element ``c + d*i`` of Z[i]; all arithmetic is exact."""

    c: int
    d: int = 0

    def __post_init__(self):
        if not (isinstance(self.c, int) and isinstance(self.d, int)):
            raise TypeError(f"GaussianInt parts must be int, got {self.c!r}, {self.d!r}")

    @classmethod
    def coerce(cls, value) -> GaussianInt:
        """Convert an int, a ``(c, d)`` pair, or an integral complex."""
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a Gaussian integer")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        z = complex(value)
        if z.real != int(z.real) or z.imag != int(z.imag):
            raise ValueError(f"{value!r} is not a Gaussian integer")
        return cls(int(z.real), int(z.imag))

    @classmethod
    def nearest(cls, z: complex) -> GaussianInt:
        """Round each part of ``z`` to the nearest integer."""
        return cls(int(round(z.real)), int(round(z.imag)))

    def conjugate(self) -> GaussianInt:
        return GaussianInt(self.c, -self.d)

    def norm(self) -> int:
        return self.c * self.c + self.d * self.d

    def __complex__(self) -> complex:
        return complex(self.c, self.d)

    def __bool__(self) -> bool:
        return self.c != 0 or self.d != 0

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.c, -self.d)

    def __add__(self, other):
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return GaussianInt(self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return GaussianInt(
            self.c * other.c - self.d * other.d,
            self.c * other.d + self.d * other.c,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self, 1) / other
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self, other)

    def __rtruediv__(self, other):
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return GaussianRational(other, self)

    def __pow__(self, exponent: int) -> GaussianInt:
        if exponent < 0:
            raise ValueError("negative powers leave Z[i]; divide instead")
        result = GaussianInt(1, 0)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        other = _as_gint(other)
        if other is None:
            return NotImplemented
        return self.c == other.c and self.d == other.d

    def __hash__(self):
        return hash((self.c, self.d))

    def __repr__(self):
        return f"GaussianInt({self.c}, {self.d})"

    def __str__(self):
        if self.d == 0:
            return str(self.c)
        if self.c == 0:
            return f"{self.d}i"
        return f"{self.c}{self.d:+d}i"


def _round_div(x: int, n: int) -> int:
    return (2 * x + n) // (2 * n)


def gaussian_gcd(a, b) -> GaussianInt:
    """A greatest common divisor in Z[i] by the Euclidean algorithm (nearest-quotient)."""
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    while b:
        n = b.norm()
        t = a * b.conjugate()
        quot = GaussianInt(_round_div(t.c, n), _round_div(t.d, n))
        a, b = b, a - quot * b
    return a


def _as_gint(value):
    if isinstance(value, GaussianInt):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return GaussianInt(value, 0)
    return None


@dataclass(frozen=True, eq=False)
class GaussianRational:
    """``num / den`` in Q(i); equality is by cross-multiplication."""

    num: GaussianInt
    den: GaussianInt = GaussianInt(1, 0)

    def __post_init__(self):
        object.__setattr__(self, "num", GaussianInt.coerce(self.num))
        object.__setattr__(self, "den", GaussianInt.coerce(self.den))
        if not self.den:
            raise ZeroDivisionError("GaussianRational with zero denominator")

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        return cls(GaussianInt.coerce(value), GaussianInt(1, 0))

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.num.conjugate(), self.den.conjugate())

    def _real_imag_over_norm(self) -> tuple[int, int, int]:
        # num/den = num*conj(den) / |den|^2
        p = self.num * self.den.conjugate()
        return p.c, p.d, self.den.norm()

    @property
    def real_part(self) -> tuple[int, int]:
        """Real part as an exact ``(numerator, denominator)`` integer pair."""
        a, _, n = self._real_imag_over_norm()
        return a, n

    @property
    def imag_part(self) -> tuple[int, int]:
        _, b, n = self._real_imag_over_norm()
        return b, n

    def is_real(self) -> bool:
        return (self.num * self.den.conjugate()).d == 0

    def norm(self) -> tuple[int, int]:
        """``|self|^2`` as an exact ``(numerator, denominator)`` pair."""
        return self.num.norm(), self.den.norm()

    def __bool__(self):
        return bool(self.num)

    def __complex__(self) -> complex:
        a, b, n = self._real_imag_over_norm()
        return complex(a / n, b / n)

    def __neg__(self):
        return GaussianRational(-self.num, self.den)

    def __add__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if exponent < 0:
            return GaussianRational(self.den, self.num) ** (-exponent)
        return GaussianRational(self.num**exponent, self.den**exponent)

    def __eq__(self, other):
        other = _as_grat(other)
        if other is None:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def reduced(self) -> GaussianRational:
        """Lowest terms with the denominator in the first quadrant (``c > 0, d >= 0``)."""
        g = gaussian_gcd(self.num, self.den)
        num, den = _exact_quotient(self.num, g), _exact_quotient(self.den, g)
        # multiply by the unit that rotates den into the first quadrant
        for unit in (GaussianInt(1), GaussianInt(0, 1), GaussianInt(-1), GaussianInt(0, -1)):
            d = den * unit
            if d.c > 0 and d.d >= 0:
                return GaussianRational(num * unit, d)
        raise AssertionError("unreachable: some associate lies in the first quadrant")

    def __hash__(self):
        r = self.reduced()
        return hash((r.num.c, r.num.d, r.den.c, r.den.d))

    def __repr__(self):
        return f"GaussianRational({self.num!r}, {self.den!r})"

    def __str__(self):
        return f"({self.num})/({self.den})"


def _exact_quotient(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    t, n = a * b.conjugate(), b.norm()
    if t.c % n or t.d % n:
        raise ArithmeticError(f"{b} does not divide {a}")
    return GaussianInt(t.c // n, t.d // n)


def _as_grat(value):
    if isinstance(value, GaussianRational):
        return value
    g = _as_gint(value)
    return None if g is None else GaussianRational(g, GaussianInt(1, 0))


Ratio = Union[complex, float, int, GaussianRational]


@dataclass(frozen=True)
class TargetState:
    """Normalized synchronized state ``omega1|0> + omega2|1>``."""

    omega1: complex
    omega2: complex

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        if not all(map(math.isfinite, (w1.real, w1.imag, w2.real, w2.imag))):
            raise ValueError("amplitudes must be finite")
        norm2 = abs(w1) ** 2 + abs(w2) ** 2
        if abs(norm2 - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"state is not normalized: |w1|^2+|w2|^2 = {norm2!r}")
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)

    @classmethod
    def normalized(cls, omega1: complex, omega2: complex) -> TargetState:
        scale = math.hypot(abs(omega1), abs(omega2))
        if scale == 0:
            raise ValueError("zero vector has no normalization")
        return cls(omega1 / scale, omega2 / scale)

    @property
    def is_basis(self) -> bool:
        return self.omega1 == 0 or self.omega2 == 0

    def as_array(self):
        import numpy as np

        return np.array([self.omega1, self.omega2], dtype=complex)


def check_ratio(r: Ratio) -> Ratio:
    """Validate a nonzero amplitude ratio, returning it as complex or exact."""
    if isinstance(r, GaussianRational):
        if not r:
            raise BasisStateError("ratio r = 0 is the basis state |0>")
        return r
    if isinstance(r, GaussianInt):
        return check_ratio(GaussianRational.coerce(r))
    z = complex(r)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise BasisStateError("infinite ratio is the basis state |1>")
    if z == 0:
        raise BasisStateError("ratio r = 0 is the basis state |0>")
    return z


def ratio_from_state(s: TargetState) -> complex:
    """Return ``r = omega2 / omega1`` for a nonbasis state."""
    if s.omega1 == 0 or s.omega2 == 0:
        raise BasisStateError(f"basis state {s} has no amplitude ratio")
    return s.omega2 / s.omega1


def state_from_ratio(r: Ratio, global_phase: float = 0.0) -> TargetState:
    """Normalized state with ratio ``r`` and ``arg(omega1) = global_phase``."""
    r = complex(check_ratio(r))
    omega1 = cmath.exp(1j * global_phase) / math.sqrt(1.0 + abs(r) ** 2)
    return TargetState(omega1, r * omega1)


class PhaseFlags(NamedTuple):
    r_squared_real: bool
    r_plus_inverse_real: bool
    unimodular: bool
    real: bool


def phase_classify(r: Ratio, tol: float = REALITY_TOL) -> PhaseFlags:
    """Decide membership of ``r`` in the obstruction loci.

    Exact predicates over Q(i) are used when ``r`` is a
    :class:`GaussianRational`; ``tol`` is then ignored.
    """
    r = check_ratio(r)
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    if isinstance(r, GaussianRational):
        real = r.is_real()
        unimodular = r.num.norm() == r.den.norm()
        r2_real = (r * r).is_real()
        rinv_real = (r + 1 / r).is_real()
    else:
        real = abs(r.imag) <= tol
        unimodular = abs(abs(r) - 1.0) <= tol
        r2_real = real or abs((r * r).imag) <= tol
        rinv_real = real or unimodular or abs((r + 1 / r).imag) <= tol
    return PhaseFlags(r2_real, rinv_real, unimodular, real)


def is_plus_minus_i(r: Ratio, tol: float = REALITY_TOL) -> bool:
    """True when ``r = ±i``; exact for :class:`GaussianRational` input."""
    r = check_ratio(r)
    if isinstance(r, GaussianRational):
        return r * r == -1
    return abs(r * r + 1) <= tol
