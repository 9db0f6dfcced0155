"""Which coupling classes can put a given two-level state at a prescribed eigenvalue?

Walks the unit circle of amplitude ratios r and prints the verdict of each
class, then shows what goes wrong when an obstructed symmetric block is
built anyway.
"""
import cmath
import math

import numpy as np

from qlbit import CouplingClass, DesignParams, SpectralSpec, eig2, realize, reduce, taxonomy_verdict

spec = SpectralSpec(lam=0.0, delta=1.0)
classes = list(CouplingClass)

print("theta/pi  " + "  ".join(f"{c.value:>18}" for c in classes))
for k in range(9):
    theta = k * math.pi / 8
    r = cmath.exp(1j * theta)
    row = [taxonomy_verdict(c, r).kind.value for c in classes]
    print(f"{theta / math.pi:8.3f}  " + "  ".join(f"{v:>18}" for v in row))

# Build a complex-symmetric block off the locus anyway: with real detunings
# its spectrum leaves the real axis.
r = cmath.exp(1j * math.pi / 4)
p = DesignParams(CouplingClass.COMPLEX_SYMMETRIC, kA=0.2, kB=0.8, lA=0.3 + 0.3j, lB=0.3 + 0.3j)
print("\nforced complex-symmetric block eigenvalues:", np.round(eig2(reduce(p)).eigenvalues, 6))

# The Hermitian class realizes the same ratio with a real gap.
h = realize(CouplingClass.HERMITIAN, r, spec)
print("hermitian design:", f"kA={h.kA.real:.6f} kB={h.kB.real:.6f} l={h.lA:.6f}")
print("hermitian block eigenvalues:", np.round(np.sort(np.real(eig2(reduce(h)).eigenvalues)), 12))
