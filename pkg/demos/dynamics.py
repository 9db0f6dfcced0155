"""Time evolution inside and outside the synchronized sector.

A Hermitian design keeps a synchronized state synchronized for all time. A
complex-symmetric block forced off its locus has a complex eigenvalue, and the
norm of the corresponding state grows like exp(t * Im(eigenvalue)).
"""
import cmath
import math

import numpy as np

from qlbit import (
    CouplingClass,
    DesignParams,
    SpectralSpec,
    eig2,
    embed_state,
    evolve,
    operator_from_design,
    realize,
    reduce,
    state_from_ratio,
)
from qlbit.spectral import leakage_scan

r = 0.7 - 1.1j
op = operator_from_design(realize(CouplingClass.HERMITIAN, r, SpectralSpec(0.5, 1.5)), 6)
psi = embed_state(state_from_ratio(r), op.basis)
rep = leakage_scan(op, psi, np.linspace(0, 10, 11))
for t, leak, nrm in zip(rep.times, rep.leakage, rep.norms):
    print(f"t = {t:4.1f}  leakage = {leak:.2e}  norm = {nrm:.15f}")

p = DesignParams(CouplingClass.COMPLEX_SYMMETRIC, 0.2, 0.8, 0.3 + 0.3j, 0.3 + 0.3j)
e = eig2(reduce(p))
j = int(np.argmax(np.imag(e.eigenvalues)))
beta = e.eigenvalues[j].imag
v = e.eigenvectors[:, j] / np.linalg.norm(e.eigenvectors[:, j])
print(f"\ngrowth rate beta = {beta:.6f}")
for t in (0.5, 1.0, 2.0, 5.0):
    n = np.linalg.norm(evolve(reduce(p).matrix, v, t, hermitian=False))
    print(f"t = {t}: norm = {n:.6f}, exp(t beta) = {math.exp(t * beta):.6f}")
