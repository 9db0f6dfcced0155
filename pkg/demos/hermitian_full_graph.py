"""Build a Hermitian block operator on two regular graphs and check it end to end.

The target state is embedded as constant amplitudes on each graph; the full
operator must have it as an eigenvector, and the synchronized subspace must
reduce the operator.
"""
import cmath
import math

import numpy as np

from qlbit import (
    CouplingClass,
    SpectralSpec,
    eig_full,
    embed_state,
    operator_from_design,
    realize,
    reducing_check,
    restrict_to_sync,
    state_from_ratio,
    verify_eigenpair,
)
from qlbit.spectral import collision_check

r = 2 * cmath.exp(1j * math.pi / 4)
spec = SpectralSpec(lam=0.0, delta=1.0)
p = realize(CouplingClass.HERMITIAN, r, spec)
print(f"kA = {p.kA.real:.4f}, kB = {p.kB.real:.4f}, l = {p.lA:.4f}")

op = operator_from_design(p, 8, 6)  # unequal graph sizes are fine for rank-one couplings
psi = embed_state(state_from_ratio(r), op.basis)
print("dimension:", op.dim)
print("eigen residual:", verify_eigenpair(op, psi, spec.lam).residual)

M, invariance = restrict_to_sync(op)
print("restricted block:\n", np.round(M.matrix, 12))
print("invariance residual:", invariance)

red = reducing_check(op)
print("cross-block norms:", red.sync_to_perp, red.perp_to_sync)

rep = eig_full(op)
print("complement spectrum:", np.round(np.sort(rep.perp_eigenvalues.real), 4))
print("collision margin:", round(collision_check(rep, spec), 6))
