"""Approximate continuous targets by exactly verified discrete designs.

Edge weights are restricted to {0, ±1, ±i} and the two graphs have the same
even size q. Tighter tolerances need larger graphs.
"""
import cmath
import math

from qlbit import approximate_ratio, exact_verify_discrete, magic_state, ratio_from_state

targets = {
    "H state": ratio_from_state(magic_state("H")),
    "T state": ratio_from_state(magic_state("T")),
    "2 e^{i pi/3}": 2 * cmath.exp(1j * math.pi / 3),
}

for name, t in targets.items():
    print(name)
    for eps in (1e-1, 1e-2, 1e-3, 1e-4):
        res = approximate_ratio(t, eps)
        d = res.design
        check = exact_verify_discrete(d)
        print(f"  eps={eps:g}: z/w = ({d.z})/({d.w}), q = {d.q}, "
              f"error = {res.projective_error:.3e}, exact check = {check.passed} ({check.method})")
