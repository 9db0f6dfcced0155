import cmath
import json
import math

import numpy as np
import pytest

from qlbit.assembly import embed_state, operator_from_design, restrict_to_sync
from qlbit.design import CouplingClass, SpectralSpec, realize
from qlbit.discrete import discrete_design_from_ratio, discrete_operator
from qlbit.io import (
    exact_matrix,
    export_operator,
    load_operator,
    params_from_dict,
    params_to_dict,
    read_exact_json,
    read_matrix_market,
    write_exact_json,
    write_matrix_market,
)
from qlbit.numerics import GaussianInt, state_from_ratio
from qlbit.spectral import verify_eigenpair


def test_matrix_market_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    M = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    M[2, 3] = 0
    path = tmp_path / "m.mtx"
    write_matrix_market(path, M)
    assert path.read_text().startswith("%%MatrixMarket matrix coordinate complex general")
    assert np.array_equal(read_matrix_market(path), M)


def test_export_and_load_operator(tmp_path):
    r = 2 * cmath.exp(1j * math.pi / 4)
    p = realize(CouplingClass.HERMITIAN, r, SpectralSpec(0.5, 1))
    op = operator_from_design(p, 4, 6)
    mtx, side = export_operator(tmp_path / "op.mtx", op, p, {"spec": {"lambda": 0.5, "delta": 1.0}})
    back, meta = load_operator(mtx)
    assert np.array_equal(back.full, op.full)
    assert (back.n, back.m, back.cls) == (4, 6, CouplingClass.HERMITIAN)
    assert meta["spec"]["lambda"] == 0.5
    q = params_from_dict(meta["design"])
    assert (q.kA, q.kB, q.lA, q.lB) == (p.kA, p.kB, p.lA, p.lB)
    psi = embed_state(state_from_ratio(r), op.basis)
    assert verify_eigenpair(back, psi, 0.5).residual == verify_eigenpair(op, psi, 0.5).residual
    assert restrict_to_sync(back)[1] == restrict_to_sync(op)[1]


def test_params_dict_round_trip():
    p = realize(CouplingClass.GENERALIZED, 0.2 - 3j, SpectralSpec(1, -2), tau_a=0.4)
    assert params_from_dict(json.loads(json.dumps(params_to_dict(p)))) == p


def test_exact_json_round_trip(tmp_path):
    d = discrete_design_from_ratio(GaussianInt(2, -1), GaussianInt(1, 3))
    path = write_exact_json(tmp_path / "d.exact.json", d)
    d2, data = read_exact_json(path)
    assert d2 == d
    re, im = exact_matrix(data)
    full = discrete_operator(d).full
    assert np.array_equal(re, full.real.astype(np.int64)) and np.array_equal(im, full.imag.astype(np.int64))
    # exact H psi = 0 on the unnormalized (w 1, z 1)
    q = d.q
    pr = np.r_[np.full(q, d.w.c), np.full(q, d.z.c)]
    pi = np.r_[np.full(q, d.w.d), np.full(q, d.z.d)]
    assert not np.any(re @ pr - im @ pi) and not np.any(re @ pi + im @ pr)


def test_tampered_exact_json_rejected(tmp_path):
    d = discrete_design_from_ratio(GaussianInt(1, 1), GaussianInt(1))
    path = write_exact_json(tmp_path / "d.exact.json", d)
    data = json.loads(path.read_text())
    data["C"][0][0] = [0, 0]
    path.write_text(json.dumps(data))
    with pytest.raises(ValueError):
        read_exact_json(path)
