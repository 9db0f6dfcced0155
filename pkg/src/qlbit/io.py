"""Matrix Market export with a JSON sidecar, and exact Gaussian-integer JSON."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.io
import scipy.sparse

from .assembly import BlockOperator
from .design import CouplingClass, DesignParams
from .discrete import DiscreteDesign, discrete_operator
from .graphs import circulant_regular
from .coupling import matching_coupling
from .numerics import GaussianInt


def _cx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _from_cx(pair) -> complex:
    return complex(pair[0], pair[1])


def sidecar_path(matrix_path) -> Path:
    return Path(matrix_path).with_suffix(".json")


def write_matrix_market(path, M) -> None:
    """Coordinate complex general format; values round-trip bit-exactly."""
    M = scipy.sparse.coo_matrix(np.asarray(M, dtype=complex))
    scipy.io.mmwrite(str(path), M, symmetry="general")


def read_matrix_market(path) -> np.ndarray:
    data = scipy.io.mmread(str(path))
    if scipy.sparse.issparse(data):
        data = data.toarray()
    return np.asarray(data, dtype=complex)


def params_to_dict(p: DesignParams) -> dict:
    return {
        "class": p.cls.value,
        "kA": _cx(p.kA), "kB": _cx(p.kB), "lA": _cx(p.lA), "lB": _cx(p.lB),
        "tau": p.tau, "tau_b": p.tau_b,
    }


def params_from_dict(d: dict) -> DesignParams:
    return DesignParams(
        CouplingClass.parse(d["class"]),
        _from_cx(d["kA"]), _from_cx(d["kB"]), _from_cx(d["lA"]), _from_cx(d["lB"]),
        d.get("tau"), d.get("tau_b"),
    )


def export_operator(path, op: BlockOperator, params: Optional[DesignParams] = None,
                    extra: Optional[dict] = None) -> tuple[Path, Path]:
    """Write ``path`` (Matrix Market) and its ``.json`` sidecar with block metadata."""
    path = Path(path)
    write_matrix_market(path, op.full)
    meta = {"n": op.n, "m": op.m, "class": op.cls.value}
    if params is not None:
        meta["design"] = params_to_dict(params)
    if extra:
        meta.update(extra)
    side = sidecar_path(path)
    side.write_text(json.dumps(meta, indent=2))
    return path, side


def load_operator(path, sidecar=None) -> tuple[BlockOperator, dict]:
    path = Path(path)
    side = sidecar_path(path) if sidecar is None else Path(sidecar)
    meta = json.loads(side.read_text())
    M = read_matrix_market(path)
    op = BlockOperator.from_matrix(M, int(meta["n"]), int(meta["m"]), meta.get("class", "generalized"))
    return op, meta


def _gint_matrix(re: np.ndarray, im: np.ndarray) -> list:
    return [[[int(a), int(b)] for a, b in zip(rr, ii)] for rr, ii in zip(re, im)]


def discrete_to_exact_json(d: DiscreteDesign) -> dict:
    """Lossless integer form: Gaussian integers as ``[c, d]`` pairs."""
    A = circulant_regular(d.q, d.kA).adjacency
    B = circulant_regular(d.q, d.kB).adjacency
    cre, cim = matching_coupling(d.l, d.q).exact
    zeros = np.zeros_like(A)
    return {
        "format": "qlbit-exact-gaussian",
        "q": d.q, "lambda": d.lam,
        "z": [d.z.c, d.z.d], "w": [d.w.c, d.w.d], "l": [d.l.c, d.l.d],
        "kA": d.kA, "kB": d.kB, "tau": d.tau, "delta": d.delta,
        "A": _gint_matrix(A, zeros),
        "B": _gint_matrix(B, zeros),
        "C": _gint_matrix(cre, cim),
    }


def write_exact_json(path, d: DiscreteDesign) -> Path:
    path = Path(path)
    path.write_text(json.dumps(discrete_to_exact_json(d)))
    return path


def read_exact_json(path) -> tuple[DiscreteDesign, dict]:
    """Load an exact export and check its matrices against the design, entry by entry."""
    data = json.loads(Path(path).read_text())
    d = DiscreteDesign(GaussianInt.coerce(data["z"]), GaussianInt.coerce(data["w"]), int(data["q"]))
    expected = discrete_to_exact_json(d)
    for key in ("A", "B", "C", "l", "kA", "kB"):
        if data[key] != expected[key]:
            raise ValueError(f"exact export field {key!r} does not match its design")
    return d, data


def exact_matrix(data: dict) -> tuple[np.ndarray, np.ndarray]:
    """Integer real and imaginary parts of the full operator in an exact export."""
    A = np.array(data["A"], dtype=np.int64)
    B = np.array(data["B"], dtype=np.int64)
    C = np.array(data["C"], dtype=np.int64)
    re = np.block([[A[..., 0], -C[..., 0]], [-C[..., 0].T, B[..., 0]]])
    im = np.block([[A[..., 1], -C[..., 1]], [C[..., 1].T, B[..., 1]]])
    return re, im


def discrete_operator_from_export(data: dict):
    d = DiscreteDesign(GaussianInt.coerce(data["z"]), GaussianInt.coerce(data["w"]), int(data["q"]))
    return discrete_operator(d)
