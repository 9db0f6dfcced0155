import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qlbit.assembly import assemble, embed_state, operator_from_design, restrict_to_sync
from qlbit.cli import EXIT_DEGENERATE, EXIT_OBSTRUCTED, EXIT_OK, VERDICT_EXIT, main
from qlbit.coupling import zero_coupling
from qlbit.design import CouplingClass, DesignParams, VerdictKind, eig2, reduce
from qlbit.graphs import circulant_regular
from qlbit.io import export_operator, read_matrix_market, write_matrix_market
from qlbit.spectral import verify_eigenpair


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_exit_codes_cover_every_verdict():
    assert set(VERDICT_EXIT) == set(VerdictKind)
    assert VERDICT_EXIT == {VerdictKind.REALIZABLE: 0, VerdictKind.OBSTRUCTED: 2, VerdictKind.DEGENERATE_ONLY: 3}


def test_synthesize_hermitian(capsys):
    code, rep = run_json(capsys, "synthesize", "hermitian", "--r", "2*exp(i*pi/4)", "--lambda", "0", "--delta", "1")
    assert code == EXIT_OK and rep["verdict"] == "Realizable"
    p = rep["params"]
    assert abs(p["tau"] - 0.8) <= 1e-15 and abs(p["kA"][0] - 0.8) <= 1e-15 and abs(p["kB"][0] - 0.2) <= 1e-15
    assert rep["operator"]["eigen_residual"] <= 1e-12


def test_synthesize_obstructed(capsys):
    code, rep = run_json(capsys, "synthesize", "complex-symmetric", "--r", "exp(i*pi/4)")
    assert code == EXIT_OBSTRUCTED
    assert rep["verdict"] == "Obstructed" and rep["locus"] == "r^2 not real"
    assert "params" not in rep


def test_synthesize_degenerate_and_zero_gap(capsys):
    code, rep = run_json(capsys, "synthesize", "real-coupling", "--r", "i")
    assert code == EXIT_DEGENERATE and "params" not in rep
    code, rep = run_json(capsys, "synthesize", "complex-symmetric", "--r=-i", "--lambda", "0.5", "--zero-gap")
    assert code == EXIT_DEGENERATE and rep["zero_gap"]
    assert all(abs(complex(*e) - 0.5) <= 1e-12 for e in rep["eigenvalues"])


def test_synthesize_state_discrete(capsys, tmp_path):
    code, rep = run_json(capsys, "synthesize", "hermitian", "--state", "H", "--discrete",
                         "--export", tmp_path / "h")
    assert code == EXIT_OK
    d = rep["discrete"]
    assert d["projective_error"] < 1e-3 and d["exact_verification"] in ("dense", "structural")
    assert (tmp_path / "h.exact.json").exists()


def test_synthesize_exact_rational(capsys):
    code, rep = run_json(capsys, "synthesize", "complex-symmetric", "--r", "(3+4i)/5", "--exact")
    assert code == EXIT_OBSTRUCTED and rep["request"]["exact"]
    code, rep = run_json(capsys, "synthesize", "real-coupling", "--r", "(3+4i)/5", "--exact")
    assert code == EXIT_OK


def test_synthesize_bad_arguments():
    with pytest.raises(SystemExit) as info:
        main(["synthesize", "hermitian", "--r", "2+"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        main(["synthesize", "nonsense", "--r", "1"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        main(["synthesize", "hermitian"])
    assert info.value.code == 64


def test_verify_designed_export(capsys, tmp_path):
    code, _ = run(capsys, "synthesize", "hermitian", "--r", "0.4-1.2i", "--delta", "2", "--size", "6",
                  "--export", tmp_path / "op")
    assert code == 0
    code, rep = run_json(capsys, "verify", tmp_path / "op.mtx", "--spectrum-csv", tmp_path / "s.csv")
    assert code == 0 and rep["pass"]
    assert set(rep["checks"]) == {"invariance_residual", "sync_to_perp", "perp_to_sync", "eigen_residual",
                                  "collision_margin"}
    rows = list(csv.DictReader(open(tmp_path / "s.csv")))
    assert sum(r["sector"] == "full" for r in rows) == 12 and sum(r["sector"] == "perp" for r in rows) == 10
    float(rows[0]["re"])


def test_verify_round_trip_matches_in_memory(capsys, tmp_path):
    p = DesignParams(CouplingClass.GENERALIZED, 0.3, 1.2, 0.5 - 0.1j, 2.0 + 0.4j, 0.3, 0.7)
    op = operator_from_design(p, 5, 3)
    export_operator(tmp_path / "g.mtx", op, p)
    _, rep = run_json(capsys, "verify", tmp_path / "g.mtx")
    assert abs(rep["checks"]["invariance_residual"]["value"] - restrict_to_sync(op)[1]) <= 1e-12
    assert rep["class"] == "generalized" and rep["checks"]["perp_to_sync"]["pass"] is None


def test_verify_detects_corruption(capsys, tmp_path):
    run(capsys, "synthesize", "hermitian", "--r", "2", "--export", tmp_path / "op")
    M = read_matrix_market(tmp_path / "op.mtx")
    M[0, 1] += 0.25
    write_matrix_market(tmp_path / "op.mtx", M)
    code, rep = run_json(capsys, "verify", tmp_path / "op.mtx")
    assert code == 1 and not rep["pass"]
    assert rep["checks"]["invariance_residual"]["value"] > 0.01


def test_verify_flags_engineered_collision(capsys, tmp_path):
    A = circulant_regular(4, 2)
    op = assemble(CouplingClass.HERMITIAN, A, A, zero_coupling(4, 4))
    export_operator(tmp_path / "d.mtx", op)
    code, rep = run_json(capsys, "verify", tmp_path / "d.mtx", "--lambda", "0")
    assert code == 1
    assert rep["checks"]["collision_margin"]["value"] <= 1e-12
    assert not rep["checks"]["collision_margin"]["pass"]


def test_verify_missing_file(capsys, tmp_path):
    assert main(["verify", str(tmp_path / "none.mtx")]) == 66
    (tmp_path / "bad.mtx").write_text("not a matrix")
    (tmp_path / "bad.json").write_text(json.dumps({"n": 1, "m": 1}))
    assert main(["verify", str(tmp_path / "bad.mtx")]) == 66


def test_tolerance_env_override(capsys, tmp_path, monkeypatch):
    run(capsys, "synthesize", "hermitian", "--r", "2", "--export", tmp_path / "op")
    monkeypatch.setenv("QLBIT_TOL", "1e-3")
    _, rep = run_json(capsys, "verify", tmp_path / "op.mtx")
    assert rep["tolerance"] == 1e-3


def read_csv(path):
    return list(csv.DictReader(open(path)))


def test_scan_complex_symmetric(capsys, tmp_path):
    code, _ = run(capsys, "scan", "complex-symmetric", "--out", tmp_path / "cs.csv")
    assert code == 0
    rows = read_csv(tmp_path / "cs.csv")
    assert len(rows) == 101 * 101
    for row in rows:
        re, im = float(row["re"]), float(row["im"])
        if re == 0 and im == 0:
            assert row["verdict"] == "BasisState"
        elif re == 0 and abs(im) == 1:
            assert row["verdict"] == "DegenerateOnly"
        elif abs(re) <= 1e-12 or abs(im) <= 1e-12:
            assert row["verdict"] == "Realizable" and float(row["residual"]) <= 1e-12
        else:
            assert row["verdict"] == "Obstructed" and float(row["residual"]) > 1e-6


def test_scan_hermitian_all_realizable(capsys, tmp_path):
    run(capsys, "scan", "hermitian", "--out", tmp_path / "h.csv")
    rows = read_csv(tmp_path / "h.csv")
    non_basis = [r for r in rows if r["verdict"] != "BasisState"]
    assert len(non_basis) == 101 * 101 - 1
    assert all(r["verdict"] == "Realizable" for r in non_basis)
    assert max(float(r["residual"]) for r in non_basis) <= 1e-12


def test_scan_real_coupling_locus(capsys, tmp_path):
    run(capsys, "scan", "real-coupling", "--grid", "41", "41", "--out", tmp_path / "rc.csv")
    for row in read_csv(tmp_path / "rc.csv"):
        r = complex(float(row["re"]), float(row["im"]))
        if r == 0:
            continue
        on = abs(r.imag) <= 1e-12 or abs(abs(r) - 1) <= 1e-12
        if abs(r * r + 1) <= 1e-12:
            assert row["verdict"] == "DegenerateOnly"
        else:
            assert (row["verdict"] == "Realizable") == on


def test_scan_random_samples_are_seeded(capsys, tmp_path):
    run(capsys, "scan", "asymmetric", "--samples", "50", "--seed", "4", "--out", tmp_path / "a.csv")
    run(capsys, "scan", "asymmetric", "--samples", "50", "--seed", "4", "--out", tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_text() == (tmp_path / "b.csv").read_text()
    run(capsys, "scan", "generalized", "--samples", "20", "--tau-a", "0.25", "--out", tmp_path / "g.csv")
    assert all(r["verdict"] == "Realizable" for r in read_csv(tmp_path / "g.csv"))


def test_evolve_hermitian(capsys, tmp_path):
    run(capsys, "synthesize", "hermitian", "--r", "2*exp(i*pi/4)", "--export", tmp_path / "op")
    code, _ = run(capsys, "evolve", tmp_path / "op.mtx", "--t-max", "10", "--steps", "20", "--out", tmp_path / "e.csv")
    assert code == 0
    rows = read_csv(tmp_path / "e.csv")
    assert len(rows) == 21
    assert max(float(r["leakage"]) for r in rows) <= 1e-10
    assert all(abs(float(r["norm"]) - 1) <= 1e-11 for r in rows)
    run(capsys, "evolve", tmp_path / "op.mtx", "--t-max", "0", "--out", tmp_path / "z.csv")
    rows = read_csv(tmp_path / "z.csv")
    assert len(rows) == 1 and float(rows[0]["leakage"]) <= 1e-15


def test_evolve_rejects_unsynchronized_state(capsys, tmp_path):
    run(capsys, "synthesize", "hermitian", "--r", "2", "--export", tmp_path / "op")
    psi = [[1, 0]] + [[0, 0]] * 7
    (tmp_path / "p.json").write_text(json.dumps(psi))
    assert main(["evolve", str(tmp_path / "op.mtx"), "--psi0", str(tmp_path / "p.json")]) == 65
    code, _ = run(capsys, "evolve", tmp_path / "op.mtx", "--psi0", tmp_path / "p.json", "--allow-any-psi0")
    assert code == 0


def test_evolve_growth_off_locus(capsys, tmp_path):
    p = DesignParams(CouplingClass.COMPLEX_SYMMETRIC, 0.2, 0.8, 0.3 + 0.3j, 0.3 + 0.3j)
    op = operator_from_design(p, 4)
    e = eig2(reduce(p))
    j = int(np.argmax([x.imag for x in e.eigenvalues]))
    beta = e.eigenvalues[j].imag
    w1, w2 = e.eigenvectors[:, j]
    psi0 = w1 * op.basis.ket0 + w2 * op.basis.ket1
    export_operator(tmp_path / "cs.mtx", op)
    (tmp_path / "psi.json").write_text(json.dumps([[z.real, z.imag] for z in psi0]))
    run(capsys, "evolve", tmp_path / "cs.mtx", "--psi0", tmp_path / "psi.json", "--t-max", "5",
        "--steps", "10", "--out", tmp_path / "g.csv")
    for row in read_csv(tmp_path / "g.csv"):
        t = float(row["t"])
        assert abs(float(row["norm"]) / math.exp(t * beta) - 1) <= 1e-8
        assert float(row["leakage"]) <= 1e-10 * math.exp(t * beta)


def test_discrete_command(capsys, tmp_path):
    code, rep = run_json(capsys, "discrete", "--z", "i", "--w", "1", "--export", tmp_path / "d")
    assert code == 0
    assert rep["l"] == [0, -1] and rep["q"] == 2 and rep["verification"]["passed"]
    assert (tmp_path / "d.exact.json").exists() and (tmp_path / "d.mtx").exists()
    code, rep = run_json(capsys, "discrete", "--r", "exp(i*pi/4)", "--epsilon", "0.05")
    assert rep["projective_error"] < 0.05 and rep["q"] == 12
    code, rep = run_json(capsys, "discrete", "--z", "1+i", "--w", "1", "--q", "8", "--method", "structural")
    assert rep["q"] == 8 and rep["verification"]["method"] == "structural"
    assert main(["discrete", "--z", "3+2i", "--w", "1", "--q", "4"]) == 65
    with pytest.raises(SystemExit) as info:
        main(["discrete"])
    assert info.value.code == 64


def test_console_script_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "qlbit.cli", "synthesize", "complex-symmetric", "--r",
                          "exp(i*pi/4)"], capture_output=True, text=True)
    assert out.returncode == 2
    assert json.loads(out.stdout)["locus"] == "r^2 not real"
