"""Command-line entry point: ``qlbit synthesize | verify | scan | evolve | discrete``.

Exit codes
----------
0   success / Realizable
1   verification failed
2   Obstructed
3   DegenerateOnly
64  bad arguments
65  invalid data (e.g. initial state not synchronized, inadmissible q)
66  unreadable or malformed input file
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .assembly import embed_state, operator_from_design, restrict_to_sync
from .design import (
    CouplingClass,
    SpectralSpec,
    VerdictKind,
    eig2,
    magic_state,
    realize,
    realize_hermitian_from_amplitudes,
    realize_zero_gap,
    reduce,
    taxonomy_verdict,
)
from .discrete import (
    approximate_ratio,
    discrete_design_from_ratio,
    discrete_operator,
    exact_verify_discrete,
)
from .errors import QLBitError, InitialStateNotSynchronized
from .io import export_operator, load_operator, params_to_dict, write_exact_json
from .numerics import GaussianRational, TargetState, ratio_from_state, state_from_ratio
from .parsing import parse_number
from .spectral import (
    COLLISION_THRESHOLD,
    SIZE_CAP,
    collision_check,
    eig_full,
    leakage_scan,
    opnorm,
    reducing_check,
    verify_eigenpair,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_OBSTRUCTED = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_NOINPUT = 66

VERDICT_EXIT = {
    VerdictKind.REALIZABLE: EXIT_OK,
    VerdictKind.OBSTRUCTED: EXIT_OBSTRUCTED,
    VerdictKind.DEGENERATE_ONLY: EXIT_DEGENERATE,
}

TOL_ENV = "QLBIT_TOL"
DEFAULT_TOL = 1e-10


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise SystemExit(f"{TOL_ENV}={raw!r} is not a number")
    return tol


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text):
    try:
        return parse_number(text, exact=True)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _real(text) -> float:
    z = _number(text)
    z = complex(z)
    if z.imag != 0:
        raise argparse.ArgumentTypeError(f"{text!r} is not real")
    return z.real


def _cx(z):
    z = complex(z)
    return [z.real, z.imag]


def _emit(report: dict, out=None):
    text = json.dumps(report, indent=2, default=str)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _target(args):
    """Return ``(r, state)``; ``r`` may be an exact GaussianRational."""
    if args.state is not None:
        s = magic_state(args.state)
        return ratio_from_state(s), s
    if args.amplitudes is not None:
        w1, w2 = (complex(_number(a)) for a in args.amplitudes)
        s = TargetState.normalized(w1, w2)
        return ratio_from_state(s), s
    r = args.r
    if not args.exact and isinstance(r, GaussianRational):
        r = complex(r)
    return r, state_from_ratio(complex(r)) if complex(r) != 0 else None


def cmd_synthesize(args) -> int:
    cls = CouplingClass.parse(args.coupling_class)
    r, state = _target(args)
    spec = SpectralSpec(args.lam, args.delta)
    verdict = taxonomy_verdict(cls, r)
    report = {
        "request": {
            "class": cls.value, "r": _cx(r), "exact": isinstance(r, GaussianRational),
            "lambda": spec.lam, "delta": spec.delta,
        },
        "verdict": verdict.kind.value,
        "locus": verdict.locus,
    }
    params = None
    if verdict.kind is VerdictKind.REALIZABLE:
        if args.amplitudes is not None and cls is CouplingClass.HERMITIAN:
            params = realize_hermitian_from_amplitudes(state, spec)
        else:
            params = realize(cls, r, spec, tau_a=args.tau_a)
    elif verdict.kind is VerdictKind.DEGENERATE_ONLY and args.zero_gap:
        params = realize_zero_gap(cls, r, spec.lam)
        report["zero_gap"] = True

    if params is not None:
        block = reduce(params)
        e = eig2(block)
        v = np.array([1.0, complex(r)])
        report["params"] = params_to_dict(params)
        report["block"] = [[_cx(x) for x in row] for row in block.matrix]
        report["eigenvalues"] = [_cx(x) for x in e.eigenvalues]
        report["defective"] = e.defective
        report["residuals"] = {
            "eigen": float(np.linalg.norm(block.matrix @ v - spec.lam * v)),
            "trace": abs(block.trace - (2 * spec.lam + (0 if args.zero_gap and not verdict.realizable else spec.delta))),
        }

    op = None
    if params is not None and not args.discrete:
        op = operator_from_design(params, args.size)
        psi = embed_state(state, op.basis)
        _, invariance = restrict_to_sync(op)
        report["operator"] = {
            "n": op.n, "m": op.m,
            "invariance_residual": invariance,
            "eigen_residual": verify_eigenpair(op, psi, spec.lam).residual,
        }

    if args.discrete:
        if cls is not CouplingClass.HERMITIAN:
            print("--discrete requires the hermitian class", file=sys.stderr)
            return EXIT_USAGE
        approx = approximate_ratio(r, args.epsilon)
        d = approx.design
        if args.q is not None:
            d = discrete_design_from_ratio(d.z, d.w, args.q)
        check = exact_verify_discrete(d)
        report["discrete"] = {
            "z": [d.z.c, d.z.d], "w": [d.w.c, d.w.d], "l": [d.l.c, d.l.d],
            "kA": d.kA, "kB": d.kB, "tau": d.tau, "delta": d.delta, "lambda": d.lam, "q": d.q,
            "projective_error": approx.projective_error,
            "exact_verification": check.method if check.passed else "failed",
        }
        if d.q <= SIZE_CAP // 2:
            op = discrete_operator(d)
            state = d.target_state()
            spec = SpectralSpec(d.lam, d.delta)
        if args.export:
            exact_path = write_exact_json(Path(args.export).with_suffix(".exact.json"), d)
            report.setdefault("files", []).append(str(exact_path))

    if args.export and op is not None:
        extra = {
            "spec": {"lambda": spec.lam, "delta": spec.delta},
            "target": {"omega1": _cx(state.omega1), "omega2": _cx(state.omega2)},
        }
        paths = export_operator(Path(args.export).with_suffix(".mtx"), op,
                                params if not args.discrete else None, extra)
        report.setdefault("files", []).extend(str(p) for p in paths)

    _emit(report, args.report)
    return VERDICT_EXIT[verdict.kind]


def _load(args):
    try:
        return load_operator(args.matrix, args.sidecar)
    except (OSError, ValueError, KeyError) as exc:
        raise _InputError(f"cannot read {args.matrix}: {exc}") from exc


class _InputError(Exception):
    pass


def _read_vector(path) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text())
        return np.array([complex(a, b) for a, b in data], dtype=complex)
    except (OSError, ValueError, TypeError) as exc:
        raise _InputError(f"cannot read vector {path}: {exc}") from exc


def _sidecar_state(meta, op):
    target = meta.get("target")
    if not target:
        return None
    s = TargetState(complex(*target["omega1"]), complex(*target["omega2"]))
    return embed_state(s, op.basis)


def cmd_verify(args) -> int:
    op, meta = _load(args)
    tol = args.tol if args.tol is not None else default_tolerance()
    spec_meta = meta.get("spec", {})
    lam = args.lam if args.lam is not None else spec_meta.get("lambda")
    delta = args.delta if args.delta is not None else spec_meta.get("delta")
    psi = _read_vector(args.psi) if args.psi else _sidecar_state(meta, op)
    scale = 1.0 + opnorm(op.full)

    checks = {}
    _, invariance = restrict_to_sync(op)
    checks["invariance_residual"] = {"value": invariance, "pass": invariance <= tol * scale}
    red = reducing_check(op)
    checks["sync_to_perp"] = {"value": red.sync_to_perp, "pass": red.sync_to_perp <= tol * scale}
    if op.hermitian:
        checks["perp_to_sync"] = {"value": red.perp_to_sync, "pass": red.perp_to_sync <= tol * scale}
    else:
        checks["perp_to_sync"] = {"value": red.perp_to_sync, "pass": None}
    if psi is not None and lam is not None:
        res = verify_eigenpair(op, psi, lam, tol)
        checks["eigen_residual"] = {"value": res.residual, "pass": res.passed}

    report = {"matrix": str(args.matrix), "n": op.n, "m": op.m, "class": op.cls.value,
              "tolerance": tol, "checks": checks}
    if op.dim <= SIZE_CAP:
        spectrum = eig_full(op)
        report["sync_eigenvalues"] = [_cx(x) for x in spectrum.sync_eigenvalues]
        report["max_imag"] = spectrum.max_imag
        if lam is not None:
            targets = SpectralSpec(lam, delta if delta is not None else 0.0)
            margin = collision_check(spectrum, targets) if delta is not None else \
                float(np.abs(spectrum.perp_eigenvalues - lam).min(initial=math.inf))
            checks["collision_margin"] = {"value": margin, "pass": margin > args.collision_threshold}
        if args.spectrum_csv:
            with open(args.spectrum_csv, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["sector", "re", "im"])
                for x in spectrum.eigenvalues:
                    w.writerow(["full", repr(float(x.real)), repr(float(x.imag))])
                for x in spectrum.sync_eigenvalues:
                    w.writerow(["sync", repr(float(x.real)), repr(float(x.imag))])
                for x in spectrum.perp_eigenvalues:
                    w.writerow(["perp", repr(float(x.real)), repr(float(x.imag))])
    ok = all(c["pass"] is not False for c in checks.values())
    report["pass"] = ok
    _emit(report, args.report)
    return EXIT_OK if ok else EXIT_FAILED


def _attempt_residual(cls: CouplingClass, r: complex, spec: SpectralSpec, tau_a) -> float:
    """Eigen and gap error of the class-constrained version of the realization formula."""
    from .design import DesignParams

    if cls is CouplingClass.COMPLEX_SYMMETRIC:
        tau = spec.delta / (1 + r ** -2) if abs(1 + r ** -2) > 0 else 0.0
        lc = tau / r
        p = DesignParams(cls, spec.lam + complex(tau).real, spec.lam + complex(tau / r ** 2).real, lc, lc)
    elif cls is CouplingClass.REAL_SYM_COMPLEX_DETUNING:
        s = r + 1 / r
        lc = (spec.delta / s).real if abs(s) > 0 else 1.0
        p = DesignParams(cls, spec.lam + lc * r, spec.lam + lc / r, lc, lc)
    else:
        p = realize(cls, r, spec, tau_a=tau_a)
    block = reduce(p)
    v = np.array([1.0, r])
    eig_err = float(np.linalg.norm(block.matrix @ v - spec.lam * v))
    second = block.trace - spec.lam
    return max(eig_err, abs(second - (spec.lam + spec.delta)))


def cmd_scan(args) -> int:
    cls = CouplingClass.parse(args.coupling_class)
    spec = SpectralSpec(args.lam, args.delta)
    if cls is CouplingClass.GENERALIZED and args.tau_a is None:
        args.tau_a = spec.delta / 2
    if args.samples:
        rng = np.random.default_rng(args.seed)
        re = rng.uniform(args.re_range[0], args.re_range[1], args.samples)
        im = rng.uniform(args.im_range[0], args.im_range[1], args.samples)
        points = list(zip(re, im))
    else:
        res = np.linspace(args.re_range[0], args.re_range[1], args.grid[0])
        ims = np.linspace(args.im_range[0], args.im_range[1], args.grid[1])
        points = [(a, b) for a in res for b in ims]
    rows = []
    counts = {}
    for a, b in points:
        r = complex(a, b)
        if r == 0:
            verdict, residual = "BasisState", ""
        else:
            verdict = taxonomy_verdict(cls, r).kind.value
            residual = repr(_attempt_residual(cls, r, spec, args.tau_a))
        counts[verdict] = counts.get(verdict, 0) + 1
        rows.append((repr(float(a)), repr(float(b)), verdict, residual))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(["re", "im", "verdict", "residual"])
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    if args.out:
        print(json.dumps({"class": cls.value, "points": len(rows), "verdicts": counts}))
    return EXIT_OK


def cmd_evolve(args) -> int:
    op, meta = _load(args)
    psi0 = _read_vector(args.psi0) if args.psi0 else _sidecar_state(meta, op)
    if psi0 is None:
        print("no initial state: pass --psi0 or a sidecar with a target", file=sys.stderr)
        return EXIT_USAGE
    if args.t_max == 0:
        times = np.array([0.0])
    else:
        times = np.linspace(0.0, args.t_max, args.steps + 1)
    try:
        rep = leakage_scan(op, psi0, times, allow_any=args.allow_any_psi0)
    except InitialStateNotSynchronized as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATAERR
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(["t", "leakage", "norm"])
        for t, lk, nm in zip(rep.times, rep.leakage, rep.norms):
            w.writerow([repr(float(t)), repr(float(lk)), repr(float(nm))])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_discrete(args) -> int:
    if args.z is not None:
        if args.w is None:
            print("--z needs --w", file=sys.stderr)
            return EXIT_USAGE
        d = discrete_design_from_ratio(args.z, args.w, args.q)
        error = 0.0
    else:
        approx = approximate_ratio(args.r, args.epsilon)
        d = approx.design
        if args.q is not None:
            d = discrete_design_from_ratio(d.z, d.w, args.q)
        error = approx.projective_error
    dense = {"auto": None, "dense": True, "structural": False}[args.method]
    check = exact_verify_discrete(d, dense=dense)
    report = {
        "z": [d.z.c, d.z.d], "w": [d.w.c, d.w.d], "l": [d.l.c, d.l.d],
        "kA": d.kA, "kB": d.kB, "tau": d.tau, "delta": d.delta, "lambda": d.lam, "q": d.q,
        "ratio": _cx(d.ratio), "projective_error": error,
        "verification": {"passed": check.passed, "method": check.method,
                         "top": str(check.top), "bottom": str(check.bottom)},
    }
    if args.export:
        report["files"] = [str(write_exact_json(Path(args.export).with_suffix(".exact.json"), d))]
        if 2 * d.q <= SIZE_CAP:
            op = discrete_operator(d)
            s = d.target_state()
            extra = {"spec": {"lambda": d.lam, "delta": d.delta},
                     "target": {"omega1": _cx(s.omega1), "omega2": _cx(s.omega2)}}
            report["files"] += [str(p) for p in export_operator(Path(args.export).with_suffix(".mtx"), op, None, extra)]
    _emit(report, args.report)
    return EXIT_OK


def _gaussian_int(text):
    from .numerics import GaussianInt

    value = _number(text)
    if isinstance(value, GaussianRational) and value.den == 1:
        return value.num
    if isinstance(value, GaussianRational) and value.den == -1:
        return -value.num
    try:
        return GaussianInt.coerce(complex(value))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qlbit", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    classes = [c.value for c in CouplingClass]

    s = sub.add_parser("synthesize", help="design a synchronized block for a target state")
    s.add_argument("coupling_class", choices=classes)
    tgt = s.add_mutually_exclusive_group(required=True)
    tgt.add_argument("--r", type=_number, help="amplitude ratio, e.g. '2*exp(i*pi/4)'")
    tgt.add_argument("--state", choices=["H", "T"])
    tgt.add_argument("--amplitudes", nargs=2, metavar=("W1", "W2"))
    s.add_argument("--lambda", dest="lam", type=_real, default=0.0)
    s.add_argument("--delta", type=_real, default=1.0)
    s.add_argument("--tau-a", type=_real, default=None, help="gap split for the generalized class")
    s.add_argument("--zero-gap", action="store_true", help="emit the zero-gap design at r = ±i")
    s.add_argument("--exact", action="store_true", help="use exact Q(i) predicates when r is Gaussian-rational")
    s.add_argument("--discrete", action="store_true", help="also build an exact discrete design")
    s.add_argument("--epsilon", type=float, default=1e-3)
    s.add_argument("--q", type=int, default=None)
    s.add_argument("--size", type=int, default=4, help="vertices per block for the continuous operator")
    s.add_argument("--export", metavar="PREFIX")
    s.add_argument("--report", metavar="FILE")
    s.set_defaults(func=cmd_synthesize)

    v = sub.add_parser("verify", help="check an exported operator")
    v.add_argument("matrix")
    v.add_argument("--sidecar")
    v.add_argument("--psi")
    v.add_argument("--lambda", dest="lam", type=_real, default=None)
    v.add_argument("--delta", type=_real, default=None)
    v.add_argument("--tol", type=float, default=None)
    v.add_argument("--collision-threshold", type=float, default=COLLISION_THRESHOLD)
    v.add_argument("--spectrum-csv")
    v.add_argument("--report", metavar="FILE")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("scan", help="tabulate verdicts over a grid in the r-plane")
    c.add_argument("coupling_class", choices=classes)
    c.add_argument("--re-range", nargs=2, type=float, default=[-2.0, 2.0])
    c.add_argument("--im-range", nargs=2, type=float, default=[-2.0, 2.0])
    c.add_argument("--grid", nargs=2, type=int, default=[101, 101])
    c.add_argument("--samples", type=int, default=0, help="random points instead of a grid")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--lambda", dest="lam", type=_real, default=0.0)
    c.add_argument("--delta", type=_real, default=1.0)
    c.add_argument("--tau-a", type=_real, default=None, help="gap split for the generalized class (default delta/2)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_scan)

    e = sub.add_parser("evolve", help="leakage of exp(-itR) psi0 out of the synchronized subspace")
    e.add_argument("matrix")
    e.add_argument("--sidecar")
    e.add_argument("--psi0")
    e.add_argument("--t-max", type=float, default=10.0)
    e.add_argument("--steps", type=int, default=20)
    e.add_argument("--allow-any-psi0", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_evolve)

    d = sub.add_parser("discrete", help="exact Gaussian-integer design and verification")
    d.add_argument("--z", type=_gaussian_int)
    d.add_argument("--w", type=_gaussian_int)
    d.add_argument("--r", type=_number)
    d.add_argument("--epsilon", type=float, default=1e-3)
    d.add_argument("--q", type=int, default=None)
    d.add_argument("--method", choices=["auto", "dense", "structural"], default="auto")
    d.add_argument("--export", metavar="PREFIX")
    d.add_argument("--report", metavar="FILE")
    d.set_defaults(func=cmd_discrete)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "discrete" and args.z is None and args.r is None:
        parser.error("discrete needs --z/--w or --r")
    try:
        return args.func(args)
    except _InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOINPUT
    except QLBitError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
