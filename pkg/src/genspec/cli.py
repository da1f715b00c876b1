"""Command-line front end: simulation, fitting, testing, forecasting.

Series come in as CSV with one numeric value per line (a single header
line is auto-detected); results go out as JSON or CSV, written atomically
so a crashed run never leaves a partial file. Every JSON payload carries
a "schema" tag.
"""

import argparse
import json
import sys

import numpy as np

from ._util import atomic_write_text
from .dists import TailCapError
from .empirical import Grid
from .estimate import ParamSpace, default_space, fit
from .forecast import hill_sequence, predictions_inar
from .infer import gof_test, invertibility_test, parameter_test, unit_root_test
from .models import COUNT_FAMILIES, ModelSpec, canonical_family, spectrum_lattice
from .simulate import simulate_path

SCHEMA = "genspec/1"


def _floats(text: str, flag: str) -> tuple:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"{flag} expects comma-separated numbers, got {text!r}")
    return vals


def _parse_alpha_set(text: str):
    if text.strip().lower() == "none":
        return None
    return _floats(text, "--alpha-set")


def _parse_bounds(text: str) -> tuple:
    pairs = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise ValueError(f"--bounds expects lo:hi pairs, got {part!r}")
        try:
            pairs.append((float(lo), float(hi)))
        except ValueError:
            raise ValueError(f"--bounds expects numeric lo:hi pairs, got {part!r}")
    return tuple(pairs)


def _read_series(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            rows = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}")
    if not rows:
        raise ValueError(f"{path} holds no data")
    start = 0
    try:
        float(rows[0])
    except ValueError:
        start = 1
    vals = []
    for lineno, ln in enumerate(rows[start:], start=start + 1):
        try:
            vals.append(float(ln))
        except ValueError:
            raise ValueError(f"{path} line {lineno}: not a number: {ln!r}")
    if not vals:
        raise ValueError(f"{path} holds no data")
    return np.asarray(vals, dtype=np.float64)


def _check_counts(z: np.ndarray, family: str) -> None:
    if family in COUNT_FAMILIES and (np.any(z < 0) or np.any(z != np.rint(z))):
        raise ValueError(f"family {family} expects nonnegative integer counts")


def _make_space(args, family: str):
    if getattr(args, "bounds", None):
        return ParamSpace(bounds=_parse_bounds(args.bounds))
    return default_space(
        family,
        L=args.L,
        d1=args.d1,
        d2=args.d2,
        alpha_set=_parse_alpha_set(args.alpha_set),
    )


def _fit_inputs(args):
    family = canonical_family(args.family)
    z = _read_series(args.infile)
    _check_counts(z, family)
    grid = Grid(L=args.L, M=args.M, n=z.size)
    space = _make_space(args, family)
    return family, z, grid, space


def _grid_config(args, n: int) -> dict:
    return {
        "n": int(n),
        "L": args.L,
        "M": args.M,
        "lmax": args.lmax,
        "seed": args.seed,
        "d1": args.d1,
        "d2": args.d2,
    }


def _write_json(path: str, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def _cmd_simulate(args) -> int:
    theta = _floats(args.theta, "--theta")
    model = ModelSpec(args.family, theta, d1=args.d1, d2=args.d2)
    z = simulate_path(model, args.n, args.seed)
    if model.family in COUNT_FAMILIES:
        body = "\n".join(str(int(v)) for v in z)
    else:
        body = "\n".join(repr(float(v)) for v in z)
    atomic_write_text(args.out, body + "\n")
    return 0


def _cmd_fit(args) -> int:
    family, z, grid, space = _fit_inputs(args)
    est = fit(
        z, family, space=space, grid=grid, seed=args.seed,
        lmax=args.lmax, d1=args.d1, d2=args.d2,
    )
    payload = {"schema": SCHEMA, **_grid_config(args, z.size), **est.report(),
               "converged": bool(est.converged)}
    _write_json(args.out, payload)
    return 0


def _cmd_gof(args) -> int:
    family, z, grid, space = _fit_inputs(args)
    rep = gof_test(
        z, family, space=space, grid=grid, b=args.b, phi=args.phi,
        seed=args.seed, lmax=args.lmax, d1=args.d1, d2=args.d2,
        threads=args.threads,
    )
    payload = {"schema": SCHEMA, "family": family,
               **_grid_config(args, z.size), **rep.report()}
    _write_json(args.out, payload)
    return 0


def _cmd_test_param(args) -> int:
    family, z, grid, space = _fit_inputs(args)
    rep = parameter_test(
        z, family, args.coord, args.kappa, mode=args.mode,
        transform=args.transform, space=space, grid=grid, b=args.b,
        phi=args.phi, seed=args.seed, lmax=args.lmax, d1=args.d1,
        d2=args.d2, threads=args.threads,
    )
    payload = {"schema": SCHEMA, "family": family, "coord": args.coord,
               "kappa": args.kappa, **_grid_config(args, z.size), **rep.report()}
    _write_json(args.out, payload)
    return 0


def _cmd_test_unitroot(args) -> int:
    z = _read_series(args.infile)
    grid = Grid(L=args.L, M=args.M, n=z.size)
    space = ParamSpace(bounds=_parse_bounds(args.bounds)) if args.bounds else None
    rep = unit_root_test(
        z, coord=args.coord, b=args.b, d1=args.d1, d2=args.d2, space=space,
        grid=grid, phi=args.phi, seed=args.seed, lmax=args.lmax,
        threads=args.threads,
    )
    payload = {"schema": SCHEMA, "family": "cauchy_ma_gen", "coord": args.coord,
               **_grid_config(args, z.size), **rep.report()}
    _write_json(args.out, payload)
    return 0


def _cmd_test_invert(args) -> int:
    z = _read_series(args.infile)
    grid = Grid(L=args.L, M=args.M, n=z.size)
    space = ParamSpace(bounds=_parse_bounds(args.bounds)) if args.bounds else None
    rep = invertibility_test(
        z, coord=args.coord, b=args.b, d1=args.d1, d2=args.d2, space=space,
        grid=grid, phi=args.phi, seed=args.seed, lmax=args.lmax,
        threads=args.threads,
    )
    payload = {"schema": SCHEMA, "family": "cauchy_ma_gen", "coord": args.coord,
               **_grid_config(args, z.size), **rep.report()}
    _write_json(args.out, payload)
    return 0


def _cmd_predict(args) -> int:
    z = _read_series(args.infile)
    if args.theta is not None:
        theta = _floats(args.theta, "--theta")
    else:
        try:
            with open(args.estimate) as fh:
                est = json.load(fh)
        except OSError as exc:
            raise ValueError(f"cannot read {args.estimate}: {exc}")
        except json.JSONDecodeError as exc:
            raise ValueError(f"{args.estimate} is not valid JSON: {exc}")
        if est.get("family") != "inar1":
            raise ValueError(f"{args.estimate} is not an inar1 estimate")
        theta = tuple(float(t) for t in est["theta_hat"])
    if len(theta) != 3:
        raise ValueError(f"prediction needs (delta, alpha, p), got {len(theta)} values")
    delta, alpha, p = theta
    preds = predictions_inar(z, args.split, p, delta, alpha)
    actual = z[args.split :].astype(np.int64)
    mspe = float(np.mean((preds - actual).astype(np.float64) ** 2))
    rows = ["t,actual,predicted"]
    rows += [f"{t},{a},{f}" for t, a, f in zip(range(args.split, z.size), actual, preds)]
    atomic_write_text(args.out, "\n".join(rows) + "\n")
    print(f"mspe={mspe:.6f}")
    return 0


def _cmd_hill(args) -> int:
    z = _read_series(args.infile)
    seq = hill_sequence(z)
    rows = ["k,hill"] + [f"{k},{float(v)!r}" for k, v in enumerate(seq, start=1)]
    atomic_write_text(args.out, "\n".join(rows) + "\n")
    return 0


def _cmd_spectrum_grid(args) -> int:
    theta = _floats(args.theta, "--theta")
    model = ModelSpec(args.family, theta, lmax=args.lmax, d1=args.d1, d2=args.d2)
    lam = np.asarray(_floats(args.lambdas, "--lambda"), dtype=np.float64)
    u = Grid(L=args.L, M=args.M, n=8).u_points  # n plays no role in the lattice
    f = spectrum_lattice(model, lam, u)
    rows = ["lambda,u,v,re,im"]
    for a in range(lam.size):
        for i in range(u.size):
            for k in range(u.size):
                rows.append(
                    f"{float(lam[a])!r},{float(u[i])!r},{float(u[k])!r},"
                    f"{float(f[a, i, k].real)!r},{float(f[a, i, k].imag)!r}"
                )
    atomic_write_text(args.out, "\n".join(rows) + "\n")
    return 0


def _add_lattice_flags(sp) -> None:
    sp.add_argument("--L", type=float, default=3.14, help="lattice half-width (default 3.14)")
    sp.add_argument("--M", type=int, default=30, help="lattice points per axis (default 30)")
    sp.add_argument("--lmax", type=int, default=2, help="Fourier truncation lag (default 2)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--d1", type=int, default=0, help="causal factors (cauchy_ma_gen)")
    sp.add_argument("--d2", type=int, default=0, help="anticausal factors (cauchy_ma_gen)")


def _add_fit_flags(sp) -> None:
    sp.add_argument("--family", required=True)
    sp.add_argument("--in", dest="infile", required=True, metavar="CSV")
    _add_lattice_flags(sp)
    sp.add_argument(
        "--alpha-set", default="0.3,0.7,0.9",
        help="candidate tail exponents, or 'none' for a continuous alpha",
    )
    sp.add_argument(
        "--bounds", default=None,
        help="parameter box lo:hi,lo:hi,... overriding the default space",
    )


def _add_test_flags(sp, default_b: int) -> None:
    sp.add_argument("--b", type=int, default=default_b, help="block length")
    sp.add_argument("--phi", type=float, default=0.05, help="rejection level (default 0.05)")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (env GENSPEC_THREADS); results do not depend on it")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genspec",
        description="Generalized-spectrum modeling of heavy-tailed time series",
    )
    sub = parser.add_subparsers(required=True, metavar="command")

    sp = sub.add_parser("simulate", help="draw a sample path into a CSV")
    sp.add_argument("--family", required=True)
    sp.add_argument("--theta", required=True, help="comma-separated parameters")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--d1", type=int, default=0)
    sp.add_argument("--d2", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_simulate)

    sp = sub.add_parser("fit", help="minimum-distance fit of a family")
    _add_fit_flags(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_fit)

    sp = sub.add_parser("gof", help="subsampling goodness-of-fit test")
    _add_fit_flags(sp)
    _add_test_flags(sp, default_b=30)
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_gof)

    sp = sub.add_parser("test-param", help="subsampling test about one coordinate")
    _add_fit_flags(sp)
    _add_test_flags(sp, default_b=50)
    sp.add_argument("--coord", type=int, required=True)
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--mode", choices=("two_sided", "greater", "less"), default="two_sided")
    sp.add_argument("--transform", choices=("identity", "abs"), default="identity")
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_test_param)

    for name, help_text, handler in (
        ("test-unitroot", "unit-root test on a moving-average factor", _cmd_test_unitroot),
        ("test-invert", "non-invertibility test on a moving-average factor", _cmd_test_invert),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--in", dest="infile", required=True, metavar="CSV")
        _add_lattice_flags(sp)
        sp.set_defaults(d1=1, d2=0)
        sp.add_argument("--coord", type=int, default=0)
        sp.add_argument("--bounds", default=None,
                        help="parameter box lo:hi,lo:hi,... overriding the default space")
        _add_test_flags(sp, default_b=50)
        sp.add_argument("--out", required=True)
        sp.set_defaults(handler=handler)

    sp = sub.add_parser("predict", help="one-step median forecasts and MSPE")
    sp.add_argument("--in", dest="infile", required=True, metavar="CSV")
    sp.add_argument("--split", type=int, required=True,
                    help="first test index; training is series[:split]")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--theta", help="delta,alpha,p")
    group.add_argument("--estimate", help="estimate.json from 'fit'")
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_predict)

    sp = sub.add_parser("hill", help="Hill tail-index sequence")
    sp.add_argument("--in", dest="infile", required=True, metavar="CSV")
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_hill)

    sp = sub.add_parser("spectrum-grid", help="parametric spectrum on the lattice")
    sp.add_argument("--family", required=True)
    sp.add_argument("--theta", required=True, help="comma-separated parameters")
    sp.add_argument("--lambda", dest="lambdas", required=True,
                    help="comma-separated frequencies")
    _add_lattice_flags(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(handler=_cmd_spectrum_grid)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, TailCapError, OSError) as exc:
        print(f"genspec: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
