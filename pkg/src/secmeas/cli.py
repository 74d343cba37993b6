"""Command-line front end: tables and reports as CSV or JSON.

Exit codes: 0 success, 1 failed verification checks, 2 configuration errors,
3 computational errors.  Output is byte-deterministic for a fixed config.
The environment variable SECMEAS_TOL overrides the default check tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import verify as verify_mod
from .errors import SecmeasError, UnknownCheck, UnknownFamily
from .fourier import eigen_product, fourier_direct, fourier_multiint
from .measures import BUILTIN_FAMILIES, get_family, load_family_file
from .poly import Polynomial
from .secondary_chain import (
    associated_system,
    build_chain,
    density,
    level_coefficients,
    reducer,
    stieltjes,
)

SCHEMA_VERSION = 1
_CONFIG_ERRORS = (UnknownFamily, UnknownCheck, ValueError)


def _fmt12(v) -> str:
    if v is None:
        return ""
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _emit(args, command: str, meta: dict, columns: list, rows: list) -> None:
    out = io.StringIO()
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "config": {k: meta[k] for k in sorted(meta)},
            "rows": [dict(zip(columns, row)) for row in rows],
        }
        out.write(json.dumps(payload, sort_keys=True, default=_json_default) + "\n")
    else:
        pairs = " ".join(f"{k}={_fmt12(meta[k])}" for k in sorted(meta))
        out.write(f"# secmeas {command} schema_version={SCHEMA_VERSION} {pairs}\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt12(v) for v in row])
    _write_out(args, out.getvalue())


def _json_default(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    raise TypeError(f"not JSON serializable: {type(v)}")


def _write_out(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(args) -> list:
    if args.points:
        return [float(p) for p in args.points.split(",")]
    start, stop, count = args.grid.split(":")
    start, stop, count = float(start), float(stop), int(count)
    if count < 2:
        raise ValueError("grid count must be >= 2")
    step = (stop - start) / (count - 1)
    return [start + k * step for k in range(count)]


def _resolve_family(args):
    if getattr(args, "family_file", None):
        return load_family_file(args.family_file)
    return get_family(args.family)


def _cmd_density(args) -> int:
    fam = _resolve_family(args)
    chain = build_chain(fam, max_level=max(args.n, 1))
    s_n, d0_n = level_coefficients(chain, args.n)
    t_n = fam.recurrence(args.n)[1]
    meta = {"family": fam.name, "n": args.n, "s_n": s_n, "t_n": t_n, "d0_n": d0_n}
    rows = [(x, density(chain, args.n, x), reducer(chain, args.n, x)) for x in _parse_grid(args)]
    _emit(args, "density", meta, ["x", "rho_n", "phi_n"], rows)
    return 0


def _cmd_reducer(args) -> int:
    fam = _resolve_family(args)
    chain = build_chain(fam, max_level=max(args.n, 1))
    s_n, d0_n = level_coefficients(chain, args.n)
    meta = {"family": fam.name, "n": args.n, "s_n": s_n, "d0_n": d0_n}
    rows = [(x, reducer(chain, args.n, x)) for x in _parse_grid(args)]
    _emit(args, "reducer", meta, ["x", "phi_n"], rows)
    return 0


def _cmd_stieltjes(args) -> int:
    fam = _resolve_family(args)
    chain = build_chain(fam, max_level=max(args.n, 1))
    meta = {"family": fam.name, "n": args.n}
    rows = []
    for spec in args.z:
        z = complex(spec)
        s = stieltjes(chain, args.n, z)
        rows.append((z.real, z.imag, s.real, s.imag))
    _emit(args, "stieltjes", meta, ["z_re", "z_im", "S_re", "S_im"], rows)
    return 0


def _cmd_verify(args) -> int:
    if args.family == "all":
        families = list(BUILTIN_FAMILIES)
    else:
        families = [f.strip() for f in args.family.split(",")]
        for f in families:
            get_family(f)
    if args.check:
        if args.check not in verify_mod.REGISTRY:
            raise UnknownCheck(f"unknown check {args.check!r}")
        results = []
        for name in families:
            fam = get_family(name)
            spec = verify_mod.REGISTRY[args.check]
            if not verify_mod._applicable(spec, fam):
                continue
            for params in spec.sweep(fam, args.max_n):
                if args.tolerance is not None:
                    params = {**params, "tolerance": args.tolerance}
                results.append(verify_mod.run_check(args.check, name, params))
    else:
        results = verify_mod.run_suite(families, max_n=args.max_n)
    out = io.StringIO()
    if args.format == "json":
        all_passed = verify_mod.write_report(results, out)
    else:
        writer = csv.writer(out, lineterminator="\n")
        out.write(f"# secmeas verify schema_version={SCHEMA_VERSION}\n")
        writer.writerow(["check_id", "family", "params", "expected", "actual", "rel_error", "passed"])
        for r in results:
            writer.writerow(
                [
                    r.check_id,
                    r.family,
                    json.dumps({k: v for k, v in sorted(r.params.items())}, sort_keys=True, default=str),
                    _fmt12(r.expected),
                    _fmt12(r.actual),
                    _fmt12(r.rel_error),
                    r.passed,
                ]
            )
        all_passed = all(r.passed for r in results)
    _write_out(args, out.getvalue())
    return 0 if all_passed else 1


def _parse_fspec(spec: str):
    if spec.startswith("rational:"):
        return float(spec.split(":", 1)[1])
    return Polynomial([float(c) for c in spec.split(",")])


def _cmd_fourier(args) -> int:
    fam = _resolve_family(args)
    chain = build_chain(fam, max_level=max(args.max_n + 1, 4))
    fspec = _parse_fspec(args.f)
    rational = not isinstance(fspec, Polynomial)
    meta = {"family": fam.name, "f": args.f, "max_n": args.max_n, "m": args.m}
    rows = []
    if rational:
        a = fspec
        func = lambda x: 1.0 / (x + a)  # noqa: E731
        columns = ["n", "direct", "multiint", "multiint_delta", "product_form", "discrepancy"]
        for n in range(args.max_n + 1):
            direct = fourier_direct(chain.base, func, n)
            product = eigen_product(chain, a, n)
            if n <= 3:
                multi = fourier_multiint(chain, func, n, args.m)
                delta = abs(multi - fourier_multiint(chain, func, n, args.m + 2))
                disc = abs(direct - multi)
            else:
                multi = delta = disc = None
            rows.append((n, direct, multi, delta, product, disc))
    else:
        columns = ["n", "direct", "multiint", "discrepancy"]
        for n in range(args.max_n + 1):
            direct = fourier_direct(chain.base, fspec, n)
            if n <= 3:
                multi = fourier_multiint(chain, fspec, n, args.m)
                disc = abs(direct - multi)
            else:
                multi = disc = None
            rows.append((n, direct, multi, disc))
    _emit(args, "fourier", meta, columns, rows)
    return 0


def _cmd_assoc(args) -> int:
    fam = _resolve_family(args)
    chain = build_chain(fam, max_level=max(args.k, 1))
    sys_k = associated_system(chain, args.k, args.N)
    meta = {"family": fam.name, "k": args.k, "N": args.N}
    width = args.N + 1
    columns = ["n", "degree"] + [f"c{j}" for j in range(width)]
    rows = []
    for n in range(args.N + 1):
        coeffs = list(sys_k.P[n].coeffs) + [None] * (width - len(sys_k.P[n].coeffs))
        rows.append(tuple([n, sys_k.P[n].degree] + coeffs))
    _emit(args, "assoc", meta, columns, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secmeas",
        description="Secondary-measure chains: densities, reducers, transforms, "
        "Fourier coefficients, and the identity verification suite.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_n=True):
        p.add_argument("--family", default="lebesgue01", help="built-in family name")
        p.add_argument("--family-file", help="path to a custom family definition file")
        if needs_n:
            p.add_argument("--n", type=int, default=1, help="chain level")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="write to file instead of stdout")

    p = sub.add_parser("density", help="tabulate rho_n and phi_n on a grid")
    add_common(p)
    p.add_argument("--grid", default="0.1:0.9:9", help="start:stop:count")
    p.add_argument("--points", help="comma-separated explicit points")
    p.set_defaults(fn=_cmd_density)

    p = sub.add_parser("reducer", help="tabulate phi_n on a grid")
    add_common(p)
    p.add_argument("--grid", default="0.1:0.9:9")
    p.add_argument("--points")
    p.set_defaults(fn=_cmd_reducer)

    p = sub.add_parser("stieltjes", help="evaluate S_n at complex points")
    add_common(p)
    p.add_argument("--z", nargs="+", required=True, help="complex points, e.g. 2.0 1+1j")
    p.set_defaults(fn=_cmd_stieltjes)

    p = sub.add_parser("verify", help="run registered identity checks")
    p.add_argument("--family", default="all", help="'all' or comma-separated names")
    p.add_argument("--max-n", type=int, default=4, dest="max_n")
    p.add_argument("--check", help="run a single check id")
    p.add_argument(
        "--tolerance",
        type=float,
        default=_env_tol(),
        help="override check tolerance (also via SECMEAS_TOL)",
    )
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("fourier", help="Fourier coefficients of f against P_n")
    p.add_argument("--family", default="lebesgue01")
    p.add_argument("--family-file")
    p.add_argument("--f", required=True, help="ascending coefficients 'c0,c1,...' or 'rational:a'")
    p.add_argument("--max-n", type=int, default=2, dest="max_n")
    p.add_argument("--m", type=int, default=7, help="base Gaussian rule size per dimension")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_fourier)

    p = sub.add_parser("assoc", help="dump coefficients of the level-k system P_n^k")
    p.add_argument("--family", default="lebesgue01")
    p.add_argument("--family-file")
    p.add_argument("--k", type=int, default=1, help="chain level")
    p.add_argument("--N", type=int, default=4, help="highest polynomial index")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(fn=_cmd_assoc)

    return parser


def _env_tol():
    raw = os.environ.get("SECMEAS_TOL")
    if raw is None:
        return None
    tol = float(raw)
    if not 0.0 < tol < 1.0:
        raise SystemExit("SECMEAS_TOL must be in (0, 1)")
    return tol


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tolerance", None) is not None and not 0.0 < args.tolerance < 1.0:
        parser.error("--tolerance must be in (0, 1)")
    try:
        return args.fn(args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SecmeasError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
