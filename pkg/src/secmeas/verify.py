"""Identity-verification harness: every boxed identity as a named check.

Each check id maps to one identity; ``run_check`` executes a single
(parameterized) instance and ``run_suite`` sweeps the registry over families.
Expected values carry dual provenance where the literature gives closed
forms: the recurrence route (t_m^2, s_n t_{n-1}^2, ...) is always the
``expected`` field, and closed forms are recorded in the result params under
both index readings so an off-by-one in conventions is flagged, never
silently absorbed.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import SecmeasError, UnknownCheck
from .fourier import (
    eigen_product,
    fourier_direct,
    fourier_multiint,
    generating_function_check,
    isometry_check,
)
from .measures import BUILTIN_FAMILIES, MeasureFamily, get_family
from .orthosys import orthonormality_check
from .poly import Polynomial, X
from .quad import integrate
from .secondary_chain import (
    associated_system,
    associated_system_matrix,
    associated_system_shifted,
    build_chain,
    density,
    pade_check,
)

__all__ = ["CheckResult", "REGISTRY", "run_check", "run_suite", "to_json_line", "write_report"]

SCHEMA_VERSION = 1

_FAMILY_TOL = {
    "lebesgue01": 1e-6,
    "chebyshev2": 1e-6,
    "chebyshev2_01": 1e-6,
    "exponential": 1e-4,
    "gaussian": 1e-4,
}


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    family: str
    params: dict
    expected: object
    actual: object
    rel_error: float
    passed: bool
    error: Optional[str] = None


def _family_tol(name: str) -> float:
    return _FAMILY_TOL.get(name, 1e-6)


def _rel_error(expected, actual) -> float:
    diff = abs(actual - expected)
    if expected == 0:
        return diff
    return diff / abs(expected)


def _result(check_id, family, params, expected, actual, tol) -> CheckResult:
    rel = _rel_error(expected, actual)
    return CheckResult(
        check_id=check_id,
        family=family,
        params={**params, "tolerance": tol},
        expected=expected,
        actual=actual,
        rel_error=rel,
        passed=bool(rel <= tol),
    )


def _chain(fam: MeasureFamily):
    return build_chain(fam, max_level=10)


def _bracket_integrand(fam: MeasureFamily, sys, m: int, weight_power: int = 0):
    rho, red = fam.density, fam.reducer
    pm, qm = sys.P[m], sys.Q[m]

    def f(x: float) -> float:
        r = rho(x)
        if r == 0.0:
            return 0.0
        b = pm(x) * 0.5 * red(x) - qm(x)
        v = r / (b * b + (math.pi * r * pm(x)) ** 2)
        return v * x**weight_power if weight_power else v

    return f


_CLOSED_FORM_43 = {
    "lebesgue01": lambda m: (m + 1) ** 2 / (4.0 * (2 * m + 1) * (2 * m + 3)),
    "exponential": lambda m: float((m + 1) ** 2),
    "gaussian": lambda m: float(m + 1),
}


def _check_identity_43(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])  # chain level; the integrand carries P_{n-1}, Q_{n-1}
    m = n - 1
    chain = _chain(fam)
    value = integrate(
        _bracket_integrand(fam, chain.base, m), fam.support, tol=min(tol * 1e-2, 1e-7)
    ).value
    expected = fam.recurrence(m)[1] ** 2
    extra = {"integrand_index": m}
    cf = _CLOSED_FORM_43.get(fam.name)
    if cf is not None:
        # Both index readings of the published closed form; neither is picked
        # silently -- the matching one is recorded next to its rival.
        at_m, at_np = cf(m), cf(m + 1)
        extra["closed_form_at_index"] = at_m
        extra["closed_form_at_index_plus_1"] = at_np
        extra["closed_form_matches"] = (
            "index" if abs(value - at_m) <= abs(value - at_np) else "index_plus_1"
        )
    res = _result("identity_43", fam.name, {**params, **extra}, expected, value, tol)
    if cf is not None and abs(value - cf(m)) > tol * abs(cf(m)):
        res = dataclasses.replace(res, passed=False, error="closed form mismatch")
    return res


def _check_identity_61(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])
    m = n - 1
    chain = _chain(fam)
    value = integrate(
        _bracket_integrand(fam, chain.base, m, weight_power=1),
        fam.support,
        tol=min(tol * 1e-2, 1e-7),
    ).value
    s_n = fam.recurrence(n)[0]
    expected = s_n * fam.recurrence(m)[1] ** 2
    return _result("identity_61", fam.name, {**params, "integrand_index": m}, expected, value, tol)


def _coeff_deviation(p: Polynomial, q: Polynomial, scale: Optional[float] = None) -> float:
    """Max coefficient difference, relative to a scale.

    The scale defaults to the largest coefficient of the compared pair; for
    identities formed by cancelling large products (Wronskian, Turan) the
    caller passes the operand scale instead, which is the level at which
    float arithmetic can certify the identity at all.
    """
    if scale is None:
        scale = max([1e-30] + [abs(c) for c in p.coeffs] + [abs(c) for c in q.coeffs])
    width = max(len(p.coeffs), len(q.coeffs))
    dev = 0.0
    for k in range(width):
        a = p.coeffs[k] if k < len(p.coeffs) else 0.0
        b = q.coeffs[k] if k < len(q.coeffs) else 0.0
        dev = max(dev, abs(a - b))
    return dev / scale


def _max_coeff(*polys: Polynomial) -> float:
    return max([1e-30] + [abs(c) for p in polys for c in p.coeffs])


def _check_wronskian(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    max_n = int(params.get("max_n", 10))
    sys = _chain(fam).base
    worst = 0.0
    for n in range(max_n + 1):
        lhs = sys.Q[n + 1] * sys.P[n]
        rhs = sys.P[n + 1] * sys.Q[n]
        expected = Polynomial([1.0 / fam.recurrence(n)[1]])
        scale = max(_max_coeff(lhs, rhs), 1.0 / fam.recurrence(n)[1])
        worst = max(worst, _coeff_deviation(lhs - rhs, expected, scale=scale))
    return _result("wronskian", fam.name, params, 0.0, worst, tol)


def _default_pade_z(fam: MeasureFamily) -> complex:
    kind = fam.support.kind
    if kind == "compact":
        return complex(1e4, 0.0)
    if kind == "halfline":
        return complex(-1e4, 0.0)
    return 1e4 * complex(math.cos(math.pi / 4.0), math.sin(math.pi / 4.0))


def _check_pade(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])
    z = complex(params.get("z", _default_pade_z(fam)))
    res = pade_check(_chain(fam).base, n, z)
    out = _result("pade_asym", fam.name, {**params, "z": z}, res.rhs, res.lhs, tol)
    return out


def _check_chain_moments(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])
    which = params["which"]
    chain = _chain(fam)
    qtol = min(tol * 1e-2, 1e-8)

    def level_integral(power: int) -> float:
        def f(x: float) -> float:
            r = density(chain, n, x)
            return r * x**power if power else r

        return integrate(f, fam.support, tol=qtol).value

    s_n, t_n = fam.recurrence(n)
    if which == "mass":
        expected, actual = 1.0, level_integral(0)
    elif which == "c1":
        expected, actual = s_n, level_integral(1)
    elif which == "d0":
        c1 = level_integral(1)
        expected, actual = t_n * t_n, level_integral(2) - c1 * c1
    else:
        raise ValueError(f"chain_moments: unknown 'which' {which!r}")
    return _result("chain_moments", fam.name, params, expected, actual, tol)


def _check_fixed_point(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    which = params["which"]
    chain = _chain(fam)
    if which == "density_grid":
        a, b = fam.support.a, fam.support.b
        grid = np.linspace(a, b, int(params.get("points", 101)))
        worst = max(abs(density(chain, 1, float(x)) - fam.density(float(x))) for x in grid)
        return _result("fixed_point", fam.name, params, 0.0, worst, tol)
    if which == "turan":
        max_n = int(params.get("max_n", 10))
        sys = chain.base
        worst = 0.0
        for n in range(1, max_n + 1):
            sq = sys.P[n] * sys.P[n]
            cross = sys.P[n - 1] * sys.P[n + 1]
            scale = max(_max_coeff(sq, cross), 1.0)
            worst = max(worst, _coeff_deviation(sq - cross, Polynomial([1.0]), scale=scale))
        return _result("fixed_point", fam.name, params, 0.0, worst, tol)
    raise ValueError(f"fixed_point: unknown 'which' {which!r}")


def _check_genfun(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    t, x, big_n = float(params["t"]), float(params["x"]), int(params.get("N", 30))
    res = generating_function_check(_chain(fam).base, t, x, big_n)
    return _result("genfun", fam.name, params, res.closed_form, res.partial_sum, tol)


_MULTIINT_POLYS = {
    "1+x^3": Polynomial([1.0, 0.0, 0.0, 1.0]),
    "x+x^2+x^3+x^6": Polynomial([0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0]),
}


def _check_multiint(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])
    f = _MULTIINT_POLYS[params["f"]]
    m = int(params.get("m", f.degree + 1))
    chain = _chain(fam)
    direct = fourier_direct(chain.base, f, n)
    multi = fourier_multiint(chain, f, n, m)
    return _result("multiint_vs_direct", fam.name, {**params, "m": m}, direct, multi, tol)


_ISOMETRY_PAIRS = {
    "x|x": (X, X),
    "x^2+x|x^3+x": (Polynomial([0, 1, 1]), Polynomial([0, 1, 0, 1])),
}


def _check_isometry(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])
    f, g = _ISOMETRY_PAIRS[params["pair"]]
    res = isometry_check(_chain(fam), f, g, n)
    return _result("isometry", fam.name, params, res.lhs, res.rhs, tol)


_EIGEN_A = {
    "lebesgue01": 1.0,
    "chebyshev2_01": 1.0,
    "chebyshev2": 2.0,
    "exponential": 1.0,
}


def _check_eigenproduct(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    n = int(params["n"])
    a = float(params.get("a", _EIGEN_A.get(fam.name, 2.0)))
    chain = _chain(fam)
    direct = fourier_direct(chain.base, lambda x: 1.0 / (x + a), n)
    prod = eigen_product(chain, a, n)
    return _result("eigenproduct", fam.name, {**params, "a": a}, direct, prod, tol)


def _check_assoc(fam: MeasureFamily, params: dict, tol: float) -> CheckResult:
    level = int(params["k"])
    which = params["which"]
    chain = _chain(fam)
    max_n = int(params.get("max_n", 4))
    if which == "routes":
        closed = associated_system(chain, level, max_n)
        matrix = associated_system_matrix(chain, level, max_n)
        shifted = associated_system_shifted(chain, level, max_n)
        worst = 0.0
        for j in range(max_n + 1):
            worst = max(worst, _coeff_deviation(closed.P[j], matrix.P[j]))
            worst = max(worst, _coeff_deviation(closed.P[j], shifted.P[j]))
            worst = max(worst, _coeff_deviation(closed.Q[j], matrix.Q[j]))
            worst = max(worst, _coeff_deviation(closed.Q[j], shifted.Q[j]))
        return _result("assoc_orthogonality", fam.name, params, 0.0, worst, tol)
    if which == "orthonormality":
        sys = associated_system(chain, level, max_n)
        worst = 0.0
        for i in range(max_n + 1):
            for j in range(i, max_n + 1):
                val = orthonormality_check(sys, i, j)
                worst = max(worst, abs(val - (1.0 if i == j else 0.0)))
        return _result("assoc_orthogonality", fam.name, params, 0.0, worst, tol)
    raise ValueError(f"assoc_orthogonality: unknown 'which' {which!r}")


@dataclass(frozen=True)
class CheckSpec:
    fn: Callable
    needs_closed_forms: bool
    families: Optional[tuple]
    sweep: Callable[[MeasureFamily, int], list]
    tol: Optional[float] = None  # fixed tolerance; None = per-family default


def _levels(lo: int):
    def sweep(fam: MeasureFamily, max_n: int) -> list:
        return [{"n": n} for n in range(lo, max_n + 1)]

    return sweep


REGISTRY: dict[str, CheckSpec] = {
    "identity_43": CheckSpec(_check_identity_43, True, None, _levels(1)),
    "identity_61": CheckSpec(_check_identity_61, True, None, _levels(1)),
    "wronskian": CheckSpec(
        _check_wronskian, False, None, lambda fam, max_n: [{"max_n": 10}], tol=1e-9
    ),
    "pade_asym": CheckSpec(_check_pade, False, None, _levels(0), tol=1e-2),
    "chain_moments": CheckSpec(
        _check_chain_moments,
        True,
        None,
        lambda fam, max_n: [
            {"n": n, "which": w} for n in range(1, max_n + 1) for w in ("mass", "c1", "d0")
        ],
    ),
    "fixed_point": CheckSpec(
        _check_fixed_point,
        True,
        ("chebyshev2", "chebyshev2_01"),
        lambda fam, max_n: [{"which": "density_grid"}, {"which": "turan"}],
        tol=None,
    ),
    "genfun": CheckSpec(
        _check_genfun,
        False,
        ("chebyshev2_01",),
        lambda fam, max_n: [
            {"t": 0.3, "x": 0.5, "N": 30},
            {"t": -0.45, "x": 0.25, "N": 30},
            {"t": 0.2, "x": 0.8, "N": 30},
        ],
        tol=1e-10,
    ),
    "multiint_vs_direct": CheckSpec(
        _check_multiint,
        True,
        None,
        lambda fam, max_n: [
            {"n": n, "f": f} for n in range(0, min(3, max_n) + 1) for f in _MULTIINT_POLYS
        ],
        tol=1e-7,
    ),
    "isometry": CheckSpec(
        _check_isometry,
        True,
        None,
        lambda fam, max_n: [
            {"n": n, "pair": p} for n in range(0, min(2, max_n) + 1) for p in _ISOMETRY_PAIRS
        ],
        tol=1e-7,
    ),
    "eigenproduct": CheckSpec(
        _check_eigenproduct,
        True,
        ("lebesgue01", "chebyshev2", "chebyshev2_01", "exponential"),
        _levels(0),
        tol=1e-7,
    ),
    "assoc_orthogonality": CheckSpec(
        _check_assoc,
        False,
        None,
        lambda fam, max_n: [{"k": k, "which": "routes", "max_n": 4} for k in range(0, 4)]
        + (
            [{"k": k, "which": "orthonormality", "max_n": 3} for k in range(0, 4)]
            if fam.support.kind == "compact" and fam.density is not None
            else []
        ),
        tol=None,
    ),
}

_ASSOC_TOL = {"routes": 1e-8, "orthonormality": 1e-6}
_FIXED_POINT_TOL = {"density_grid": 1e-8, "turan": 1e-9}


def _resolve_tol(check_id: str, fam_name: str, params: dict) -> float:
    if "tolerance" in params:
        return float(params["tolerance"])
    spec = REGISTRY[check_id]
    if check_id == "assoc_orthogonality":
        return _ASSOC_TOL[params["which"]]
    if check_id == "fixed_point":
        return _FIXED_POINT_TOL[params["which"]]
    if check_id == "eigenproduct":
        return 1e-7 if get_family(fam_name).support.kind == "compact" else 1e-6
    if spec.tol is not None:
        return spec.tol
    return _family_tol(fam_name)


def run_check(check_id: str, family: str, params: Optional[dict] = None) -> CheckResult:
    """Execute one registered check; computational failures become failed results."""
    if check_id not in REGISTRY:
        raise UnknownCheck(f"unknown check {check_id!r}; known: {', '.join(sorted(REGISTRY))}")
    params = dict(params or {})
    fam = get_family(family)
    tol = _resolve_tol(check_id, family, params)
    params.pop("tolerance", None)
    try:
        return REGISTRY[check_id].fn(fam, params, tol)
    except SecmeasError as exc:
        return CheckResult(
            check_id=check_id,
            family=family,
            params={**params, "tolerance": tol},
            expected=None,
            actual=None,
            rel_error=math.inf,
            passed=False,
            error=f"{type(exc).__name__}: {exc}",
        )


def _applicable(spec: CheckSpec, fam: MeasureFamily) -> bool:
    if spec.families is not None and fam.name not in spec.families:
        return False
    if spec.needs_closed_forms and (fam.density is None or fam.reducer is None):
        return False
    return True


def run_suite(families, max_n: int = 4) -> list:
    """Cartesian sweep of the registry over the given family names."""
    results = []
    for name in families:
        fam = get_family(name)
        for check_id in sorted(REGISTRY):
            spec = REGISTRY[check_id]
            if not _applicable(spec, fam):
                continue
            for params in spec.sweep(fam, max_n):
                results.append(run_check(check_id, name, params))
    results.sort(key=lambda r: (r.check_id, r.family, json.dumps(r.params, sort_keys=True, default=str)))
    return results


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def to_json_line(res: CheckResult) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "check_id": res.check_id,
        "family": res.family,
        "params": {k: _jsonable(v) for k, v in sorted(res.params.items())},
        "expected": _jsonable(res.expected),
        "actual": _jsonable(res.actual),
        "rel_error": _jsonable(res.rel_error),
        "passed": res.passed,
    }
    if res.error is not None:
        payload["error"] = res.error
    return json.dumps(payload, sort_keys=True)


def write_report(results, fh) -> bool:
    """Write the JSON-lines report plus a summary line; True if all passed."""
    for res in results:
        fh.write(to_json_line(res) + "\n")
    passed = sum(1 for r in results if r.passed)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "summary": {"total": len(results), "passed": passed, "failed": len(results) - passed},
    }
    fh.write(json.dumps(summary, sort_keys=True) + "\n")
    return passed == len(results)
