"""Catalog of measure families with closed-form density, reducer, and transform.

Each family carries: the support, the density rho, the reducer
phi(x) = lim_{eps->0+} S(x - i*eps) + S(x + i*eps), the Stieltjes transform
S(z) = int rho(t)/(z - t) dt with the branch that makes S(z) ~ 1/z at
infinity, and the orthonormal three-term recurrence n -> (s_n, t_n).

Reducer signs are fixed by the eps-limit of the closed-form transform (the
published bracket puts phi/2 inside a square, so the sign is unobservable
there); the test suite pins each sign against principal-value quadrature.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from . import special
from .errors import CapabilityMissing, OnSupport, OutOfDomain, UnknownFamily
from .quad import Support, integrate, jacobi_moment

__all__ = [
    "MeasureFamily",
    "BUILTIN_FAMILIES",
    "get_family",
    "moment",
    "d0",
    "eval_stieltjes",
    "eval_reducer",
    "load_family_file",
    "register_family",
    "N_MAX_DEFAULT",
]

N_MAX_DEFAULT = 32
_ON_SUPPORT_DIST = 1e-12

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI_2 = math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class MeasureFamily:
    name: str
    support: Support
    recurrence: Callable[[int], tuple]
    density: Optional[Callable[[float], float]] = None
    reducer: Optional[Callable[[float], float]] = None
    stieltjes: Optional[Callable[[complex], complex]] = None
    n_max: int = N_MAX_DEFAULT


# ---------------------------------------------------------------------------
# Built-in families.
# ---------------------------------------------------------------------------


def _lebesgue01() -> MeasureFamily:
    support = Support("compact", 0.0, 1.0)

    def density(x: float) -> float:
        return 1.0 if 0.0 <= x <= 1.0 else 0.0

    def reducer(x: float) -> float:
        if not 0.0 < x < 1.0:
            raise OutOfDomain(f"reducer of lebesgue01 needs x in (0,1), got {x!r}")
        return 2.0 * (math.log(x) - math.log1p(-x))

    def stielt(z: complex) -> complex:
        # z/(z-1) avoids the principal-log cut for every z off [0, 1].
        return cmath.log(z / (z - 1.0))

    def rec(n: int) -> tuple:
        return 0.5, (n + 1) / (2.0 * math.sqrt((2 * n + 1) * (2 * n + 3)))

    return MeasureFamily("lebesgue01", support, rec, density, reducer, stielt)


def _exponential() -> MeasureFamily:
    support = Support("halfline", 0.0)

    def density(x: float) -> float:
        return math.exp(-x) if x >= 0.0 else 0.0

    def reducer(x: float) -> float:
        if x <= 0.0:
            raise OutOfDomain(f"reducer of exponential needs x > 0, got {x!r}")
        return 2.0 * special.ei_scaled(x)

    def rec(n: int) -> tuple:
        return 2.0 * n + 1.0, float(n + 1)

    return MeasureFamily(
        "exponential", support, rec, density, reducer, special.stieltjes_exponential
    )


def _gaussian() -> MeasureFamily:
    support = Support("realline")

    def density(x: float) -> float:
        return math.exp(-0.5 * x * x) / _SQRT_2PI

    def reducer(x: float) -> float:
        return 2.0 * _SQRT_PI_2 * special.erfi_scaled(x / math.sqrt(2.0))

    def stielt(z: complex) -> complex:
        if z.imag > 0.0:
            return -1j * _SQRT_PI_2 * special.faddeeva(z / math.sqrt(2.0))
        if z.imag < 0.0:
            return (-1j * _SQRT_PI_2 * special.faddeeva(z.conjugate() / math.sqrt(2.0))).conjugate()
        raise OnSupport(f"gaussian transform undefined on the real axis, got {z!r}")

    def rec(n: int) -> tuple:
        return 0.0, math.sqrt(n + 1.0)

    return MeasureFamily("gaussian", support, rec, density, reducer, stielt)


def _chebyshev2() -> MeasureFamily:
    support = Support("compact", -1.0, 1.0)

    def density(x: float) -> float:
        if abs(x) > 1.0:
            return 0.0
        return 2.0 / math.pi * math.sqrt(1.0 - x * x)

    def reducer(x: float) -> float:
        if not -1.0 < x < 1.0:
            raise OutOfDomain(f"reducer of chebyshev2 needs x in (-1,1), got {x!r}")
        return 4.0 * x

    def stielt(z: complex) -> complex:
        # sqrt(z-1)*sqrt(z+1) has its cut exactly on [-1, 1] and ~ z at
        # infinity; the rationalized form 2(z - sqrt(z^2-1)) = 2/(z + sqrt(..))
        # avoids the large-|z| cancellation.
        return 2.0 / (z + cmath.sqrt(z - 1.0) * cmath.sqrt(z + 1.0))

    def rec(n: int) -> tuple:
        return 0.0, 0.5

    return MeasureFamily("chebyshev2", support, rec, density, reducer, stielt)


def _chebyshev2_01() -> MeasureFamily:
    support = Support("compact", 0.0, 1.0)

    def density(x: float) -> float:
        if not 0.0 <= x <= 1.0:
            return 0.0
        return 8.0 / math.pi * math.sqrt(x * (1.0 - x))

    def reducer(x: float) -> float:
        if not 0.0 < x < 1.0:
            raise OutOfDomain(f"reducer of chebyshev2_01 needs x in (0,1), got {x!r}")
        return 16.0 * x - 8.0

    def stielt(z: complex) -> complex:
        # Affine image of the chebyshev2 transform, rationalized the same way:
        # 4(2z-1) - 8 sqrt(z-1) sqrt(z) == 4 / ((2z-1) + 2 sqrt(z-1) sqrt(z)).
        return 4.0 / ((2.0 * z - 1.0) + 2.0 * cmath.sqrt(z - 1.0) * cmath.sqrt(z))

    def rec(n: int) -> tuple:
        # t_n = a_n / a_{n+1} with leading coefficients a_n = 4^n.
        return 0.5, 0.25

    return MeasureFamily("chebyshev2_01", support, rec, density, reducer, stielt)


_BUILTIN_FACTORIES = {
    "lebesgue01": _lebesgue01,
    "exponential": _exponential,
    "gaussian": _gaussian,
    "chebyshev2": _chebyshev2,
    "chebyshev2_01": _chebyshev2_01,
}

BUILTIN_FAMILIES = tuple(_BUILTIN_FACTORIES)

_loaded_families: dict[str, MeasureFamily] = {}


def _far_point(support: Support) -> complex:
    # A point of modulus 1e6 well off the support: the real axis may *be*
    # the support, so unbounded families move off-axis or to the far side.
    if support.kind == "compact":
        return complex(1e6, 0.0)
    if support.kind == "halfline":
        return complex(-1e6, 0.0)
    return 1e6 * complex(math.cos(math.pi / 4.0), math.sin(math.pi / 4.0))


def _validate(fam: MeasureFamily) -> MeasureFamily:
    for n in range(fam.n_max + 1):
        s, t = fam.recurrence(n)
        if not (math.isfinite(s) and t > 0.0):
            raise ValueError(f"{fam.name}: recurrence invalid at n={n}: ({s}, {t})")
    if fam.density is not None:
        tol = 1e-10 if fam.support.kind == "compact" else 1e-8
        mass = integrate(fam.density, fam.support, tol=tol)
        if abs(mass.value - 1.0) > 10.0 * tol:
            raise ValueError(f"{fam.name}: density mass {mass.value!r} is not 1")
    if fam.stieltjes is not None:
        for z in (1.3 + 0.7j, -0.4 + 2.1j):
            if abs(fam.stieltjes(z.conjugate()) - fam.stieltjes(z).conjugate()) > 1e-12:
                raise ValueError(f"{fam.name}: transform breaks real symmetry at {z!r}")
        z = _far_point(fam.support)
        if abs(z * fam.stieltjes(z) - 1.0) > 1e-4:
            raise ValueError(f"{fam.name}: transform misses 1/z asymptotics at {z!r}")
    return fam


@lru_cache(maxsize=None)
def _builtin(name: str) -> MeasureFamily:
    return _validate(_BUILTIN_FACTORIES[name]())


def get_family(name: str) -> MeasureFamily:
    """Return a fully validated family by name (built-in or loaded)."""
    if name in _BUILTIN_FACTORIES:
        return _builtin(name)
    if name in _loaded_families:
        return _loaded_families[name]
    raise UnknownFamily(f"unknown family {name!r}; built-ins: {', '.join(BUILTIN_FAMILIES)}")


def register_family(fam: MeasureFamily) -> MeasureFamily:
    if fam.name in _BUILTIN_FACTORIES:
        raise ValueError(f"cannot shadow built-in family {fam.name!r}")
    _loaded_families[fam.name] = _validate(fam)
    return _loaded_families[fam.name]


# ---------------------------------------------------------------------------
# Operations.
# ---------------------------------------------------------------------------


def moment(fam: MeasureFamily, k: int) -> float:
    """k-th moment of the family, from powers of the Jacobi matrix."""
    if k < 0 or k > 2 * fam.n_max:
        raise ValueError(f"moment order {k} outside 0..{2 * fam.n_max}")
    return jacobi_moment(fam.recurrence, k)


def d0(fam: MeasureFamily) -> float:
    """Mass of the secondary measure: c2 - c1^2 (equals t_0^2)."""
    return moment(fam, 2) - moment(fam, 1) ** 2


def eval_stieltjes(fam: MeasureFamily, z: complex) -> complex:
    if fam.stieltjes is None:
        raise CapabilityMissing(f"family {fam.name!r} has no closed-form transform")
    z = complex(z)
    if fam.support.distance(z) < _ON_SUPPORT_DIST:
        raise OnSupport(f"{z!r} is on the support of {fam.name!r}")
    return fam.stieltjes(z)


def eval_reducer(fam: MeasureFamily, x: float) -> float:
    if fam.reducer is None:
        raise CapabilityMissing(f"family {fam.name!r} has no closed-form reducer")
    if not fam.support.is_interior(x):
        raise OutOfDomain(f"{x!r} is not interior to the support of {fam.name!r}")
    return fam.reducer(x)


# ---------------------------------------------------------------------------
# Custom family files.
# ---------------------------------------------------------------------------


def load_family_file(path: str) -> MeasureFamily:
    """Load a custom family from a key-value text file and register it.

    Schema (see README): ``name = <identifier>``, ``support = compact A B`` |
    ``halfline A`` | ``realline``, then a ``recurrence:`` line followed by one
    ``s_n t_n`` pair per line, ascending in n.  Custom families carry no
    density/reducer/transform closures; operations needing them raise
    CapabilityMissing.
    """
    name = None
    support = None
    pairs: list[tuple] = []
    in_table = False
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if in_table:
                parts = line.split()
                if len(parts) != 2:
                    raise ValueError(f"bad recurrence row {line!r} in {path}")
                pairs.append((float(parts[0]), float(parts[1])))
                continue
            if line.lower().startswith("recurrence"):
                in_table = True
                continue
            if "=" not in line:
                raise ValueError(f"bad line {line!r} in {path}")
            key, val = (p.strip() for p in line.split("=", 1))
            if key == "name":
                name = val
            elif key == "support":
                parts = val.split()
                kind = parts[0]
                if kind == "compact":
                    support = Support("compact", float(parts[1]), float(parts[2]))
                elif kind == "halfline":
                    support = Support("halfline", float(parts[1]))
                elif kind == "realline":
                    support = Support("realline")
                else:
                    raise ValueError(f"unknown support kind {kind!r} in {path}")
            else:
                raise ValueError(f"unknown key {key!r} in {path}")
    if name is None or support is None or not pairs:
        raise ValueError(f"{path}: need name, support, and a recurrence table")
    table = tuple(pairs)

    def rec(n: int) -> tuple:
        if n >= len(table):
            raise ValueError(f"custom family {name!r} has only {len(table)} recurrence rows")
        return table[n]

    fam = MeasureFamily(name, support, rec, None, None, None, n_max=len(table) - 1)
    return register_family(fam)
