"""Fourier coefficients against P_n: direct quadrature, the multiple-integral
route through the composed difference-quotient operators, the 1/(x+a)
eigenfunction product formula, and the Chebyshev generating function.

The multiple integrals use one Gaussian rule per chain level (sizes m, m+1,
... so node sets are generically disjoint); a pre-pass enforces the
divided-difference gap floor across dimensions and bumps the larger rule on
a violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import NodeCollision, OnSupport
from .measures import MeasureFamily
from .orthosys import OrthoSystem, transform_poly
from .poly import Polynomial, divided_difference, dd_gap_floor
from .quad import QuadratureRule, gauss_rule, integrate, tensor_integrate
from .secondary_chain import (
    SecondaryChain,
    density,
    level_coefficients,
    level_moment,
    level_recurrence,
    stieltjes,
)

__all__ = [
    "FourierReport",
    "TwoRoute",
    "GenfunCheck",
    "fourier_direct",
    "fourier_multiint",
    "isometry_check",
    "chain_reduction_check",
    "eigen_product",
    "generating_function_check",
    "level_rules",
]


@dataclass(frozen=True)
class FourierReport:
    n: int
    direct: float
    multiint: Optional[float]
    product_form: Optional[float]
    discrepancy: Optional[float]


@dataclass(frozen=True)
class TwoRoute:
    lhs: float
    rhs: float


@dataclass(frozen=True)
class GenfunCheck:
    partial_sum: float
    closed_form: float


def _direct_tol(fam: MeasureFamily) -> float:
    return 1e-10 if fam.support.kind == "compact" else 1e-8


def fourier_direct(sys: OrthoSystem, f: Callable[[float], float], n: int) -> float:
    """C_n(f) = <f, P_n> under the base density, by quadrature."""
    fam = sys.family
    if n > sys.size:
        raise ValueError(f"n={n} exceeds generated system size {sys.size}")
    pn, rho = sys.P[n], fam.density

    def integrand(x: float) -> float:
        r = rho(x)
        if r == 0.0:
            return 0.0
        return f(x) * pn(x) * r

    return integrate(integrand, fam.support, tol=_direct_tol(fam)).value


def level_rules(chain: SecondaryChain, sizes: Sequence[int]) -> list:
    """Gaussian rules for rho_0..rho_{d-1} with cross-dimension gap checks.

    On a gap violation the larger of the two offending rules grows by one
    point; after three retries NodeCollision propagates.
    """
    sizes = list(sizes)
    for attempt in range(4):
        rules = [gauss_rule(level_recurrence(chain, lev), sz) for lev, sz in enumerate(sizes)]
        clash = _first_collision(rules)
        if clash is None:
            return rules
        if attempt == 3:
            break
        i, j = clash
        if sizes[j] >= sizes[i]:
            sizes[j] += 1
        else:
            sizes[i] += 1
    raise NodeCollision(f"could not separate rule nodes for sizes {sizes}")


def _first_collision(rules: Sequence[QuadratureRule]):
    for i in range(len(rules)):
        for j in range(i + 1, len(rules)):
            floor = dd_gap_floor(rules[i].nodes + rules[j].nodes)
            for xi in rules[i].nodes:
                for xj in rules[j].nodes:
                    if abs(xi - xj) <= floor:
                        return i, j
    return None


def fourier_multiint(chain: SecondaryChain, f: Callable[[float], float], n: int, m: int) -> float:
    """C_n(f) as the (n+1)-fold integral of the divided-difference kernel
    against rho_0 ... rho_n, divided by the leading coefficient a_n.

    Exact for polynomial f of degree d once m >= d + 1.
    """
    if n > 3:
        raise ValueError("multiple-integral route is desk-scale: n <= 3")
    rules = level_rules(chain, [m + j for j in range(n + 1)])

    def kernel(*ts: float) -> float:
        return divided_difference(f, ts)

    return tensor_integrate(kernel, rules) / chain.base.a[n]


def _level_inner(chain: SecondaryChain, h: Callable[[float], float], n: int, tol: float) -> float:
    fam = chain.base.family

    def integrand(x: float) -> float:
        r = density(chain, n, x)
        if r == 0.0:
            return 0.0
        return h(x) * r

    return integrate(integrand, fam.support, tol=tol).value


def isometry_check(chain: SecondaryChain, f: Polynomial, g: Polynomial, n: int) -> TwoRoute:
    """Level-n covariance identity: <fg> - <f><g> under rho_n versus
    d_0^n <T_n f, T_n g> under rho_{n+1}.

    The left side integrates the level density directly (tanh-sinh); the
    right side uses exact shifted moments and a Gaussian rule, so the two
    routes share no quadrature machinery.
    """
    tol = _direct_tol(chain.base.family)
    lhs = (
        _level_inner(chain, lambda x: f(x) * g(x), n, tol)
        - _level_inner(chain, f, n, tol) * _level_inner(chain, g, n, tol)
    )
    tf = transform_poly(f, lambda k: level_moment(chain, n, k))
    tg = transform_poly(g, lambda k: level_moment(chain, n, k))
    prod = tf * tg
    rule_size = max(2, prod.degree // 2 + 1)
    rule = gauss_rule(level_recurrence(chain, n + 1), rule_size)
    inner = math.fsum(w * prod(x) for x, w in zip(rule.nodes, rule.weights))
    d0_n = level_coefficients(chain, n)[1]
    return TwoRoute(lhs=lhs, rhs=d0_n * inner)


def chain_reduction_check(chain: SecondaryChain, f: Polynomial, m: int, base_size: int = 6) -> TwoRoute:
    """<f, P_m> under rho_0 versus d_0^0...d_0^{m-1} <F_{m-1} f, F_{m-1} P_m>
    under rho_m, with both composed transforms evaluated as multiple integrals."""
    if m < 1 or m > 3:
        raise ValueError("chain reduction check is desk-scale: 1 <= m <= 3")
    rules = level_rules(chain, [base_size + j for j in range(m + 1)])
    inner_rules, outer = rules[:m], rules[m]
    pm = chain.base.P[m]

    def compose(h: Callable[[float], float], x: float) -> float:
        def kernel(*ts: float) -> float:
            return divided_difference(h, ts + (x,))

        return tensor_integrate(kernel, inner_rules)

    acc = math.fsum(
        w * compose(f, x) * compose(pm, x) for x, w in zip(outer.nodes, outer.weights)
    )
    coeff = 1.0
    for k in range(m):
        coeff *= level_coefficients(chain, k)[1]
    lhs = fourier_direct(chain.base, f, m)
    return TwoRoute(lhs=lhs, rhs=coeff * acc)


def eigen_product(chain: SecondaryChain, a: float, n: int) -> float:
    """C_n(1/(x+a)) from the eigenfunction product: -prod_k S_k(-a) / a_n."""
    fam = chain.base.family
    z = complex(-a, 0.0)
    if fam.support.distance(z) < 1e-9:
        raise OnSupport(f"-a={-a!r} is on the support of {fam.name!r}")
    prod = 1.0
    for k in range(n + 1):
        prod *= stieltjes(chain, k, z).real
    return -prod / chain.base.a[n]


def generating_function_check(
    sys: OrthoSystem, t: float, x: float, N: int = 30
) -> GenfunCheck:
    """Partial sum of sum_n t^(n+1) P_n(x) against t/((t+1)^2 - 4tx)."""
    if abs(t) >= 1.0:
        raise ValueError("generating function needs |t| < 1")
    if N > sys.size:
        raise ValueError(f"N={N} exceeds generated system size {sys.size}")
    partial = math.fsum(t ** (n + 1) * sys.P[n](x) for n in range(N + 1))
    closed = t / ((t + 1.0) ** 2 - 4.0 * t * x)
    return GenfunCheck(partial_sum=partial, closed_form=closed)
