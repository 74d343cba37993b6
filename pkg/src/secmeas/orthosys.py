"""Orthonormal polynomials P_n, secondary polynomials Q_n, and the operator T.

Both sequences obey the same three-term recurrence
``p_{n+1} = ((x - s_n) p_n - t_{n-1} p_{n-1}) / t_n`` and differ only in the
seeds: P_0 = 1, P_1 = (x - s_0)/t_0 versus Q_0 = 0, Q_1 = 1/t_0.  Q_n is the
image of P_n under the difference-quotient operator
``T(f)(x) = int (f(t) - f(x))/(t - x) rho(t) dt``, which is also exposed
directly (termwise against moments) as an independent construction route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import CapabilityMissing
from .measures import MeasureFamily, moment
from .poly import ONE, ZERO, Polynomial, X
from .quad import integrate, jacobi_moment

__all__ = [
    "OrthoSystem",
    "generate",
    "generate_from_recurrence",
    "apply_T_poly",
    "transform_poly",
    "orthonormality_check",
]


@dataclass(frozen=True)
class OrthoSystem:
    family: MeasureFamily
    P: tuple
    Q: tuple
    a: tuple  # leading coefficients of P

    @property
    def size(self) -> int:
        return len(self.P) - 1


def generate_from_recurrence(
    family: MeasureFamily, recurrence: Callable[[int], tuple], N: int
) -> OrthoSystem:
    if N < 0:
        raise ValueError("N must be >= 0")
    if N > family.n_max:
        raise ValueError(f"N={N} exceeds the family budget n_max={family.n_max}")
    s0, t0 = recurrence(0)
    P = [ONE, Polynomial([-s0 / t0, 1.0 / t0])]
    Q = [ZERO, Polynomial([1.0 / t0])]
    a = [1.0, 1.0 / t0]
    for n in range(1, N):
        s, t = recurrence(n)
        _, t_prev = recurrence(n - 1)
        shift = Polynomial([-s, 1.0])
        P.append((shift * P[n] - t_prev * P[n - 1]).scale(1.0 / t))
        Q.append((shift * Q[n] - t_prev * Q[n - 1]).scale(1.0 / t))
        a.append(a[n] / t)
    if N == 0:
        P, Q, a = P[:1], Q[:1], a[:1]
    for n, p in enumerate(P):
        if p.degree != n:
            raise ArithmeticError(f"P_{n} degenerated to degree {p.degree}")
    return OrthoSystem(family, tuple(P), tuple(Q), tuple(a))


def generate(family: MeasureFamily, N: int) -> OrthoSystem:
    """Generate P_0..P_N, Q_0..Q_N, and leading coefficients for a family."""
    return generate_from_recurrence(family, family.recurrence, N)


def transform_poly(f: Polynomial, moment_fn: Callable[[int], float]) -> Polynomial:
    """Difference-quotient transform against a moment sequence, exactly.

    For f = sum_j a_j x^j the quotient (f(t) - f(x))/(t - x) expands to
    sum_j a_j sum_{i<j} t^i x^{j-1-i}; integrating t^i against the measure
    gives the coefficient of x^p as sum_{j>p} a_j m_{j-1-p}.
    """
    d = f.degree
    if d <= 0:
        return ZERO
    ms = [moment_fn(i) for i in range(d)]
    out = [0.0] * d
    for p in range(d):
        out[p] = math.fsum(f.coeffs[j] * ms[j - 1 - p] for j in range(p + 1, d + 1))
    return Polynomial(out)


def apply_T_poly(sys: OrthoSystem, f: Polynomial) -> Polynomial:
    """T applied to a polynomial, using the family's exact moments."""
    if f.degree > sys.family.n_max:
        raise ValueError(f"degree {f.degree} exceeds n_max={sys.family.n_max}")
    return transform_poly(f, lambda k: moment(sys.family, k))


def orthonormality_check(sys: OrthoSystem, n: int, m: int) -> float:
    """<P_n, P_m> under the family density, by quadrature."""
    fam = sys.family
    if fam.density is None:
        raise CapabilityMissing(f"family {fam.name!r} has no density closure")
    if n > sys.size or m > sys.size:
        raise ValueError("index exceeds generated system size")
    pn, pm, rho = sys.P[n], sys.P[m], fam.density
    tol = 1e-11 if fam.support.kind == "compact" else 1e-9

    def integrand(x: float) -> float:
        r = rho(x)
        if r == 0.0:
            return 0.0
        return pn(x) * pm(x) * r

    return integrate(integrand, fam.support, tol=tol).value
