"""The chain of normalized secondary measures rho_0, rho_1, ....

Every level is evaluated through level-0 quantities: the density comes from
the closed form

    rho_n(x) = rho(x) / (t_{n-1}^2 * ((P_{n-1} phi/2 - Q_{n-1})^2
                                      + pi^2 rho^2 P_{n-1}^2)),

the transform from the quotient S_n = (Q_n - P_n S)/(t_{n-1} (Q_{n-1} -
P_{n-1} S)), and the reducer from the boundary sum of that quotient.  The
recurrence of rho_n is the base recurrence shifted by n (checked against the
closed-form associated systems), which is what makes Gaussian rules for the
deeper levels cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .errors import (
    CapabilityMissing,
    ChainZeroDivision,
    DegenerateDenominator,
    IndexOutOfRange,
    OnSupport,
    OutOfDomain,
)
from .measures import MeasureFamily, eval_reducer, eval_stieltjes, get_family
from .orthosys import OrthoSystem, generate, generate_from_recurrence
from .poly import Polynomial
from .quad import Support, jacobi_moment

__all__ = [
    "SecondaryChain",
    "PadeCheck",
    "build_chain",
    "level_recurrence",
    "level_coefficients",
    "level_moment",
    "level_family",
    "density",
    "reducer",
    "stieltjes",
    "continued_fraction_eval",
    "pade_check",
    "associated_system",
    "associated_system_matrix",
    "associated_system_shifted",
]

_DEN_FLOOR = 1e-300


@dataclass(frozen=True)
class SecondaryChain:
    base: OrthoSystem
    max_level: int


@dataclass(frozen=True)
class PadeCheck:
    lhs: complex
    rhs: float


@lru_cache(maxsize=None)
def _build_chain_cached(family: MeasureFamily, max_level: int, N: int) -> SecondaryChain:
    return SecondaryChain(generate(family, N), max_level)


def build_chain(family, max_level: int = 10, N: int | None = None) -> SecondaryChain:
    """Build a chain over a family (instance or name)."""
    if isinstance(family, str):
        family = get_family(family)
    if N is None:
        N = family.n_max
    if max_level >= N:
        raise ValueError(f"max_level={max_level} needs a base system larger than {N}")
    return _build_chain_cached(family, max_level, N)


def level_recurrence(chain: SecondaryChain, n: int) -> Callable[[int], tuple]:
    """Recurrence of rho_n: the base recurrence shifted by n."""
    base_rec = chain.base.family.recurrence

    def rec(k: int) -> tuple:
        return base_rec(n + k)

    return rec


def level_coefficients(chain: SecondaryChain, n: int) -> tuple:
    """(c_1^n, d_0^n) of level n, i.e. (s_n, t_n^2)."""
    s, t = chain.base.family.recurrence(n)
    return s, t * t


def level_moment(chain: SecondaryChain, n: int, k: int) -> float:
    """k-th moment of rho_n from the shifted Jacobi matrix."""
    return jacobi_moment(level_recurrence(chain, n), k)


def _check_level(chain: SecondaryChain, n: int) -> None:
    if not 0 <= n <= chain.max_level:
        raise ValueError(f"level {n} outside 0..{chain.max_level}")


def density(chain: SecondaryChain, n: int, x: float) -> float:
    """rho_n(x), evaluated through level-0 quantities."""
    _check_level(chain, n)
    fam = chain.base.family
    if fam.density is None:
        raise CapabilityMissing(f"family {fam.name!r} has no density closure")
    r = fam.density(x)
    if n == 0:
        return r
    if r == 0.0:
        # rho_n vanishes wherever rho does; also absorbs tail underflow.
        return 0.0
    if not fam.support.is_interior(x):
        raise OutOfDomain(f"{x!r} is not interior to the support of {fam.name!r}")
    phi_half = 0.5 * fam.reducer(x)
    p = chain.base.P[n - 1](x)
    q = chain.base.Q[n - 1](x)
    b = p * phi_half - q
    den = b * b + (math.pi * r * p) ** 2
    if den < _DEN_FLOOR:
        raise DegenerateDenominator(f"density denominator underflow at x={x!r}, n={n}")
    t = fam.recurrence(n - 1)[1]
    return r / (t * t * den)


def reducer(chain: SecondaryChain, n: int, x: float) -> float:
    """phi_n(x), the boundary sum of S_n.

    The prefactor is 2/t_{n-1}: it is forced by taking the boundary limit of
    the level quotient for S_n (the constant-chain family pins it: phi_1 must
    reproduce phi), and the eps-limit consistency tests enforce it.
    """
    _check_level(chain, n)
    fam = chain.base.family
    if n == 0:
        return eval_reducer(fam, x)
    if fam.density is None or fam.reducer is None:
        raise CapabilityMissing(f"family {fam.name!r} lacks density/reducer closures")
    if not fam.support.is_interior(x):
        raise OutOfDomain(f"{x!r} is not interior to the support of {fam.name!r}")
    r = fam.density(x)
    if r == 0.0:
        raise OutOfDomain(f"reducer of level {n} undefined where the base density vanishes")
    phi_half = 0.5 * fam.reducer(x)
    pn = chain.base.P[n](x)
    qn = chain.base.Q[n](x)
    pm = chain.base.P[n - 1](x)
    qm = chain.base.Q[n - 1](x)
    bn = pn * phi_half - qn
    bm = pm * phi_half - qm
    pr = math.pi * r
    den = bm * bm + (pr * pm) ** 2
    if den < _DEN_FLOOR:
        raise DegenerateDenominator(f"reducer denominator underflow at x={x!r}, n={n}")
    t = fam.recurrence(n - 1)[1]
    return (2.0 / t) * (bn * bm + pr * pr * pn * pm) / den


def _ceval(p: Polynomial, z: complex) -> complex:
    acc = 0.0 + 0.0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def _series_radius(support: Support) -> float:
    if support.kind == "compact":
        return 10.0 * (1.0 + max(abs(support.a), abs(support.b)))
    return 100.0


def _moment_series(rec: Callable[[int], tuple], z: complex, kmax: int = 40) -> complex:
    # S(z) = sum_k m_k / z^{k+1}; convergent for compact supports, asymptotic
    # (truncated at the smallest term) for unbounded ones.
    total = 0.0 + 0.0j
    power = 1.0 / z
    prev = math.inf
    for k in range(kmax + 1):
        term = jacobi_moment(rec, k) * power
        mag = abs(term)
        if k > 2 and mag > prev:
            break
        total += term
        prev = mag
        power /= z
        if mag < 1e-17 * abs(total):
            break
    return total


def stieltjes(chain: SecondaryChain, n: int, z: complex) -> complex:
    """S_n(z) for z off the support.

    Near the support the exact level quotient is used; at large |z| it is
    catastrophically cancelled (the numerator approximates S to order
    z^-(2n+1)), so the shifted-moment series takes over there.
    """
    _check_level(chain, n)
    fam = chain.base.family
    z = complex(z)
    if fam.support.distance(z) < 1e-12:
        raise OnSupport(f"{z!r} is on the support of {fam.name!r}")
    if n == 0:
        return eval_stieltjes(fam, z)
    if abs(z) >= _series_radius(fam.support):
        return _moment_series(level_recurrence(chain, n), z)
    s = eval_stieltjes(fam, z)
    num = _ceval(chain.base.Q[n], z) - _ceval(chain.base.P[n], z) * s
    den = _ceval(chain.base.Q[n - 1], z) - _ceval(chain.base.P[n - 1], z) * s
    if den == 0:
        raise ChainZeroDivision(f"level quotient denominator vanished at z={z!r}, n={n}")
    t = fam.recurrence(n - 1)[1]
    return num / (t * den)


def continued_fraction_eval(chain: SecondaryChain, depth: int, z: complex) -> complex:
    """Finite continued fraction for S_rho(z), bottoming out at S_{depth+1}.

    Exact identity: the convergents (u_n, v_n) satisfy
    u_{n+1} = (z - s_n) u_n - t_{n-1}^2 u_{n-1} (same for v), seeded with
    u_0 = 0, u_1 = 1, v_0 = 1, v_1 = z - s_0, and
    S_rho = (u_n (-d_0^n S_{n+1}) + u_{n+1}) / (v_n (-d_0^n S_{n+1}) + v_{n+1}).
    """
    if depth + 1 > chain.max_level:
        raise ValueError(f"depth {depth} needs max_level >= {depth + 1}")
    fam = chain.base.family
    z = complex(z)
    rec = fam.recurrence
    u_prev, u = 0.0 + 0.0j, 1.0 + 0.0j
    v_prev, v = 1.0 + 0.0j, z - rec(0)[0]
    for k in range(1, depth + 1):
        s_k = rec(k)[0]
        t_km1 = rec(k - 1)[1]
        u_prev, u = u, (z - s_k) * u - t_km1 * t_km1 * u_prev
        v_prev, v = v, (z - s_k) * v - t_km1 * t_km1 * v_prev
    tail = -rec(depth)[1] ** 2 * stieltjes(chain, depth + 1, z)
    den = v_prev * tail + v
    if den == 0:
        raise ChainZeroDivision(f"continued fraction denominator vanished at z={z!r}, depth={depth}")
    return (u_prev * tail + u) / den


def _truncated_moment(rec: Callable[[int], tuple], size: int, k: int) -> float:
    # Entry (0,0) of J_trunc^k for the leading size x size Jacobi block: the
    # moments of the size-point Gaussian measure, i.e. of the Pade denominator.
    s = [float(rec(i)[0]) for i in range(size)]
    t = [float(rec(i)[1]) for i in range(size - 1)]
    v = [0.0] * size
    v[0] = 1.0
    for _ in range(k):
        nxt = [0.0] * size
        for i in range(size):
            acc = s[i] * v[i]
            if i > 0:
                acc += t[i - 1] * v[i - 1]
            if i < size - 1:
                acc += t[i] * v[i + 1]
            nxt[i] = acc
        v = nxt
    return v[0]


def pade_check(sys: OrthoSystem, n: int, z: complex, tail_terms: int = 8) -> PadeCheck:
    """lhs = (S(z) - Q_{n+1}(z)/P_{n+1}(z)) * z^(2n+3) against rhs = prod d_0^k.

    The difference is formed in coefficient space: Q_{n+1}/P_{n+1} is the
    transform of the (n+1)-point Gaussian measure, so its 1/z expansion is
    the truncated-Jacobi moment sequence and the first 2n+2 coefficients
    cancel exactly.  Direct complex subtraction at |z| = 1e4 would lose the
    difference entirely (it sits 30+ digits below the terms for n = 4).
    """
    fam = sys.family
    z = complex(z)
    if abs(z) < 1e3:
        raise ValueError("pade_check needs |z| >= 1e3")
    if fam.support.distance(z) < 1e-12:
        raise OnSupport(f"{z!r} is on the support of {fam.name!r}")
    rec = fam.recurrence
    lhs = 0.0 + 0.0j
    zpow = 1.0 + 0.0j
    for j in range(tail_terms + 1):
        k = 2 * n + 2 + j
        delta = jacobi_moment(rec, k) - _truncated_moment(rec, n + 1, k)
        lhs += delta * zpow
        zpow /= z
    rhs = 1.0
    for k in range(n + 1):
        rhs *= rec(k)[1] ** 2
    return PadeCheck(lhs=lhs, rhs=rhs)


# ---------------------------------------------------------------------------
# Associated orthonormal systems of the deeper levels.
# ---------------------------------------------------------------------------


def level_family(chain: SecondaryChain, level: int) -> MeasureFamily:
    """A MeasureFamily view of rho_level with closures bound to the chain."""
    fam = chain.base.family
    if level == 0:
        return fam
    _check_level(chain, level)
    rec = level_recurrence(chain, level)
    dens = (lambda x: density(chain, level, x)) if fam.density is not None else None
    red = (lambda x: reducer(chain, level, x)) if fam.reducer is not None else None
    sti = (lambda z: stieltjes(chain, level, z)) if fam.stieltjes is not None else None
    return MeasureFamily(
        f"{fam.name}#level{level}",
        fam.support,
        rec,
        dens,
        red,
        sti,
        n_max=fam.n_max - level,
    )


def _shifted_leading(chain: SecondaryChain, level: int, N: int) -> tuple:
    rec = level_recurrence(chain, level)
    a = [1.0]
    for j in range(N):
        a.append(a[-1] / rec(j)[1])
    return tuple(a)


def _chop(p: Polynomial, deg: int) -> Polynomial:
    # The closed forms cancel all coefficients above `deg` analytically;
    # drop the float residue so degrees stay exact.
    return Polynomial(p.coeffs[: deg + 1])


def associated_system(chain: SecondaryChain, level: int, N: int) -> OrthoSystem:
    """Orthonormal system of rho_level from the closed form in level-0 P, Q:

    P_n^(k+1) = t_k (P_k Q_{n+k+1} - Q_k P_{n+k+1}),
    Q_n^(k+1) = P_{k+1} Q_{n+k+1} - P_{n+k+1} Q_{k+1},  with k = level - 1.
    """
    base = chain.base
    if level == 0:
        if N > base.size:
            raise IndexOutOfRange(f"N={N} exceeds base size {base.size}")
        return OrthoSystem(base.family, base.P[: N + 1], base.Q[: N + 1], base.a[: N + 1])
    _check_level(chain, level)
    k = level - 1
    if level + N > base.size:
        raise IndexOutOfRange(f"level {level} + N={N} exceeds base size {base.size}")
    t_k = base.family.recurrence(k)[1]
    P = []
    Q = []
    for j in range(N + 1):
        hi = j + level
        P.append(_chop(t_k * (base.P[k] * base.Q[hi] - base.Q[k] * base.P[hi]), j))
        Q.append(_chop(base.P[k + 1] * base.Q[hi] - base.P[hi] * base.Q[k + 1], max(j - 1, -1)))
    return OrthoSystem(
        level_family(chain, level), tuple(P), tuple(Q), _shifted_leading(chain, level, N)
    )


def _matmul2(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def associated_system_matrix(chain: SecondaryChain, level: int, N: int) -> OrthoSystem:
    """Same system via the transfer-matrix product Pi_k = M_k ... M_0 with
    M_j = (1/t_j) [[0, t_j^2], [-1, x - s_j]]."""
    base = chain.base
    if level == 0:
        return associated_system(chain, 0, N)
    _check_level(chain, level)
    if level + N > base.size:
        raise IndexOutOfRange(f"level {level} + N={N} exceeds base size {base.size}")
    rec = base.family.recurrence
    pi = None
    for j in range(level):
        s, t = rec(j)
        m_j = (
            Polynomial([]),
            Polynomial([t]),
            Polynomial([-1.0 / t]),
            Polynomial([-s / t, 1.0 / t]),
        )
        pi = m_j if pi is None else _matmul2(m_j, pi)
    P = []
    Q = []
    for j in range(N + 1):
        hi = j + level
        P.append(_chop(pi[0] * base.P[hi] + pi[1] * base.Q[hi], j))
        Q.append(_chop(pi[2] * base.P[hi] + pi[3] * base.Q[hi], max(j - 1, -1)))
    return OrthoSystem(
        level_family(chain, level), tuple(P), tuple(Q), _shifted_leading(chain, level, N)
    )


def associated_system_shifted(chain: SecondaryChain, level: int, N: int) -> OrthoSystem:
    """Same system by running the recurrence with coefficients shifted by level."""
    if level == 0:
        return associated_system(chain, 0, N)
    _check_level(chain, level)
    fam = level_family(chain, level)
    return generate_from_recurrence(fam, fam.recurrence, N)
