"""Numerical integration: tanh-sinh ladders, Gaussian rules, tensor products.

Compact intervals use the double-exponential (tanh-sinh) transformation,
which eats the log^2-type endpoint growth of the identity integrands.  The
half line is folded to (0, 1] by x = a - ln(u) and the real line to
(-pi/2, pi/2) by x = tan(theta); both then reuse the same tanh-sinh kernel.
Gaussian rules come from the spectral data of the Jacobi matrix, with the
symmetric tridiagonal eigensolver implemented here (matrices are <= 32x32).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EigenFailure, GridTooLarge, NonFinite

__all__ = [
    "Support",
    "QuadratureRule",
    "IntegrationResult",
    "integrate",
    "gauss_rule",
    "tensor_integrate",
    "jacobi_moment",
]

EVAL_BUDGET = 1 << 20
TOL_ABS_FLOOR = 1e-14
_MAX_LEVEL = 12


@dataclass(frozen=True)
class Support:
    """Interval of a measure: compact [a, b], half line [a, inf), or the real line."""

    kind: str  # "compact" | "halfline" | "realline"
    a: float = math.nan
    b: float = math.nan

    def __post_init__(self):
        if self.kind not in ("compact", "halfline", "realline"):
            raise ValueError(f"unknown support kind {self.kind!r}")
        if self.kind == "compact" and not self.a < self.b:
            raise ValueError("compact support needs a < b")

    def contains(self, x: float) -> bool:
        if self.kind == "compact":
            return self.a <= x <= self.b
        if self.kind == "halfline":
            return x >= self.a
        return True

    def is_interior(self, x: float) -> bool:
        if self.kind == "compact":
            return self.a < x < self.b
        if self.kind == "halfline":
            return x > self.a
        return True

    def distance(self, z: complex) -> float:
        """Euclidean distance from a complex point to the support."""
        x, y = z.real, z.imag
        if self.kind == "compact":
            dx = max(self.a - x, 0.0, x - self.b)
        elif self.kind == "halfline":
            dx = max(self.a - x, 0.0)
        else:
            dx = 0.0
        return math.hypot(dx, y)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple
    weights: tuple
    kind: str  # "tanh_sinh" | "gauss_jacobi_matrix" | "mapped_halfline" | "mapped_realline"

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights must have the same length")


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool = True


def _sigmoid(v: float) -> float:
    # 1/(1 + exp(-v)) without overflow on either side.
    if v >= 0.0:
        return 1.0 / (1.0 + math.exp(-v))
    e = math.exp(v)
    return e / (1.0 + e)


def _log_sigmoid(v: float) -> float:
    if v >= 0.0:
        return -math.log1p(math.exp(-v))
    return v - math.log1p(math.exp(v))


def _ts_point(t: float, support: Support):
    """Node and dt-weight of the tanh-sinh map at parameter t; None to skip.

    Nodes whose transformed coordinate rounds exactly onto a finite endpoint
    are skipped: their weights are below ~1e-14 and integrands may only have
    limit values there.
    """
    v = math.pi * math.sinh(t)
    sig = _sigmoid(v)
    sig_m = _sigmoid(-v)
    dsig = math.pi * math.cosh(t) * sig * sig_m
    if support.kind == "compact":
        x = support.a + (support.b - support.a) * sig
        if x <= support.a or x >= support.b:
            return None
        return x, (support.b - support.a) * dsig
    if support.kind == "halfline":
        x = support.a - _log_sigmoid(v)
        if x <= support.a or math.isinf(x):
            return None
        # dx/dt = (1/u) du/dt with u = sigmoid(v); the 1/u cancels exactly.
        return x, math.pi * math.cosh(t) * sig_m
    # realline: theta = pi*(sig - 1/2), x = tan(theta) evaluated away from
    # the poles via whichever of sig, sig_m is small.
    if sig <= 0.5:
        tn = math.tan(math.pi * sig)
        if tn == 0.0:
            return None
        x = -1.0 / tn
    else:
        tn = math.tan(-math.pi * sig_m)
        if tn == 0.0:
            return None
        x = -1.0 / tn
    w = (1.0 + x * x) * math.pi * dsig
    if not math.isfinite(x) or not math.isfinite(w):
        return None
    return x, w


def _t_max(support: Support) -> float:
    # Keep transformed coordinates and weights inside double range.
    return 5.4 if support.kind == "realline" else 6.0


def integrate(
    f: Callable[[float], float],
    support: Support,
    tol: float = 1e-10,
) -> IntegrationResult:
    """Adaptive tanh-sinh integration of f over the support.

    The ladder doubles the node density per level until the level-to-level
    difference falls below max(tol*|value|, 1e-14) or the evaluation budget
    (2**20 points) is exhausted, in which case the best value is returned
    with ``converged=False``.
    """
    if isinstance(support, tuple):
        support = Support("compact", *support)
    tmax = _t_max(support)
    contributions: list[float] = []
    evals = 0
    prev = math.nan
    value = math.nan
    est = math.inf

    for level in range(_MAX_LEVEL + 1):
        h = 0.5**level
        if level == 0:
            ts = [k * h for k in range(-int(tmax / h), int(tmax / h) + 1)]
        else:
            ts = [k * h for k in range(-int(tmax / h) | 1, int(tmax / h) + 1, 2)]
        for t in ts:
            pt = _ts_point(t, support)
            if pt is None:
                continue
            x, w = pt
            fx = f(x)
            evals += 1
            if not math.isfinite(fx):
                if math.isfinite(w * 0.0) and w < 1e-250:
                    continue
                raise NonFinite(f"integrand returned {fx!r} at x={x!r}")
            contributions.append(w * fx)
        value = h * math.fsum(contributions)
        if level > 0:
            est = abs(value - prev)
            if est <= max(tol * abs(value), TOL_ABS_FLOOR):
                return IntegrationResult(value, est, evals, True)
        prev = value
        if evals > EVAL_BUDGET:
            break
    return IntegrationResult(value, est, evals, False)


# ---------------------------------------------------------------------------
# Gaussian rules from the Jacobi matrix.
# ---------------------------------------------------------------------------


def _tridiag_ql(d: np.ndarray, e: np.ndarray, max_sweeps: int):
    """Implicit-shift QL on a symmetric tridiagonal matrix.

    Returns (eigenvalues, first row of the eigenvector matrix), unsorted.
    d is the diagonal, e the subdiagonal (len(d) - 1 entries used).
    """
    n = len(d)
    d = d.astype(float).copy()
    e = np.append(e.astype(float).copy(), 0.0)
    # Track only the first row of the accumulated rotations; that is all the
    # Golub-Welsch weights need.
    z = np.zeros(n)
    z[0] = 1.0
    sweeps = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise EigenFailure(f"QL exceeded {max_sweeps} sweeps on size {n}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                fv = s * e[i]
                b = c * e[i]
                r = math.hypot(fv, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = fv / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                z[i], z[i + 1] = c * z[i] - s * z[i + 1], s * z[i] + c * z[i + 1]
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
                continue
            continue
    return d, z


def gauss_rule(recurrence: Callable[[int], tuple], m: int) -> QuadratureRule:
    """m-point Gaussian rule for the probability measure behind a recurrence.

    Nodes are the eigenvalues of the m x m Jacobi matrix (diagonal s_0..s_{m-1},
    off-diagonal t_0..t_{m-2}); weight_i is the squared first component of the
    i-th normalized eigenvector (total mass 1).
    """
    if m < 1:
        raise ValueError("rule size must be >= 1")
    d = np.array([float(recurrence(k)[0]) for k in range(m)])
    e = np.array([float(recurrence(k)[1]) for k in range(m - 1)])
    vals, first = _tridiag_ql(d, e, max_sweeps=50 * m)
    order = np.argsort(vals)
    nodes = vals[order]
    weights = first[order] ** 2
    return QuadratureRule(tuple(nodes.tolist()), tuple(weights.tolist()), "gauss_jacobi_matrix")


def tensor_integrate(kernel: Callable[..., float], rules: Sequence[QuadratureRule]) -> float:
    """Tensor-product cubature: sum of kernel(t_0..t_{d-1}) * prod(weights)."""
    if len(rules) > 5:
        raise GridTooLarge(f"{len(rules)} dimensions exceeds the cap of 5")
    total = 1
    for r in rules:
        total *= len(r.nodes)
    if total > 10**7:
        raise GridTooLarge(f"{total} grid points exceeds the cap of 1e7")
    contributions = []
    for combo in itertools.product(*[zip(r.nodes, r.weights) for r in rules]):
        pts = tuple(c[0] for c in combo)
        w = 1.0
        for c in combo:
            w *= c[1]
        contributions.append(w * kernel(*pts))
    return math.fsum(contributions)


def jacobi_moment(recurrence: Callable[[int], tuple], k: int) -> float:
    """k-th moment of the measure, read off as entry (0,0) of J^k.

    Exact (up to rounding of the coefficients themselves) because length-k
    walks from index 0 back to 0 never leave the leading (k//2 + 1) block.
    """
    if k == 0:
        return 1.0
    size = k // 2 + 1
    s = [float(recurrence(i)[0]) for i in range(size)]
    t = [float(recurrence(i)[1]) for i in range(size)]
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
