"""Dense univariate real polynomials and Newton divided differences.

Coefficients are stored ascending: ``coeffs[k]`` multiplies ``x**k``.  The
zero polynomial is the empty tuple, and nonzero polynomials never carry
trailing zero coefficients, so ``degree`` is well defined and Wronskian-style
coefficient comparisons have a canonical form to compare against.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

from .errors import NodeCollision

__all__ = [
    "Polynomial",
    "ZERO",
    "ONE",
    "X",
    "newton_quotient",
    "divided_difference",
    "dd_gap_floor",
]


class Polynomial:
    """Immutable dense polynomial over the reals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[float] = ()):
        cs = [float(c) for c in coeffs]
        while cs and cs[-1] == 0.0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 marks the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: float) -> float:
        # Horner evaluation; total function (zero polynomial gives 0).
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero() or other.is_zero():
                return ZERO
            out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Polynomial(out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c: float) -> "Polynomial":
        return Polynomial([c * a for a in self.coeffs])

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


ZERO = Polynomial()
ONE = Polynomial([1.0])
X = Polynomial([0.0, 1.0])


def newton_quotient(p: Polynomial, x0: float) -> Polynomial:
    """Synthetic division: the polynomial ``t -> (p(t) - p(x0)) / (t - x0)``.

    Exact in the sense that ``p(t) - p(x0) == (t - x0) * q(t)`` holds
    coefficientwise.  Constants map to the canonical zero polynomial.
    """
    if p.is_zero():
        raise ValueError("newton_quotient of the zero polynomial")
    n = p.degree
    if n == 0:
        return ZERO
    q = [0.0] * n
    q[n - 1] = p.coeffs[n]
    for k in range(n - 2, -1, -1):
        q[k] = p.coeffs[k + 1] + x0 * q[k + 1]
    return Polynomial(q)


def dd_gap_floor(nodes: Sequence[float]) -> float:
    """Minimum admissible node gap for divided differences."""
    return 1e-9 * (1.0 + max(abs(t) for t in nodes))


def divided_difference(f: Callable[[float], float], nodes: Sequence[float]) -> float:
    """Newton divided difference ``f[t_0, ..., t_n]`` by the triangular table.

    Nodes must be pairwise distinct with gaps above :func:`dd_gap_floor`;
    confluent differences are refused rather than computed.
    """
    ts = list(nodes)
    if not ts:
        raise ValueError("divided_difference needs at least one node")
    floor = dd_gap_floor(ts)
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            if abs(ts[i] - ts[j]) <= floor:
                raise NodeCollision(
                    f"nodes {ts[i]!r} and {ts[j]!r} closer than gap floor {floor:.3e}"
                )
    col = [f(t) for t in ts]
    n = len(ts)
    for order in range(1, n):
        for i in range(n - order):
            col[i] = (col[i + 1] - col[i]) / (ts[i + order] - ts[i])
    return col[0]
