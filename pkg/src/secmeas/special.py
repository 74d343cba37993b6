"""Special functions needed by the measure catalog.

Real-argument Ei and erfi are implemented from scratch (power series for
small arguments, asymptotic series for large), together with scaled variants
``exp(-x)*Ei(x)`` and ``exp(-u*u)*erfi(u)`` that stay finite where the bare
functions overflow.  The complex helpers back the closed-form Stieltjes
transforms of the exponential and Gaussian families: a three-route
``exp(-z)*E1(-z)`` evaluation and the Faddeeva function ``w(z)`` via
Weideman's rational approximation.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = [
    "EULER_GAMMA",
    "ei",
    "ei_scaled",
    "erfi",
    "erfi_scaled",
    "faddeeva",
    "stieltjes_exponential",
]

EULER_GAMMA = 0.57721566490153286060651209008240243

_EI_SERIES_CUTOFF = 40.0
_ERFI_SERIES_CUTOFF = 6.0


def _ei_series(x: float) -> float:
    # Ei(x) = gamma + ln x + sum_{k>=1} x^k / (k * k!); all terms positive
    # for x > 0, so there is no cancellation at any size.
    total = EULER_GAMMA + math.log(x)
    term = 1.0
    for k in range(1, 400):
        term *= x / k
        inc = term / k
        total += inc
        if inc < 1e-17 * abs(total):
            break
    return total


def _ei_asym_factor(x: float) -> float:
    # sum_{k} k!/x^k truncated at the smallest term; relative error ~exp(-x).
    total = 1.0
    term = 1.0
    for k in range(1, min(int(x), 60)):
        nxt = term * k / x
        if nxt >= term:
            break
        term = nxt
        total += term
    return total


def ei(x: float) -> float:
    """Exponential integral Ei(x) for x > 0."""
    if x <= 0.0:
        raise ValueError("ei requires x > 0")
    if x <= _EI_SERIES_CUTOFF:
        return _ei_series(x)
    return math.exp(x) / x * _ei_asym_factor(x)


def ei_scaled(x: float) -> float:
    """exp(-x) * Ei(x) for x > 0; finite for all x (no overflow)."""
    if x <= 0.0:
        raise ValueError("ei_scaled requires x > 0")
    if x <= _EI_SERIES_CUTOFF:
        return math.exp(-x) * _ei_series(x)
    return _ei_asym_factor(x) / x


def _erfi_series(u: float) -> float:
    # erfi(u) = (2/sqrt(pi)) sum_k u^(2k+1) / (k! (2k+1)); positive terms.
    u2 = u * u
    term = u
    total = u
    for k in range(1, 400):
        term *= u2 / k
        inc = term / (2 * k + 1)
        total += inc
        if inc < 1e-17 * abs(total):
            break
    return 2.0 / math.sqrt(math.pi) * total


def _erfi_asym_factor(u: float) -> float:
    # sum_k (2k-1)!! / (2 u^2)^k truncated at the smallest term.
    total = 1.0
    term = 1.0
    u2 = 2.0 * u * u
    for k in range(1, 60):
        nxt = term * (2 * k - 1) / u2
        if nxt >= term:
            break
        term = nxt
        total += term
    return total


def erfi(u: float) -> float:
    """Imaginary error function erfi(u) = (2/sqrt(pi)) * int_0^u exp(t^2) dt."""
    if u < 0.0:
        return -erfi(-u)
    if u <= _ERFI_SERIES_CUTOFF:
        return _erfi_series(u)
    return math.exp(u * u) / (u * math.sqrt(math.pi)) * _erfi_asym_factor(u)


def erfi_scaled(u: float) -> float:
    """exp(-u*u) * erfi(u); finite for all real u."""
    if u < 0.0:
        return -erfi_scaled(-u)
    if u == 0.0:
        return 0.0
    if u <= _ERFI_SERIES_CUTOFF:
        return math.exp(-u * u) * _erfi_series(u)
    return _erfi_asym_factor(u) / (u * math.sqrt(math.pi))


# ---------------------------------------------------------------------------
# Faddeeva function, Weideman's rational approximation (upper half plane).
# ---------------------------------------------------------------------------

_WEIDEMAN_N = 64


def _weideman_coeffs(n: int):
    m = 2 * n
    m2 = 2 * m
    k = np.arange(-m + 1, m)
    length = math.sqrt(n / math.sqrt(2.0))
    theta = k * math.pi / m
    t = length * np.tan(theta / 2.0)
    f = np.exp(-t * t) * (length * length + t * t)
    f = np.concatenate(([0.0], f))
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / m2
    a = a[1 : n + 1][::-1]
    return length, a


_WEIDEMAN_L, _WEIDEMAN_A = _weideman_coeffs(_WEIDEMAN_N)


def faddeeva(z: complex) -> complex:
    """w(z) = exp(-z^2) * erfc(-i z) for Im(z) >= 0."""
    if z.imag < 0.0:
        raise ValueError("faddeeva is implemented for Im(z) >= 0")
    length = _WEIDEMAN_L
    iz = 1j * z
    zz = (length + iz) / (length - iz)
    p = 0.0 + 0.0j
    for c in _WEIDEMAN_A:
        p = p * zz + c
    return 2.0 * p / (length - iz) ** 2 + (1.0 / math.sqrt(math.pi)) / (length - iz)


# ---------------------------------------------------------------------------
# Stieltjes transform of exp(-x) on [0, inf):  S(z) = -exp(-z) * E1(-z).
# ---------------------------------------------------------------------------


def _e1_series(w: complex) -> complex:
    # E1(w) = -gamma - Log(w) - sum_{k>=1} (-w)^k / (k * k!).  Safe wherever
    # the alternation cannot cancel catastrophically, i.e. |w| + Re(w) small.
    total = -EULER_GAMMA - cmath.log(w)
    term = 1.0 + 0.0j
    for k in range(1, 500):
        term *= -w / k
        inc = term / k
        total -= inc
        if abs(inc) < 1e-17 * abs(total):
            break
    return total


def _exp_cf(w: complex) -> complex:
    # Modified Lentz on E1(w) = exp(-w) / (w + 1 - 1/(w + 3 - 4/(w + 5 - ...)));
    # the returned value is the continued fraction *without* the exp factor.
    tiny = 1e-300
    b = w + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        a = -float(i * i)
        b += 2.0
        d = a * d + b
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError("exponential-integral continued fraction did not converge")


def stieltjes_exponential(z: complex) -> complex:
    """S(z) = int_0^inf exp(-t)/(z - t) dt for z off [0, inf).

    Three routes keep every exponential factor cancelled analytically:
    a power series for moderate z, the asymptotic series plus the explicit
    boundary-jump term near the positive real axis at large |z|, and the
    continued fraction elsewhere.
    """
    z = complex(z)
    r = abs(z)
    if r - z.real <= 13.8 and r <= 45.0:
        return -cmath.exp(-z) * _e1_series(-z)
    if z.real > 0.0 and r > 45.0:
        # S = (1/z) * sum_k k!/z^k  -  i*pi*sign(Im z)*exp(-z); the second
        # term is exactly the jump across the support.
        total = 1.0 + 0.0j
        term = 1.0 + 0.0j
        for k in range(1, min(int(r), 40)):
            nxt = term * k / z
            if abs(nxt) >= abs(term):
                break
            term = nxt
            total += term
        step = -1j * math.pi * math.copysign(1.0, z.imag) * cmath.exp(-z)
        return total / z + step
    return -_exp_cf(-z)
