"""Bessel functions of integer order.

J_n is computed by Miller's backward recurrence normalised with
``J_0 + 2 sum_k J_2k = 1``.  The order derivative ``d/dnu J_nu`` at integer
order comes from the Schlaefli integral, and Y_m is available both from the
order derivatives and from its ascending series.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import AccuracyError

MAX_ORDER = 200
MAX_ARG = 2000.0
EULER_GAMMA = 0.57721566490153286061

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _check_box(n: int, x: float) -> None:
    if abs(n) > MAX_ORDER:
        raise OverflowError(f"order {n} outside supported range |n| <= {MAX_ORDER}")
    if x < 0.0 or not math.isfinite(x) or x > MAX_ARG:
        raise OverflowError(f"argument {x} outside supported range [0, {MAX_ARG}]")


def bessel_j_array(nmax: int, x: float) -> np.ndarray:
    """Return ``[J_0(x), ..., J_nmax(x)]`` for ``x >= 0``."""
    _check_box(nmax, x)
    out = np.zeros(nmax + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    if x < 1e-5:
        # two ascending-series terms; the recurrence would overflow in 2k/x
        h = 0.5 * x
        term = 1.0
        for n in range(nmax + 1):
            out[n] = term * (1.0 - h * h / (n + 1))
            term *= h / (n + 1)
        return out
    top = max(nmax, x)
    start = int(top + 30 + 4.0 * math.sqrt(40.0 * top))
    start += start % 2
    vals = np.zeros(start + 2)
    j_next, j_cur = 0.0, 1e-30
    vals[start] = j_cur
    norm = 0.0
    for k in range(start, 0, -1):
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        vals[k - 1] = j_cur
        if abs(j_cur) > 1e250:
            vals[k - 1:] *= 1e-250
            j_next *= 1e-250
            j_cur *= 1e-250
    norm = vals[0] + 2.0 * vals[2:start + 1:2].sum()
    out[:] = vals[:nmax + 1] / norm
    return out


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind J_n(x), integer ``n``, ``x >= 0``."""
    n = int(n)
    vals = bessel_j_array(abs(n), float(x))
    v = float(vals[abs(n)])
    return -v if (n < 0 and n % 2) else v


def bessel_j_signed(kmax: int, x: float) -> np.ndarray:
    """Array of J_k(x) for ``k = -kmax..kmax`` (index ``k + kmax``)."""
    pos = bessel_j_array(kmax, x)
    neg = pos[1:][::-1] * np.where(np.arange(kmax, 0, -1) % 2, -1.0, 1.0)
    return np.concatenate([neg, pos])


def _panels(f, a: float, b: float, panels: int) -> float:
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return float(np.dot(weights, f(nodes)))


def _converged_quad(f, a: float, b: float, rtol: float = 1e-14, start: int = 4, limit: int = 4096) -> float:
    panels = start
    prev = _panels(f, a, b, panels)
    while panels < limit:
        panels *= 2
        cur = _panels(f, a, b, panels)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise AccuracyError(f"quadrature on [{a}, {b}] did not converge")


def _tail_end(x: float, m: float) -> float:
    """Point beyond which exp(m t - x sinh t) is below 1e-40 of its peak."""
    t_peak = math.acosh(m / x) if m > x else 0.0
    log_peak = m * t_peak - x * math.sinh(t_peak)
    t = max(t_peak, 1.0)
    while m * t - x * math.sinh(t) > log_peak - 95.0:
        t *= 1.25
    return t


def _schlaefli_parts(m: int, x: float, sign: int) -> float:
    """``(1/pi) int_0^pi th sin(x sin th - s m th) - (-1)^m int_0^inf e^{s m t - x sinh t}``
    with ``s = sign``; this is d/dnu J_nu at nu = s*m."""
    nu = sign * m
    first = _converged_quad(lambda th: th * np.sin(x * np.sin(th) - nu * th), 0.0, math.pi) / math.pi
    end = _tail_end(x, -nu)
    second = _converged_quad(lambda t: np.exp(-nu * t - x * np.sinh(t)), 0.0, end, rtol=1e-14)
    parity = -1.0 if m % 2 else 1.0
    return first - parity * second


def bessel_dnu_j(m: int, x: float) -> float:
    """Order derivative ``d/dnu J_nu(x)`` at ``nu = m`` for ``0 <= m <= 20``, ``x > 0``."""
    if not 0 <= m <= 20:
        raise ValueError("order must satisfy 0 <= m <= 20")
    if not x > 0.0:
        raise ValueError("argument must be positive")
    return _schlaefli_parts(m, float(x), +1)


def bessel_dnu_j_neg(m: int, x: float) -> float:
    """``d/dnu J_{-nu}(x)`` at ``nu = m``."""
    if not 0 <= m <= 20:
        raise ValueError("order must satisfy 0 <= m <= 20")
    if not x > 0.0:
        raise ValueError("argument must be positive")
    return -_schlaefli_parts(m, float(x), -1)


def bessel_y(m: int, x: float) -> float:
    """Y_m(x) from ``pi Y_m = d/dnu J_nu - (-1)^m d/dnu J_{-nu}`` at ``nu = m``."""
    parity = -1.0 if m % 2 else 1.0
    return (bessel_dnu_j(m, x) - parity * bessel_dnu_j_neg(m, x)) / math.pi


def bessel_y_series(m: int, x: float) -> float:
    """Y_m(x) from the ascending series; accurate for moderate ``x`` (<= 20)."""
    if m < 0 or not x > 0.0:
        raise ValueError("need m >= 0 and x > 0")
    half = 0.5 * x
    q = half * half
    finite = 0.0
    if m > 0:
        term = math.factorial(m - 1)
        for k in range(m):
            finite += term
            if k + 1 < m:
                term *= q / ((k + 1) * (m - k - 1))
        finite *= -(half ** (-m)) / math.pi
    log_part = 2.0 / math.pi * math.log(half) * bessel_j(m, x)
    # psi(k+1) + psi(m+k+1) with psi(j+1) = -gamma + H_j
    h_k = 0.0
    h_mk = sum(1.0 / j for j in range(1, m + 1))
    term = 1.0 / math.factorial(m)
    total = 0.0
    k = 0
    while True:
        contrib = (h_k + h_mk - 2.0 * EULER_GAMMA) * term
        total += contrib
        k += 1
        term *= -q / (k * (m + k))
        h_k += 1.0 / k
        h_mk += 1.0 / (m + k)
        if k > 10 and abs(term) * (h_k + h_mk + 2) < 1e-18 * max(1.0, abs(total)):
            break
        if k > 500:
            break
    series = -(half ** m) / math.pi * total
    return finite + log_part + series


def j0_zero(a: int, tol: float = 1e-13) -> float:
    """The ``a``-th positive zero of J_0, ``1 <= a <= 15``, by bisection."""
    if not 1 <= a <= 15:
        raise ValueError("zero index must be in 1..15")
    guess = (a - 0.25) * math.pi
    lo, hi = guess - 1.0, guess + 1.0
    f_lo = bessel_j(0, lo)
    if f_lo * bessel_j(0, hi) > 0.0:
        raise AccuracyError("bracket does not contain a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = bessel_j(0, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def j1_zero(a: int = 1, tol: float = 1e-13) -> float:
    """The ``a``-th positive zero of J_1 (used for the m = 1 resonance sum)."""
    guess = (a + 0.25) * math.pi
    lo, hi = guess - 1.0, guess + 1.0
    f_lo = bessel_j(1, lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = bessel_j(1, mid)
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
