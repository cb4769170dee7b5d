"""Resonance classification of a drive and Bessel-sum diagnostics."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedError, UnsupportedSpectrumError
from .fourier import mean
from .interaction import Interaction, build_phase_functions
from .special import bessel_dnu_j, bessel_dnu_j_neg, bessel_j, bessel_j_signed

DEFAULT_TOL = 1e-9


class Condition(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    UNSUPPORTED = "Unsupported"


@dataclass(frozen=True)
class ConditionReport:
    condition: Condition
    m_q0: complex
    m_q1: complex
    m_q3: complex
    tolerance: float

    def to_dict(self) -> dict:
        def c(z):
            return [z.real, z.imag]

        return {
            "condition": self.condition.value,
            "m_q0": c(self.m_q0),
            "m_q1": c(self.m_q1),
            "m_q3": c(self.m_q3),
            "tolerance": self.tolerance,
        }


def _decide(m0: complex, m1: complex, m3: complex, tol: float) -> Condition:
    if abs(m0) > tol:
        return Condition.I
    if abs(m1) > tol:
        return Condition.II
    if abs(m3) > tol:
        return Condition.III
    return Condition.UNSUPPORTED


def mean_q1_offresonant(chi1: float, chi2: float, omega: float, kmax: int = 200) -> complex:
    """M(Q1) for ``f = F0 + phi cos(w t)`` when ``chi2 = 2 F0 / w`` is not an integer.

    ``(i / (w chi2)) [J_0^2 + 2 chi2^2 sum_{k>=1} J_k^2 / (chi2^2 - k^2)]`` with
    Bessel arguments ``chi1``.
    """
    J = np.array([bessel_j(k, chi1) for k in range(kmax + 1)])
    k = np.arange(1, kmax + 1)
    s = J[0] ** 2 + 2.0 * chi2 ** 2 * np.sum(J[1:] ** 2 / (chi2 ** 2 - k ** 2))
    return 1j * s / (omega * chi2)


def classify(f: Interaction, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Decide which resonance condition governs ``f``.

    Drives with a non-integer ``2 F0 / w`` cannot be expanded on the drive
    lattice; for monochromatic fields they are still classified from the
    closed-form Bessel expression of M(Q1).
    """
    try:
        pf = build_phase_functions(f)
    except UnsupportedSpectrumError:
        if not f.is_monochromatic:
            raise
        m1 = mean_q1_offresonant(f.chi1, f.chi2, f.omega)
        cond = Condition.II if abs(m1) > tol else Condition.UNSUPPORTED
        return ConditionReport(cond, 0j, m1, 0j, tol)
    m0, m1, m3 = mean(pf.Q0), mean(pf.Q1), mean(pf.Q3)
    return ConditionReport(_decide(m0, m1, m3, tol), m0, m1, m3, tol)


def triple_sum_T(x: float, K: int = 60, shell_tol: float = 1e-14) -> float:
    """``-sum_{n,m != 0} J_n J_{n-m} J_m / (n m)`` truncated at ``|n|, |m| <= K``.

    Shells are added one at a time and the summation stops early once a
    shell contributes less than ``shell_tol``.
    """
    if K > 60:
        raise ValueError("truncation K must not exceed 60")
    J = bessel_j_signed(2 * K, x)

    def j(k):
        return J[k + 2 * K]

    total = 0.0
    for k in range(1, K + 1):
        shell = 0.0
        # pairs (n, m) with max(|n|, |m|) == k
        for n in range(-k, k + 1):
            if n == 0:
                continue
            for m in range(-k, k + 1):
                if m == 0 or max(abs(n), abs(m)) != k:
                    continue
                shell += j(n) * j(n - m) * j(m) / (n * m)
        total -= shell
        if k >= 4 and abs(shell) < shell_tol:
            break
    return float(total)


def triple_sum_Tm(m: int, x: float, K: int = 60, shell_tol: float = 1e-14) -> float:
    """``-sum_{k,p != 0} J_{m+p} J_{m+p-k} J_{m+k} / (k p)``, the m-shifted variant."""
    if K > 60:
        raise ValueError("truncation K must not exceed 60")
    span = 2 * K + abs(m) + 1
    J = bessel_j_signed(span, x)

    def j(k):
        return J[k + span]

    total = 0.0
    for r in range(1, K + 1):
        shell = 0.0
        for k in range(-r, r + 1):
            if k == 0:
                continue
            for p in range(-r, r + 1):
                if p == 0 or max(abs(k), abs(p)) != r:
                    continue
                shell += j(m + p) * j(m + p - k) * j(m + k) / (k * p)
        total -= shell
        if r >= 4 and abs(shell) < shell_tol:
            break
    return float(total)


def shifted_square_sum(m: int, x: float, K: int = 80) -> float:
    """``sum_{0<|k|<=K} J_{k+m}(x)^2 / k``."""
    J = bessel_j_signed(K + abs(m), x)
    off = K + abs(m)
    return float(sum(J[k + m + off] ** 2 / k for k in range(-K, K + 1) if k != 0))


def bessel_identity_rhs(m: int, x: float) -> float:
    """``J_m(x) [-2 dJ_nu/dnu + pi Y_m]`` at ``nu = m``."""
    d_pos = bessel_dnu_j(m, x)
    d_neg = bessel_dnu_j_neg(m, x)
    parity = -1.0 if m % 2 else 1.0
    pi_y = d_pos - parity * d_neg
    return bessel_j(m, x) * (-2.0 * d_pos + pi_y)


def bessel_identity_residual(m: int, x: float, K: int = 80) -> float:
    """Absolute residual of the shifted-square Bessel sum identity."""
    if not 0 <= m <= 5:
        raise ValueError("order must satisfy 0 <= m <= 5")
    if K > 80:
        raise ValueError("truncation K must not exceed 80")
    if not x > 0.0:
        raise ValueError("argument must be positive")
    return abs(shifted_square_sum(m, x, K) - bessel_identity_rhs(m, x))


def omega_leading(f: Interaction, eps: float, report: ConditionReport) -> complex:
    """Leading-order secular frequency for the reported condition."""
    cond = report.condition
    if cond is Condition.I:
        m0 = report.m_q0
        kappa1 = np.conj(m0) / abs(m0)
        return f.F0 + eps * kappa1 * m0
    if cond is Condition.II:
        return f.F0 - 1j * eps ** 2 * report.m_q1
    if cond is Condition.III:
        return f.F0 + 2.0 * eps ** 3 * abs(report.m_q3)
    raise UnsupportedError("no leading-order formula when M(Q0) = M(Q1) = M(Q3) = 0")


def monochromatic_m01(x: float, omega: float) -> float:
    """M(Q3) predicted for ``f = (w x / 2) cos(w t)`` at a zero ``x`` of J_0."""
    return triple_sum_T(x) / omega ** 2


def log_fit(xs, ys) -> tuple[float, float]:
    """Least-squares line through ``(xs, log ys)``; returns (slope, intercept)."""
    slope, intercept = np.polyfit(np.asarray(xs, float), np.log(np.asarray(ys, float)), 1)
    return float(slope), float(intercept)
