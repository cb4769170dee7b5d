"""Periodic drives and the phase functions built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AccuracyError, UnsupportedSpectrumError
from .fourier import FourierSeries, current_budget, multiply, renorm2

QUAD_START = 4096
QUAD_MAX = 1 << 18
QUAD_TOL = 1e-13
EDGE_TOL = 1e-12


@dataclass(frozen=True)
class Interaction:
    """Real periodic drive ``f(t) = F0 + sum_n (F_n e^{i n w t} + c.c.)``.

    Parameters
    ----------
    omega : float
        Drive angular frequency.
    F0 : float
        Static (dc) component.
    harmonics : sequence of (int, complex)
        Pairs ``(n, F_n)`` with ``n >= 1``; ``F_{-n}`` is ``conj(F_n)``.
    """

    omega: float
    F0: float = 0.0
    harmonics: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")
        merged: dict[int, complex] = {}
        for n, c in self.harmonics:
            n = int(n)
            if n < 1:
                raise ValueError("harmonic indices must be >= 1")
            merged[n] = merged.get(n, 0j) + complex(c)
        object.__setattr__(self, "harmonics", tuple(sorted(merged.items())))
        object.__setattr__(self, "F0", float(self.F0))
        object.__setattr__(self, "omega", float(self.omega))

    @classmethod
    def monochromatic(cls, omega: float, phi: float, F0: float = 0.0, phi_sin: float = 0.0) -> "Interaction":
        """``f = F0 + phi cos(w t) + phi_sin sin(w t)``."""
        return cls(omega, F0, ((1, 0.5 * (phi - 1j * phi_sin)),))

    @property
    def amplitude(self) -> float:
        """``phi_0``: modulus of the first-harmonic amplitude ``2|F_1|``."""
        return 2.0 * abs(dict(self.harmonics).get(1, 0j))

    @property
    def chi1(self) -> float:
        return 2.0 * self.amplitude / self.omega

    @property
    def chi2(self) -> float:
        return 2.0 * self.F0 / self.omega

    @property
    def is_monochromatic(self) -> bool:
        return all(n == 1 for n, c in self.harmonics if c != 0)

    def shifted(self, theta: float) -> "Interaction":
        """Drive translated in time: ``F_n -> F_n e^{i n theta}``."""
        return Interaction(self.omega, self.F0, tuple((n, c * np.exp(1j * n * theta)) for n, c in self.harmonics))

    def lattice(self) -> float:
        """Frequency spacing on which q (and everything built from it) lives."""
        chi2 = self.chi2
        k = round(chi2)
        if abs(chi2 - k) > 1e-12 * max(1.0, abs(chi2)):
            raise UnsupportedSpectrumError(
                f"2*F0/omega = {chi2!r} is not an integer; q is not periodic on the drive lattice"
            )
        return self.omega if k % 2 == 0 else 0.5 * self.omega

    def series(self, base_freq: float | None = None) -> FourierSeries:
        """Fourier series of f on the given lattice (default: ``omega``)."""
        base = self.omega if base_freq is None else base_freq
        ratio = self.omega / base
        step = round(ratio)
        if abs(ratio - step) > 1e-12:
            raise ValueError("drive frequency is not a multiple of the lattice spacing")
        coeffs = {0: self.F0}
        for n, c in self.harmonics:
            coeffs[n * step] = c
            coeffs[-n * step] = np.conj(c)
        return FourierSeries.from_coeffs(base, coeffs)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.F0)
        for n, c in self.harmonics:
            out = out + 2.0 * np.real(c * np.exp(1j * n * self.omega * t))
        return out if out.ndim else float(out)

    def primitive(self, t):
        """Closed-form ``int_0^t f``."""
        t = np.asarray(t, dtype=float)
        out = self.F0 * t
        for n, c in self.harmonics:
            out = out + 2.0 * np.real(c * (np.exp(1j * n * self.omega * t) - 1.0) / (1j * n * self.omega))
        return out

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "F0": self.F0,
            "harmonics": [{"n": n, "re": c.real, "im": c.imag} for n, c in self.harmonics],
        }

    @classmethod
    def from_dict(cls, obj) -> "Interaction":
        harm = tuple((int(h["n"]), complex(h.get("re", 0.0), h.get("im", 0.0))) for h in obj.get("harmonics", []))
        return cls(float(obj["omega"]), float(obj.get("F0", 0.0)), harm)


def phase_coefficients(func, base_freq: float, budget: int | None = None,
                       start: int = QUAD_START, tol: float = QUAD_TOL) -> FourierSeries:
    """Fourier coefficients of a ``2 pi / base_freq`` periodic function by the trapezoid rule.

    The sample count is doubled until the retained coefficients change by
    less than ``tol``.
    """
    if budget is None:
        budget = current_budget()
    period = 2.0 * math.pi / base_freq

    def coeffs(n):
        t = np.arange(n) * (period / n)
        c = np.fft.fft(func(t)) / n
        pos = c[:budget + 1]
        neg = c[n - budget:] if budget > 0 else c[:0]
        return np.concatenate([neg, pos])

    n = max(start, 4 * budget + 4)
    prev = coeffs(n)
    while True:
        n *= 2
        cur = coeffs(n)
        if np.max(np.abs(cur - prev)) <= tol or n >= QUAD_MAX:
            break
        prev = cur
    return FourierSeries(base_freq, cur).trimmed(budget)


def build_q(f: Interaction, budget: int | None = None) -> FourierSeries:
    """Series of ``q(t) = exp(i int_0^t f)`` on the lattice of ``f``."""
    base = f.lattice()
    if budget is None:
        budget = current_budget()
    q = phase_coefficients(lambda t: np.exp(1j * f.primitive(t)), base, budget)
    # the outermost retained harmonics must be negligible
    tail = max(abs(q[s * m]) for m in range(budget - 2, budget + 1) for s in (1, -1))
    if budget > 2 and tail > EDGE_TOL:
        raise AccuracyError(
            f"q is not resolved within |m| <= {budget}; raise the index budget or lower the drive amplitude"
        )
    return q


@dataclass(frozen=True)
class PhaseFunctions:
    """q together with Q0 = q^2, Q1, Q2 and Q3 for one drive."""

    q: FourierSeries
    Q0: FourierSeries
    Q1: FourierSeries
    Q2: FourierSeries
    Q3: FourierSeries

    @property
    def base_freq(self) -> float:
        return self.q.base_freq


def build_Q0(q: FourierSeries) -> FourierSeries:
    return multiply(q, q)


def build_Q1(Q0: FourierSeries) -> FourierSeries:
    return renorm2(Q0, Q0.conj())


def build_Q2(Q0: FourierSeries) -> FourierSeries:
    return renorm2(Q0, Q0)


def build_Q3(Q0: FourierSeries, Q1: FourierSeries) -> FourierSeries:
    return renorm2(Q0, Q1)


def build_phase_functions(f: Interaction, budget: int | None = None) -> PhaseFunctions:
    q = build_q(f, budget)
    Q0 = build_Q0(q)
    Q1 = build_Q1(Q0)
    return PhaseFunctions(q, Q0, Q1, build_Q2(Q0), build_Q3(Q0, Q1))


def parse_harmonics(items: Sequence[str]) -> tuple:
    """Parse ``"n:re:im"`` strings into harmonic pairs."""
    out = []
    for item in items:
        parts = item.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"harmonic {item!r} is not of the form n:re[:im]")
        n = int(parts[0])
        re = float(parts[1])
        im = float(parts[2]) if len(parts) == 3 else 0.0
        out.append((n, complex(re, im)))
    return tuple(out)
