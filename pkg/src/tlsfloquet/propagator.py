"""Floquet-form propagator built from a Riccati solution g.

With ``R = exp(-i int_0^t (f + g))`` and ``S = int_0^t R^{-2}`` the matrix

    U = [[R (1 + i g(0) S),  -i eps R S],
         [-i eps conj(R S),  conj(R) (1 - i conj(g(0) S))]]

solves ``i dU/dt = (eps sigma_1 + f sigma_3) U``.  Writing
``R = e^{-i Omega t} rho(t)`` with periodic ``rho`` splits each entry into
two branches ``e^{-i Omega t} u^-(t) + e^{+i Omega t} u^+(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentOmegaError, ResonanceError
from .expansion import Expansion, assemble_g
from .fourier import FourierSeries, index_budget, integrate_from_zero, mean, remove_mean
from .interaction import Interaction, phase_coefficients

OMEGA_TOL = 1e-10
RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class ExtendedSeries:
    """``sum_{m,s} c_{m,s} e^{i (m omega_b + s Omega) t}`` with ``|s| <= 2``."""

    omega_b: float
    Omega: float
    branches: dict  # s -> FourierSeries

    def __post_init__(self):
        for s, series in self.branches.items():
            if s not in (-2, -1, 0, 1, 2):
                raise ValueError(f"branch index {s} outside -2..2")
            if not math.isclose(series.base_freq, self.omega_b, rel_tol=1e-14):
                raise ValueError("branch lattice differs from omega_b")

    @property
    def terms(self) -> dict:
        out = {}
        for s, series in self.branches.items():
            for m, c in series.coeffs.items():
                out[(m, s)] = c
        return out

    def branch(self, s: int) -> FourierSeries:
        return self.branches.get(s, FourierSeries.zero(self.omega_b))

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros(t_arr.shape, dtype=complex)
        for s, series in self.branches.items():
            out = out + np.exp(1j * s * self.Omega * t_arr) * series(t_arr)
        return complex(out) if out.ndim == 0 else out

    def derivative(self) -> "ExtendedSeries":
        return ExtendedSeries(
            self.omega_b,
            self.Omega,
            {s: series.derivative() + series * (1j * s * self.Omega) for s, series in self.branches.items()},
        )


def _periodic_phase(Phi: FourierSeries, factor: complex) -> FourierSeries:
    """Coefficients of ``exp(factor * Phi(t))`` by quadrature."""
    return phase_coefficients(lambda t: np.exp(factor * Phi(t)), Phi.base_freq)


def build_R(f: Interaction, g: FourierSeries, Omega: float) -> ExtendedSeries:
    """``R = e^{-i Omega t} rho`` with ``rho = exp(-i int_0^t (f + g - Omega))``."""
    fg = f.series(g.base_freq) + g
    drift = mean(fg)
    if abs(drift - Omega) > OMEGA_TOL * max(1.0, abs(Omega)):
        raise InconsistentOmegaError(f"M(f+g) = {drift!r} differs from Omega = {Omega!r}")
    Phi = integrate_from_zero(remove_mean(fg))
    rho = _periodic_phase(Phi, -1j)
    return ExtendedSeries(g.base_freq, Omega, {-1: rho})


def build_S(R: ExtendedSeries) -> ExtendedSeries:
    """``S = int_0^t R^{-2}``: an ``s = 2`` branch plus the constant fixing ``S(0) = 0``."""
    rho = R.branch(-1)
    inv_sq = phase_coefficients(lambda t: rho(t) ** -2, R.omega_b)
    w, Om = R.omega_b, R.Omega
    m = inv_sq.indices
    den = 1j * (m * w + 2.0 * Om)
    if np.any(np.abs(m * w + 2.0 * Om) <= RESONANCE_TOL * w):
        raise ResonanceError("2 Omega coincides with a lattice frequency")
    D = FourierSeries(w, inv_sq.data / den)
    C = D(0.0)
    return ExtendedSeries(w, Om, {2: D, 0: FourierSeries.constant(w, -C)})


@dataclass(frozen=True)
class FloquetOperator:
    """Propagator in Floquet form.

    ``U11 = e^{-i Omega t} u11_minus + e^{i Omega t} u11_plus`` and likewise
    for ``U12``; the second row follows from ``U21 = -conj(U12)`` and
    ``U22 = conj(U11)``.
    """

    Omega: float
    u11_minus: FourierSeries
    u11_plus: FourierSeries
    u12_minus: FourierSeries
    u12_plus: FourierSeries
    g0: complex
    eps: float
    omega: float
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def U11(self) -> ExtendedSeries:
        return ExtendedSeries(self.u11_minus.base_freq, self.Omega, {-1: self.u11_minus, 1: self.u11_plus})

    @property
    def U12(self) -> ExtendedSeries:
        return ExtendedSeries(self.u12_minus.base_freq, self.Omega, {-1: self.u12_minus, 1: self.u12_plus})

    def evaluate(self, t):
        """``(U11(t), U12(t))``."""
        return self.U11(t), self.U12(t)

    def evaluate_cycles(self, cycles):
        """``(U11, U12)`` at ``t = cycles * 2 pi / omega``.

        The periodic factors are evaluated at the fractional part of the
        period count, so the phases stay exact at very long times.
        """
        n = np.asarray(cycles, dtype=float)
        base = self.u11_minus.base_freq
        periods = n * (base / self.omega)
        frac = periods - np.floor(periods)
        tau = frac * (2.0 * math.pi / base)
        slow = self.Omega * n * (2.0 * math.pi / self.omega)
        em, ep = np.exp(-1j * slow), np.exp(1j * slow)
        U11 = em * self.u11_minus(tau) + ep * self.u11_plus(tau)
        U12 = em * self.u12_minus(tau) + ep * self.u12_plus(tau)
        return U11, U12

    def matrix(self, t) -> np.ndarray:
        U11, U12 = self.evaluate(t)
        return np.array([[U11, U12], [-np.conj(U12), np.conj(U11)]])


def build_U(f: Interaction, expansion: Expansion, eps: float, order: int | None = None) -> FloquetOperator:
    """Assemble the Floquet propagator from an expansion at coupling ``eps``."""
    with index_budget(expansion.budget):
        g = assemble_g(expansion, eps, order)
        drift = mean(f.series(g.base_freq) + g)
        Omega = float(np.real(drift))
        if abs(np.imag(drift)) > OMEGA_TOL * max(1.0, abs(Omega)):
            raise InconsistentOmegaError(f"secular frequency has imaginary part {np.imag(drift)!r}")
        g = g.shifted_mean(mean(g) - 1j * np.imag(drift))
        g0 = complex(g(0.0))
        R = build_R(f, g, Omega)
        rho = R.branch(-1)
        if eps == 0.0:
            zero = FourierSeries.zero(rho.base_freq)
            return FloquetOperator(Omega, rho, zero, zero, zero, g0, eps, f.omega, {"R": R, "g": g})
        S = build_S(R)
        D = S.branch(2)
        C = -S.branch(0)[0]
        u11_minus = rho * (1.0 - 1j * g0 * C)
        u11_plus = rho * D * (1j * g0)
        u12_minus = rho * (1j * eps * C)
        u12_plus = rho * D * (-1j * eps)
    return FloquetOperator(Omega, u11_minus, u11_plus, u12_minus, u12_plus, g0, eps, f.omega,
                           {"R": R, "S": S, "g": g, "pole": C})


def transition_probability(U: FloquetOperator, t) -> np.ndarray:
    """``|U12(t)|^2``."""
    return np.abs(U.U12(t)) ** 2


def unitarity_defect(U: FloquetOperator, t) -> np.ndarray:
    """``|U11|^2 + |U12|^2 - 1``."""
    U11, U12 = U.evaluate(t)
    return np.abs(U11) ** 2 + np.abs(U12) ** 2 - 1.0


def schrodinger_residual(U: FloquetOperator, f: Interaction, t) -> float:
    """Largest entry of ``i dU/dt - H U`` over the sample times ``t`` (first column)."""
    U11, U12 = U.U11, U.U12
    a, b = U11(t), -np.conj(U12(t))
    da = U11.derivative()(t)
    db = -np.conj(U12.derivative()(t))
    ft = f(np.asarray(t))
    r1 = 1j * da - (ft * a + U.eps * b)
    r2 = 1j * db - (U.eps * a - ft * b)
    return float(max(np.abs(r1).max(), np.abs(r2).max()))


def log_biased_cycles(horizon: float, samples: int, first: float = 1e-3) -> np.ndarray:
    """Sample points in units of drive periods, geometrically spaced from ``first``.

    The grid starts at 0 and is dense early and sparse late.
    """
    if samples < 2:
        return np.array([0.0, horizon][:samples])
    pts = np.geomspace(first, horizon, samples - 1)
    return np.concatenate([[0.0], pts])


def pole_amplitude(U: FloquetOperator) -> complex:
    """``eps * C`` where ``C`` carries the would-be ``1/(2 Omega)`` factor of ``S``."""
    return U.eps * U.extras.get("pole", 0j)


def pole_residue(U: FloquetOperator) -> complex:
    """Numerator of the ``1/(2 Omega)`` term of ``U12``: ``eps * M(rho^{-2})``.

    Secular-free construction makes this ``O(eps^3)``, which keeps the pole
    harmless when ``Omega = O(eps^3)``.
    """
    S = U.extras.get("S")
    if S is None:
        return 0j
    return U.eps * 2j * U.Omega * S.branch(2)[0]
