"""Direct numerical integration of the two-level Schroedinger equation.

An embedded Dormand-Prince 5(4) integrator with adaptive steps provides an
independent reference for the Floquet propagator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import StiffnessError
from .interaction import Interaction

TOL_MIN = 1e-13
TOL_MAX = 1e-6
MAX_STEPS = 50_000_000

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# difference between fifth- and fourth-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


class EigenphaseWarning(UserWarning):
    """The monodromy eigenphase is too close to 0 or pi to fix its branch."""


@dataclass(frozen=True)
class OracleTrajectory:
    """First column ``(U11, U21)`` of the propagator on a time grid."""

    t: np.ndarray
    u11: np.ndarray
    u21: np.ndarray
    steps: int
    rejected: int
    step_tolerance: float

    @property
    def U_samples(self) -> np.ndarray:
        """Propagator matrices, shape ``(len(t), 2, 2)``."""
        a, b = self.u11, self.u21
        return np.stack([np.stack([a, -np.conj(b)], -1), np.stack([b, np.conj(a)], -1)], -2)

    @property
    def u12(self) -> np.ndarray:
        return -np.conj(self.u21)

    @property
    def probability(self) -> np.ndarray:
        return np.abs(self.u21) ** 2

    @property
    def unitarity_defect(self) -> np.ndarray:
        return np.abs(self.u11) ** 2 + np.abs(self.u21) ** 2 - 1.0


def _drive_terms(f: Interaction):
    return f.F0, [(n * f.omega, 2.0 * c.real, -2.0 * c.imag) for n, c in f.harmonics]


def integrate(f: Interaction, eps: float, t_grid, tol: float = 1e-12, h0: float | None = None) -> OracleTrajectory:
    """Integrate ``i d/dt (a, b) = (f a + eps b, eps a - f b)`` from ``(1, 0)``.

    The step controller bounds the local error estimate of each step by
    ``tol * h / T`` with ``T`` the drive period (error per unit step), so
    the accumulated error over one period stays near ``tol``.  The state is
    advanced with compensated summation.

    Parameters
    ----------
    f : Interaction
        The drive.
    eps : float
        Transverse coupling.
    t_grid : array_like
        Non-decreasing output times, all ``>= 0``.
    tol : float
        Error tolerance per drive period, in ``[1e-13, 1e-6]``.

    Raises
    ------
    StiffnessError
        If the step size collapses below round-off.
    """
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ValueError(f"tol must lie in [{TOL_MIN}, {TOL_MAX}]")
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or (grid.size and (grid[0] < 0.0 or np.any(np.diff(grid) < 0.0))):
        raise ValueError("t_grid must be a non-decreasing 1-d array of non-negative times")

    F0, terms = _drive_terms(f)
    eps = float(eps)
    cos, sin, sqrt = math.cos, math.sin, math.sqrt

    def drive(t):
        ft = F0
        for w, cr, ci in terms:
            x = w * t
            ft += cr * cos(x) + ci * sin(x)
        return ft

    c2, c3, c4, c5 = _C[1:5]
    a21 = _A[1][0]
    a31, a32 = _A[2]
    a41, a42, a43 = _A[3]
    a51, a52, a53, a54 = _A[4]
    a61, a62, a63, a64, a65 = _A[5]
    b1, _, b3, b4, b5, b6, _ = _B
    e1, _, e3, e4, e5, e6, e7 = _E

    period = 2.0 * math.pi / f.omega
    scale = abs(F0) + sum(abs(cr) + abs(ci) for _, cr, ci in terms) + abs(eps)
    fastest = max([w for w, _, _ in terms] + [scale, 1e-300])
    h = h0 if h0 is not None else 0.01 / fastest
    rate = tol / period

    # Time is tracked as (period count, offset within the period) so the
    # drive is always evaluated at a small argument and no round-off builds
    # up in t over long runs.
    cycles = np.floor(grid / period)
    offsets = grid - cycles * period
    over = offsets >= period
    cycles[over] += 1.0
    offsets[over] = 0.0
    offsets = np.maximum(offsets, 0.0)

    out_a = np.empty(grid.size, dtype=complex)
    out_b = np.empty(grid.size, dtype=complex)
    k, t, a, b = 0.0, 0.0, 1 + 0j, 0j
    ca = cb = 0j  # compensation terms
    ft = drive(0.0)
    ka, kb = -1j * (ft * a + eps * b), -1j * (eps * a - ft * b)
    steps = rejected = 0
    idx = 0
    n_out = grid.size
    while idx < n_out and cycles[idx] == 0.0 and offsets[idx] == 0.0:
        out_a[idx], out_b[idx] = a, b
        idx += 1

    while idx < n_out:
        target = offsets[idx] if cycles[idx] == k else period
        gap = target - t
        landing = h >= gap
        hs = gap if landing else h

        ya = a + hs * a21 * ka
        yb = b + hs * a21 * kb
        ft = drive(t + c2 * hs)
        k2a, k2b = -1j * (ft * ya + eps * yb), -1j * (eps * ya - ft * yb)
        ya = a + hs * (a31 * ka + a32 * k2a)
        yb = b + hs * (a31 * kb + a32 * k2b)
        ft = drive(t + c3 * hs)
        k3a, k3b = -1j * (ft * ya + eps * yb), -1j * (eps * ya - ft * yb)
        ya = a + hs * (a41 * ka + a42 * k2a + a43 * k3a)
        yb = b + hs * (a41 * kb + a42 * k2b + a43 * k3b)
        ft = drive(t + c4 * hs)
        k4a, k4b = -1j * (ft * ya + eps * yb), -1j * (eps * ya - ft * yb)
        ya = a + hs * (a51 * ka + a52 * k2a + a53 * k3a + a54 * k4a)
        yb = b + hs * (a51 * kb + a52 * k2b + a53 * k3b + a54 * k4b)
        ft = drive(t + c5 * hs)
        k5a, k5b = -1j * (ft * ya + eps * yb), -1j * (eps * ya - ft * yb)
        ya = a + hs * (a61 * ka + a62 * k2a + a63 * k3a + a64 * k4a + a65 * k5a)
        yb = b + hs * (a61 * kb + a62 * k2b + a63 * k3b + a64 * k4b + a65 * k5b)
        t_end = t + hs
        ft = drive(t_end)
        k6a, k6b = -1j * (ft * ya + eps * yb), -1j * (eps * ya - ft * yb)
        da = hs * (b1 * ka + b3 * k3a + b4 * k4a + b5 * k5a + b6 * k6a)
        db = hs * (b1 * kb + b3 * k3b + b4 * k4b + b5 * k5b + b6 * k6b)
        na, nb = a + da, b + db
        ft = drive(t_end)
        k7a, k7b = -1j * (ft * na + eps * nb), -1j * (eps * na - ft * nb)
        ea = hs * (e1 * ka + e3 * k3a + e4 * k4a + e5 * k5a + e6 * k6a + e7 * k7a)
        eb = hs * (e1 * kb + e3 * k3b + e4 * k4b + e5 * k5b + e6 * k6b + e7 * k7b)

        bound = rate * hs
        sa = bound * (1.0 + max(abs(a), abs(na)))
        sb = bound * (1.0 + max(abs(b), abs(nb)))
        err = sqrt(0.5 * ((abs(ea) / sa) ** 2 + (abs(eb) / sb) ** 2))
        steps += 1
        if steps > MAX_STEPS:
            raise StiffnessError("step budget exhausted")
        if err <= 1.0:
            # Kahan update of the state
            ya = da - ca
            sa_ = a + ya
            ca = (sa_ - a) - ya
            a = sa_
            yb = db - cb
            sb_ = b + yb
            cb = (sb_ - b) - yb
            b = sb_
            t = target if landing else t_end
            if landing and target == period:
                k += 1.0
                t = 0.0
            ka, kb = k7a, k7b
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.25))
            h = max(h, hs * factor) if landing else hs * factor
            while idx < n_out and cycles[idx] == k and offsets[idx] <= t:
                out_a[idx], out_b[idx] = a, b
                idx += 1
        else:
            rejected += 1
            h = hs * max(0.2, 0.9 * err ** -0.25)
        if h <= 16.0 * np.spacing(period):
            raise StiffnessError(f"step size underflow at t = {k * period + t!r}")
    return OracleTrajectory(grid, out_a, out_b, steps, rejected, tol)


def monodromy(f: Interaction, eps: float, tol: float = 1e-12) -> np.ndarray:
    """Propagator over one drive period as a 2x2 array."""
    T = 2.0 * math.pi / f.omega
    traj = integrate(f, eps, [T], tol)
    a, b = traj.u11[0], traj.u21[0]
    return np.array([[a, -np.conj(b)], [b, np.conj(a)]])


def monodromy_omega(f: Interaction, eps: float, reference: float | None = None, tol: float = 1e-12) -> float:
    """Secular frequency from the eigenphase of the one-period propagator.

    The eigenvalues of ``U(T)`` are ``exp(-+i theta)``, which fixes Omega only
    up to sign and multiples of ``omega / 2``.  The candidate nearest to
    ``reference`` is returned (``theta / T`` without a reference).
    """
    T = 2.0 * math.pi / f.omega
    U = monodromy(f, eps, tol)
    a, b = U[0, 0], U[1, 0]
    theta = math.atan2(math.hypot(a.imag, abs(b)), a.real)
    floor = 100.0 * tol
    if theta < floor or math.pi - theta < floor:
        warnings.warn(
            f"eigenphase {theta!r} is within integration accuracy of 0 or pi; branch is ambiguous",
            EigenphaseWarning,
            stacklevel=2,
        )
    base = theta / T
    if reference is None:
        return base
    half = 0.5 * f.omega
    best = None
    for sign in (1.0, -1.0):
        k = round((reference - sign * base) / half)
        for kk in (k - 1, k, k + 1):
            cand = sign * base + kk * half
            if best is None or abs(cand - reference) < abs(best - reference):
                best = cand
    return float(best)
