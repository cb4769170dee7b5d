"""Secular-free epsilon expansion of the Riccati solution ``g = q sum v_n eps^n``.

Every order obeys ``d/dt (v_n / q) = i I_n`` with ``I_2 = v_1^2 - Q0^{-1}`` and
``I_n = sum_p v_p v_{n-p}``.  The integration constants ``kappa_n`` are fixed
by demanding that each ``I_n`` has zero mean, which keeps all ``v_n``
quasi-periodic.  Two independent engines are provided: closed-form fixing
rules for the resonance conditions I and III, and a generic solver that
carries the unfixed constants symbolically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .classifier import DEFAULT_TOL, Condition, classify
from .errors import DegenerateDriveError, UnsupportedError, WrongConditionError
from .fourier import (
    DEFAULT_BUDGET,
    FourierSeries,
    index_budget,
    integrate_from_zero,
    mean,
    remove_mean,
    renorm2,
    renorm_n,
)
from .interaction import Interaction, PhaseFunctions, build_phase_functions

MAX_ORDER = 10
MEAN_TOL = 1e-10


class RadiusWarning(UserWarning):
    """Raised when epsilon lies beyond the estimated convergence radius."""


@dataclass
class Expansion:
    """Result of an order-N expansion.

    ``v[n-1]`` holds v_n and ``integrands[n-2]`` holds I_n.  Only the first
    ``len(kappa)`` orders are fully determined; the remaining v_n were built
    with their still-free constants set to zero.
    """

    f: Interaction
    order: int
    condition: Condition
    phases: PhaseFunctions
    v: list
    kappa: list
    integrands: list
    omega_coeffs: list
    budget: int = DEFAULT_BUDGET
    diagnostics: dict = field(default_factory=dict)

    @property
    def q(self) -> FourierSeries:
        return self.phases.q

    @property
    def base_freq(self) -> float:
        return self.phases.base_freq

    @property
    def g_order(self) -> int:
        """Number of fully determined orders (usable in g)."""
        return len(self.kappa)

    @property
    def lag(self) -> int:
        return self.order - self.g_order

    def v_n(self, n: int) -> FourierSeries:
        return self.v[n - 1]

    def kappa_n(self, n: int) -> complex:
        return self.kappa[n - 1]

    def integrand(self, n: int) -> FourierSeries:
        return self.integrands[n - 2]

    def to_dict(self) -> dict:
        def c(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {
            "condition": self.condition.value,
            "order": self.order,
            "determined_orders": self.g_order,
            "kappa": [c(k) for k in self.kappa],
            "omega_coeffs": [c(w) for w in self.omega_coeffs],
            "integrand_means": [c(mean(I)) for I in self.integrands],
            "v": [s.to_dict() for s in self.v],
        }


# -- shared building blocks ----------------------------------------------

def _integrand(v: list, n: int, Q0c: FourierSeries) -> FourierSeries:
    acc = FourierSeries.zero(Q0c.base_freq)
    for p in range(1, n):
        acc = acc + v[p - 1] * v[n - p - 1]
    if n == 2:
        acc = acc - Q0c
    return acc


def _v_from_integrand(pf: PhaseFunctions, I_n: FourierSeries, kappa_n: complex) -> FourierSeries:
    """``v_n = q^{-1} (i R2(Q0 | I_n) + kappa_n Q0)``."""
    return pf.q.conj() * (1j * renorm2(pf.Q0, I_n) + kappa_n * pf.Q0)


def _rebuild(pf: PhaseFunctions, kappa: list, N: int):
    """All v_1..v_N and I_2..I_N for the given constants (missing ones are 0)."""
    Q0c = pf.Q0.conj()
    k = list(kappa) + [0j] * (N - len(kappa))
    v = [k[0] * pf.q]
    integrands = []
    for n in range(2, N + 1):
        I_n = _integrand(v, n, Q0c)
        integrands.append(I_n)
        v.append(_v_from_integrand(pf, I_n, k[n - 1]))
    return v, integrands


def _omega_coeffs(f: Interaction, pf: PhaseFunctions, v: list, upto: int) -> list:
    return [complex(f.F0)] + [mean(pf.q * v[n - 1]) for n in range(1, upto + 1)]


def _check_means(integrands: list, upto: int, tol: float = MEAN_TOL) -> float:
    worst = 0.0
    for n in range(2, upto + 1):
        worst = max(worst, abs(mean(integrands[n - 2])))
    if worst > tol:
        raise DegenerateDriveError(f"secular term survived: max |M(I_n)| = {worst:.3e}")
    return worst


def _prepare(f: Interaction, N: int, expected: Condition, tol: float, budget: int):
    if N < 1:
        raise ValueError("order must be positive")
    if N > MAX_ORDER:
        raise ValueError(f"order {N} exceeds the configured maximum {MAX_ORDER}")
    report = classify(f, tol)
    if report.condition is not expected:
        if report.condition is Condition.UNSUPPORTED:
            raise UnsupportedError("M(Q0), M(Q1) and M(Q3) all vanish; this case is not treated")
        raise WrongConditionError(f"drive satisfies condition {report.condition.value}, not {expected.value}")
    with index_budget(budget):
        pf = build_phase_functions(f)
    return report, pf


# -- condition I -------------------------------------------------------

def expand_case_I(f: Interaction, N: int, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Expansion:
    """Expansion for ``M(Q0) != 0``.

    ``kappa_1`` is the phase with ``kappa_1 M(Q0) = |M(Q0)|``; each later
    ``kappa_n`` enters ``M(I_{n+1})`` only through ``2 v_1 v_n``, with slope
    ``2 kappa_1 M(Q0)``, and is solved from that affine relation.
    """
    report, pf = _prepare(f, N, Condition.I, tol, budget)
    with index_budget(budget):
        m0 = mean(pf.Q0)
        k1 = np.conj(m0) / abs(m0)
        kappa = [complex(k1)]
        slope = 2.0 * k1 * m0
        Q0c = pf.Q0.conj()
        v = [k1 * pf.q]
        for n in range(2, N):
            v_trial = _v_from_integrand(pf, _integrand(v, n, Q0c), 0.0)
            trial = _integrand(v + [v_trial], n + 1, Q0c)
            kn = -mean(trial) / slope
            kappa.append(complex(kn))
            v.append(v_trial + kn * pf.q)
        v, integrands = _rebuild(pf, kappa, N)
        _check_means(integrands, N)
        omega = _omega_coeffs(f, pf, v, len(kappa))
    return Expansion(f, N, Condition.I, pf, v, kappa, integrands, omega, budget,
                     {"report": report})


# -- condition III -----------------------------------------------------

class _CaseIII:
    """Closed-form constants for ``M(Q0) = M(Q1) = 0``, ``M(0|1) != 0``."""

    def __init__(self, pf: PhaseFunctions):
        self.pf = pf
        self.Q0, self.Q1, self.Q2 = pf.Q0, pf.Q1, pf.Q2
        self.q, self.qc = pf.q, pf.q.conj()
        self.m01 = mean(renorm2(pf.Q0, pf.Q1))
        if abs(self.m01) == 0.0:
            raise UnsupportedError("M(0|1) vanishes")
        self.k = [np.conj(self.m01) / abs(self.m01)]
        self.v = [self.k[0] * self.q]

    def R2(self, a, b):
        return renorm2(a, b)

    def R(self, *items):
        return renorm_n(items)

    def fix_kappa2(self):
        Q0, Q1, Q2 = self.Q0, self.Q1, self.Q2
        k1 = self.k[0]
        s = -(Q0.conj() * ((k1 ** 2 * Q2 - Q1) * (k1 ** 2 * Q2 - Q1)))
        A1 = -4 * k1 ** 4 * self.R(Q0, Q0, Q2) + 4 * k1 ** 2 * self.R(Q0, Q0, Q1) + self.R2(Q0, s)
        self.A1 = A1
        k2 = -1j * mean(A1) / (2.0 * self.m01)
        self.k.append(complex(k2))
        self.v.append(self.qc * (1j * k1 ** 2 * Q2 - 1j * Q1 + k2 * Q0))

    def fix_kappa3(self):
        Q0, Q1, Q2, R = self.Q0, self.Q1, self.Q2, self.R
        k1, k2 = self.k
        A1 = self.A1
        A2 = (8 * k1 ** 6 * R(Q0, Q2, Q2) - 8 * k1 ** 4 * R(Q0, Q2, Q1)
              - 8j * k1 ** 4 * k2 * R(Q0, Q2, Q0) - 8 * k1 ** 4 * R(Q0, Q1, Q2)
              + 8 * k1 ** 2 * R(Q0, Q1, Q1) + 8j * k1 ** 2 * k2 * R(Q0, Q1, Q0)
              + 16j * k1 ** 2 * k2 * R(Q0, Q0, Q1) - 32j * k1 ** 4 * k2 * R(Q0, Q0, Q2)
              - 12 * k1 ** 2 * k2 ** 2 * R(Q0, Q2) - 4 * k1 ** 2 * R(Q0, A1))
        v2sq = self.v[1] * self.v[1]
        A3 = (8 * k1 ** 6 * R(Q2, Q0, Q2) - 8 * k1 ** 4 * R(Q2, Q0, Q1)
              - 8j * k1 ** 4 * k2 * R(Q2, Q0, Q0) - 8 * k1 ** 4 * R(Q1, Q0, Q2)
              + 8 * k1 ** 2 * R(Q1, Q0, Q1) + 8j * k1 ** 2 * k2 * R(Q1, Q0, Q0)
              - 8j * k1 ** 4 * k2 * R(Q0, Q0, Q2) + 8j * k1 ** 2 * k2 * R(Q0, Q0, Q1)
              - 8 * k1 ** 2 * k2 ** 2 * R(Q0, Q0, Q0) - 2 * k1 ** 2 * R(Q2, v2sq)
              + 2 * R(Q1, v2sq) + 2j * k2 * R(Q0, v2sq))
        inner = 1j * k1 ** 3 * R(Q0, Q2) - 1j * k1 * R(Q0, Q1) + k1 * k2 * Q2
        A4 = Q0.conj() * (inner * inner)
        self.A2, self.A3, self.A4 = A2, A3, A4
        k3 = (4 * mean(A4) - mean(A3) - mean(A2)) / (4.0 * k1 * self.m01)
        self.k.append(complex(k3))
        self.v.append(self._v_renormalised(3, k3))

    def _pair(self, a: int, b: int) -> FourierSeries:
        return self.v[a - 1] * self.v[b - 1]

    def l_m(self, m: int) -> FourierSeries:
        """``q (v_m - kappa_m q) = i sum_p R2(Q0 | v_p v_{m-p})``."""
        acc = FourierSeries.zero(self.q.base_freq)
        for p in range(1, m):
            acc = acc + renorm2(self.Q0, self._pair(p, m - p))
        return 1j * acc

    def _v_renormalised(self, m: int, km: complex) -> FourierSeries:
        return self.qc * (self.l_m(m) + km * self.Q0)

    def remainder1(self, n: int) -> complex:
        Q0, Q1, Q2, R = self.Q0, self.Q1, self.Q2, self.R
        k1, k2 = self.k[0], self.k[1]
        s = 0j
        for p in range(1, n - 3):
            x = self._pair(p, n - 3 - p)
            s += (-2 * k1 ** 2 * mean(R(Q0, Q0, Q0, x)) + mean(R(Q0, Q1, x))
                  - k1 ** 2 * mean(R(Q0, Q2, x)) + 1j * k2 * mean(R(Q0, Q0, x)))
        total = 2j * k1 * s
        for p in range(2, n - 3):
            total -= 2 * k1 ** 2 * mean(R(Q0, Q0, self._pair(p, n - 2 - p)))
        for p in range(3, n - 3):
            total += 1j * k1 * mean(renorm2(Q0, self._pair(p, n - 1 - p)))
        return total

    def remainder2(self, n: int) -> complex:
        k1 = self.k[0]
        qv2 = self.q * self.v[1]
        total = 0j
        for p in range(1, n - 3):
            total -= 2 * k1 * mean(self.R(qv2, self.Q0, self._pair(p, n - 3 - p)))
        for p in range(2, n - 3):
            total += 1j * mean(renorm2(qv2, self._pair(p, n - 2 - p)))
        return total

    def fix_late(self, n: int):
        """Fix kappa_{n-3} from ``M(I_n) = 0`` (n >= 7)."""
        k1 = self.k[0]
        qv3 = self.q * self.v[2]
        tail = sum((mean(self._pair(p, n - p)) for p in range(4, n - 3)), 0j)
        t4 = 1j * sum((mean(renorm2(qv3, self._pair(p, n - 3 - p))) for p in range(1, n - 3)), 0j)
        kn = -(tail + 2 * self.remainder1(n) + 2 * self.remainder2(n) + 2 * t4) / (4.0 * k1 * self.m01)
        self.k.append(complex(kn))
        self.v.append(self._v_renormalised(n - 3, kn))


def expand_case_III(f: Interaction, N: int, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Expansion:
    """Expansion for ``M(Q0) = M(Q1) = 0`` and ``M(Q3) != 0``.

    The constant ``kappa_{n-3}`` is the one fixed at order n, so an order-N
    expansion determines ``kappa_1 .. kappa_{N-3}``.
    """
    report, pf = _prepare(f, N, Condition.III, tol, budget)
    if N < 4:
        raise ValueError("condition III needs order >= 4 to fix kappa_1")
    with index_budget(budget):
        case = _CaseIII(pf)
        if abs(case.m01) <= tol:
            raise UnsupportedError("M(0|1) vanishes; this sub-case is not treated")
        if N >= 5:
            case.fix_kappa2()
        if N >= 6:
            case.fix_kappa3()
        for n in range(7, N + 1):
            case.fix_late(n)
        kappa = case.k
        v, integrands = _rebuild(pf, kappa, N)
        _check_means(integrands, N)
        omega = _omega_coeffs(f, pf, v, N - 1)
    diag = {"report": report, "m01": case.m01}
    for name in ("A1", "A2", "A3", "A4"):
        if hasattr(case, name):
            diag[name] = getattr(case, name)
    return Expansion(f, N, Condition.III, pf, v, kappa, integrands, omega, budget, diag)


def expand(f: Interaction, N: int, tol: float = DEFAULT_TOL, budget: int = DEFAULT_BUDGET) -> Expansion:
    """Dispatch on the condition of ``f``."""
    cond = classify(f, tol).condition
    if cond is Condition.I:
        return expand_case_I(f, N, tol, budget)
    if cond is Condition.III:
        return expand_case_III(f, N, tol, budget)
    if cond is Condition.II:
        raise UnsupportedError("the condition II recursion is not implemented")
    raise UnsupportedError("M(Q0), M(Q1) and M(Q3) all vanish; this case is not treated")


# -- generic engine: polynomials in the free constants -------------------

class _Poly:
    """Polynomial in kappa_1..kappa_N with FourierSeries coefficients."""

    __slots__ = ("terms", "nvars", "base")

    def __init__(self, terms: dict, nvars: int, base: float):
        self.terms = terms
        self.nvars = nvars
        self.base = base

    @classmethod
    def series(cls, s: FourierSeries, nvars: int, monomial=None):
        mono = monomial if monomial is not None else (0,) * nvars
        return cls({mono: s}, nvars, s.base_freq)

    @staticmethod
    def unit(k: int, nvars: int) -> tuple:
        e = [0] * nvars
        e[k - 1] = 1
        return tuple(e)

    def __add__(self, other: "_Poly") -> "_Poly":
        out = dict(self.terms)
        for m, s in other.terms.items():
            out[m] = out[m] + s if m in out else s
        return _Poly(out, self.nvars, self.base)

    def scale(self, c: complex) -> "_Poly":
        return _Poly({m: s * c for m, s in self.terms.items()}, self.nvars, self.base)

    def times_series(self, s: FourierSeries) -> "_Poly":
        return _Poly({m: c * s for m, c in self.terms.items()}, self.nvars, self.base)

    def __mul__(self, other: "_Poly") -> "_Poly":
        out: dict = {}
        for m1, s1 in self.terms.items():
            for m2, s2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = s1 * s2
                out[m] = out[m] + prod if m in out else prod
        return _Poly(out, self.nvars, self.base)

    def means(self) -> dict:
        return {m: mean(s) for m, s in self.terms.items()}

    def max_abs(self) -> float:
        return max((s.max_abs() for s in self.terms.values()), default=0.0)

    def substitute(self, k: int, value: complex) -> "_Poly":
        out: dict = {}
        for m, s in self.terms.items():
            e = m[k - 1]
            if e:
                m = m[:k - 1] + (0,) + m[k:]
                s = s * (value ** e)
            out[m] = out[m] + s if m in out else s
        return _Poly(out, self.nvars, self.base)

    def integrate(self) -> "_Poly":
        return _Poly({m: integrate_from_zero(remove_mean(s)) for m, s in self.terms.items()},
                     self.nvars, self.base)

    def evaluate_zero(self) -> FourierSeries:
        """Value with all remaining free constants set to zero."""
        const = (0,) * self.nvars
        return self.terms.get(const, FourierSeries.zero(self.base))


def _solve_single(coeffs: dict, k: int):
    """Root of a univariate polynomial {degree: coefficient} in kappa_k."""
    deg = max(coeffs)
    if deg == 1 and all(d in (0, 1) for d in coeffs):
        return -coeffs.get(0, 0j) / coeffs[1], coeffs[1]
    poly = np.zeros(deg + 1, dtype=complex)
    for d, c in coeffs.items():
        poly[deg - d] += c
    roots = np.roots(poly)
    lead = coeffs[deg]
    # branch: the root making lead * r**(deg-1) as close to the positive real axis as possible
    best = max(roots, key=lambda r: np.real(lead * r ** (deg - 1)) / max(abs(lead * r ** (deg - 1)), 1e-300))
    return complex(best), lead


def affine_kappa_oracle(f: Interaction, N: int, tol: float = DEFAULT_TOL,
                        budget: int = DEFAULT_BUDGET, rel_zero: float = 1e-11) -> Expansion:
    """Fix the constants by brute force, without any closed-form rule.

    Every v_n is carried as a polynomial in the constants that are still
    free.  At each order the mean of I_n is inspected: if it depends on a
    single free constant, the equation ``M(I_n) = 0`` is solved for it
    (a quadratic in kappa_1 uses the branch that puts ``lead * kappa``
    on the positive real axis).  A nonzero mean with no free constant, or
    one involving several of them, is reported as degenerate.
    """
    if N > MAX_ORDER:
        raise ValueError(f"order {N} exceeds the configured maximum {MAX_ORDER}")
    report = classify(f, tol)
    if report.condition not in (Condition.I, Condition.III):
        raise WrongConditionError(f"oracle supports conditions I and III, got {report.condition.value}")
    log = []
    with index_budget(budget):
        q = _q_only(f)
        Q0 = q * q
        Q0c = Q0.conj()
        nv = N
        fixed: dict[int, complex] = {}
        v = [_Poly.series(q, nv, _Poly.unit(1, nv))]
        integrands = []
        for n in range(2, N + 1):
            I_n = v[0] * v[n - 2]
            for p in range(2, n):
                I_n = I_n + v[p - 1] * v[n - p - 1]
            if n == 2:
                I_n = I_n + _Poly.series(-Q0c, nv)
            scale = I_n.max_abs()
            thr = rel_zero * scale
            means = I_n.means()
            significant = {m: c for m, c in means.items() if abs(c) > thr}
            free = sorted({i + 1 for m in significant for i, e in enumerate(m) if e})
            entry = {"order": n, "means": means}
            if not free:
                if significant:
                    raise DegenerateDriveError(f"M(I_{n}) is nonzero and has no free constant to absorb it")
            elif len(free) == 1:
                k = free[0]
                coeffs: dict[int, complex] = {}
                for m, c in means.items():
                    if any(e for i, e in enumerate(m) if i != k - 1):
                        continue
                    d = m[k - 1]
                    if d and m not in significant:
                        continue
                    coeffs[d] = coeffs.get(d, 0j) + c
                value, lead = _solve_single(coeffs, k)
                fixed[k] = value
                entry.update({"kappa_index": k, "value": value, "coefficients": coeffs, "lead": lead})
                v = [p.substitute(k, value) for p in v]
                I_n = I_n.substitute(k, value)
                integrands = [p.substitute(k, value) for p in integrands]
            else:
                raise DegenerateDriveError(f"M(I_{n}) couples several free constants {free}")
            residual = max((abs(c) for c in I_n.means().values()), default=0.0)
            if residual > max(thr, 1e-14):
                raise DegenerateDriveError(f"M(I_{n}) could not be cancelled (residual {residual:.3e})")
            log.append(entry)
            integrands.append(I_n)
            prim = I_n.integrate().times_series(q).scale(1j)
            v.append(prim + _Poly.series(q, nv, _Poly.unit(n, nv)))
        determined = 0
        while determined + 1 in fixed:
            determined += 1
        kappa = [fixed[k] for k in range(1, determined + 1)]
        v_out = [p.evaluate_zero() for p in v]
        I_out = [p.evaluate_zero() for p in integrands]
        cond = report.condition
        upto = determined if cond is Condition.I else max(N - 1, 0)
        omega = [complex(f.F0)] + [mean(q * v_out[n - 1]) for n in range(1, upto + 1)]
    pf = PhaseFunctions(q, Q0, renorm2(Q0, Q0c), renorm2(Q0, Q0), renorm2(Q0, renorm2(Q0, Q0c)))
    return Expansion(f, N, cond, pf, v_out, kappa, I_out, omega, budget,
                     {"report": report, "solve_log": log, "fixed": fixed})


def _q_only(f: Interaction) -> FourierSeries:
    from .interaction import build_q

    return build_q(f)


# -- coefficient-level recursion ------------------------------------------

def fourier_recursion(q: FourierSeries, kappa: list, N: int, anchored: bool = True) -> list:
    """Coefficient arrays of v_1..v_N by direct convolution sums.

    With ``anchored=False`` every primitive is the zero-mean one, so the
    constants play the role of the zero-mean convention; with
    ``anchored=True`` the primitive vanishes at ``t = 0`` and ``kappa_n``
    equals ``v_n(0)``.  Returns dicts ``{m: V_m}``.
    """
    w = q.base_freq
    Qm = q.coeffs
    Q0 = {}
    for a, ca in Qm.items():
        for b, cb in Qm.items():
            Q0[a + b] = Q0.get(a + b, 0j) + ca * cb
    k = list(kappa) + [0j] * (N - len(kappa))

    def times_q_primitive(I: dict, kn: complex) -> dict:
        prim = {s: c / (s * w) for s, c in I.items() if s != 0}  # i * I_s / (i s w)
        shift = sum(prim.values()) if anchored else 0j
        out: dict = {}
        for s, c in prim.items():
            for m_q, cq in Qm.items():
                out[m_q + s] = out.get(m_q + s, 0j) + cq * c
        for m_q, cq in Qm.items():
            out[m_q] = out.get(m_q, 0j) + (kn - shift) * cq
        return out

    V = [{m: k[0] * c for m, c in Qm.items()}]
    for n in range(2, N + 1):
        I: dict = {}
        for p in range(1, n):
            for a, ca in V[p - 1].items():
                for b, cb in V[n - p - 1].items():
                    I[a + b] = I.get(a + b, 0j) + ca * cb
        if n == 2:
            for a, ca in Q0.items():
                I[-a] = I.get(-a, 0j) - np.conj(ca)
        V.append(times_q_primitive(_prune(I), k[n - 1]))
    return V


def _prune(d: dict, rel: float = 1e-18) -> dict:
    peak = max((abs(c) for c in d.values()), default=0.0)
    return {m: c for m, c in d.items() if abs(c) > rel * peak}


# -- g and Omega ---------------------------------------------------------

def radius_estimate(exp: Expansion) -> float:
    """Ratio-test estimate of the convergence radius in epsilon."""
    norms = [exp.v_n(n).norm() for n in range(1, exp.g_order + 1)]
    ratios = [norms[i + 1] / norms[i] for i in range(len(norms) - 1) if norms[i] > 0]
    if not ratios:
        return math.inf
    worst = max(ratios[-2:])
    return math.inf if worst == 0 else 1.0 / worst


def assemble_g(exp: Expansion, eps: float, order: int | None = None) -> FourierSeries:
    """``g = q sum_{n<=order} eps^n v_n`` over fully determined orders."""
    K = exp.g_order if order is None else order
    if K > exp.g_order:
        raise ValueError(f"only {exp.g_order} orders are fully determined")
    radius = radius_estimate(exp)
    if abs(eps) > radius:
        warnings.warn(f"epsilon={eps} exceeds the estimated radius {radius:.3g}", RadiusWarning, stacklevel=2)
    acc = FourierSeries.zero(exp.base_freq)
    with index_budget(exp.budget):
        for n in range(K, 0, -1):
            acc = (acc + exp.v_n(n)) * eps
        return exp.q * acc


def omega_series(exp: Expansion) -> list:
    """``[F0, M(q v_1), M(q v_2), ...]`` for every coefficient that is fixed."""
    return list(exp.omega_coeffs)


def omega_value(exp: Expansion, eps: float, order: int | None = None) -> complex:
    K = exp.g_order if order is None else order
    coeffs = exp.omega_coeffs
    return coeffs[0] + sum(coeffs[n] * eps ** n for n in range(1, min(K, len(coeffs) - 1) + 1))


def riccati_residual(f: Interaction, g: FourierSeries, eps: float) -> FourierSeries:
    """Series of ``g' - i g^2 - 2 i f g + i eps^2``."""
    fs = f.series(g.base_freq)
    return g.derivative() - 1j * (g * g) - 2j * (fs * g) + 1j * eps ** 2
