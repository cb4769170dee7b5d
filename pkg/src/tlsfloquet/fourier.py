"""Truncated Fourier series on a single frequency lattice.

A :class:`FourierSeries` represents ``sum_m C_m exp(i m w t)`` for integer
``|m| <= M``.  Besides the ring operations the module provides the mean
value, the primitive anchored at ``t = 0`` and the bracket / renormalised
bracket calculus used to build secular-free perturbative solutions.
"""

from __future__ import annotations

import contextlib
import contextvars
import json
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import FrequencyMismatchError, SecularTermError

DEFAULT_BUDGET = 64
TAIL_THRESHOLD = 1e-16
ZERO_MEAN_RTOL = 1e-12

_budget = contextvars.ContextVar("index_budget", default=DEFAULT_BUDGET)


@contextlib.contextmanager
def index_budget(m: int):
    """Temporarily change the largest index kept after a product."""
    if m < 0:
        raise ValueError("index budget must be non-negative")
    token = _budget.set(int(m))
    try:
        yield
    finally:
        _budget.reset(token)


def current_budget() -> int:
    return _budget.get()


class FourierSeries:
    """Truncated complex Fourier series ``sum_m C_m e^{i m base_freq t}``.

    Coefficients are held in a dense symmetric array ``data`` of length
    ``2*truncation + 1`` so that ``data[m + truncation] == C_m``.  Instances
    are treated as immutable.

    Parameters
    ----------
    base_freq : float
        Lattice spacing of the frequencies, in rad per unit time.
    data : array_like
        Complex coefficients ordered from ``-M`` to ``M``; must have odd
        length.
    """

    __slots__ = ("base_freq", "data")

    def __init__(self, base_freq: float, data):
        base_freq = float(base_freq)
        if not base_freq > 0.0:
            raise ValueError("base_freq must be positive")
        arr = np.asarray(data, dtype=complex)
        if arr.ndim != 1 or arr.size % 2 != 1:
            raise ValueError("coefficient array must be 1-D with odd length")
        arr = arr.copy()
        arr.setflags(write=False)
        self.base_freq = base_freq
        self.data = arr

    # -- constructors -------------------------------------------------
    @classmethod
    def from_coeffs(cls, base_freq: float, coeffs: Mapping[int, complex]) -> "FourierSeries":
        if not coeffs:
            return cls.zero(base_freq)
        M = max(abs(int(m)) for m in coeffs)
        arr = np.zeros(2 * M + 1, dtype=complex)
        for m, c in coeffs.items():
            arr[int(m) + M] += complex(c)
        return cls(base_freq, arr)

    @classmethod
    def zero(cls, base_freq: float) -> "FourierSeries":
        return cls(base_freq, np.zeros(1, dtype=complex))

    @classmethod
    def constant(cls, base_freq: float, value: complex) -> "FourierSeries":
        return cls(base_freq, np.array([complex(value)]))

    @classmethod
    def exponential(cls, base_freq: float, m: int, amplitude: complex = 1.0) -> "FourierSeries":
        """The single harmonic ``amplitude * exp(i m base_freq t)``."""
        return cls.from_coeffs(base_freq, {m: amplitude})

    # -- basic accessors ------------------------------------------------
    @property
    def truncation(self) -> int:
        return (self.data.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        M = self.truncation
        return np.arange(-M, M + 1)

    @property
    def coeffs(self) -> dict[int, complex]:
        """Sparse view: the nonzero coefficients keyed by index."""
        M = self.truncation
        return {int(k) - M: complex(c) for k, c in enumerate(self.data) if c != 0}

    def __getitem__(self, m: int) -> complex:
        M = self.truncation
        if abs(m) > M:
            return 0j
        return complex(self.data[m + M])

    def padded(self, M: int) -> np.ndarray:
        """Coefficient array re-expressed with truncation ``M`` (zero pad or cut)."""
        cur = self.truncation
        if M >= cur:
            out = np.zeros(2 * M + 1, dtype=complex)
            out[M - cur:M + cur + 1] = self.data
            return out
        return self.data[cur - M:cur + M + 1].copy()

    def norm(self) -> float:
        """Sum of coefficient moduli, an upper bound for the sup norm."""
        return float(np.abs(self.data).sum())

    def max_abs(self) -> float:
        return float(np.abs(self.data).max())

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.base_freq

    # -- evaluation -----------------------------------------------------
    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        tau = np.mod(t_arr, self.period)
        phase = np.multiply.outer(tau, self.indices * self.base_freq)
        out = np.exp(1j * phase) @ self.data
        return complex(out) if t_arr.ndim == 0 else out

    # -- algebra --------------------------------------------------------
    def _check(self, other: "FourierSeries") -> None:
        if not math.isclose(self.base_freq, other.base_freq, rel_tol=1e-14, abs_tol=0.0):
            raise FrequencyMismatchError(
                f"base frequencies differ: {self.base_freq!r} vs {other.base_freq!r}"
            )

    def _coerce(self, other) -> "FourierSeries":
        if isinstance(other, FourierSeries):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return FourierSeries.constant(self.base_freq, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        M = max(self.truncation, other.truncation)
        return FourierSeries(self.base_freq, self.padded(M) + other.padded(M))

    __radd__ = __add__

    def __neg__(self):
        return FourierSeries(self.base_freq, -self.data)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return FourierSeries(self.base_freq, self.data * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return FourierSeries(self.base_freq, self.data / complex(other))
        return NotImplemented

    def conj(self) -> "FourierSeries":
        """Series of the complex conjugate function: ``C'_m = conj(C_{-m})``."""
        return FourierSeries(self.base_freq, np.conj(self.data[::-1]))

    def derivative(self) -> "FourierSeries":
        return FourierSeries(self.base_freq, 1j * self.base_freq * self.indices * self.data)

    def shifted_mean(self, value: complex) -> "FourierSeries":
        """Copy with the constant coefficient replaced by ``value``."""
        arr = self.data.copy()
        arr[self.truncation] = value
        return FourierSeries(self.base_freq, arr)

    def trimmed(self, budget: int | None = None, threshold: float = TAIL_THRESHOLD) -> "FourierSeries":
        """Cut to ``|m| <= budget`` and drop negligible outer coefficients."""
        if budget is None:
            budget = current_budget()
        arr = self.padded(min(budget, self.truncation))
        mags = np.abs(arr)
        peak = mags.max() if mags.size else 0.0
        M = (arr.size - 1) // 2
        if peak == 0.0:
            return FourierSeries.zero(self.base_freq)
        keep = mags >= threshold * peak
        # symmetric cut at the outermost significant index
        idx = np.nonzero(keep)[0]
        reach = int(max(abs(idx[0] - M), abs(idx[-1] - M)))
        return FourierSeries(self.base_freq, arr[M - reach:M + reach + 1])

    def is_real(self, tol: float = 1e-14) -> bool:
        """True if the series represents a real-valued function."""
        return bool(np.all(np.abs(self.data - np.conj(self.data[::-1])) <= tol * max(1.0, self.max_abs())))

    def allclose(self, other: "FourierSeries", atol: float = 1e-12) -> bool:
        self._check(other)
        M = max(self.truncation, other.truncation)
        return bool(np.all(np.abs(self.padded(M) - other.padded(M)) <= atol))

    def distance(self, other: "FourierSeries") -> float:
        """Largest coefficient difference."""
        self._check(other)
        M = max(self.truncation, other.truncation)
        return float(np.abs(self.padded(M) - other.padded(M)).max())

    def __repr__(self) -> str:
        return f"FourierSeries(base_freq={self.base_freq!r}, truncation={self.truncation})"

    # -- serialisation ---------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "base_freq": self.base_freq,
            "coeffs": [[m, c.real, c.imag] for m, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "FourierSeries":
        coeffs = {int(m): complex(re, im) for m, re, im in obj["coeffs"]}
        return cls.from_coeffs(float(obj["base_freq"]), coeffs)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FourierSeries":
        return cls.from_dict(json.loads(text))


def multiply(a: FourierSeries, b: FourierSeries, budget: int | None = None) -> FourierSeries:
    """Cauchy product of two series, re-truncated to the index budget."""
    a._check(b)
    prod = FourierSeries(a.base_freq, np.convolve(a.data, b.data))
    return prod.trimmed(budget)


def mean(a: FourierSeries) -> complex:
    """Time average, i.e. the constant coefficient."""
    return a[0]


def integrate_from_zero(a: FourierSeries, rtol: float = ZERO_MEAN_RTOL) -> FourierSeries:
    """Primitive ``F(t) = int_0^t a`` of a zero-mean series.

    Raises
    ------
    SecularTermError
        If the mean of ``a`` exceeds ``rtol`` times its largest coefficient,
        since the primitive would then grow linearly in ``t``.
    """
    c0 = mean(a)
    scale = a.max_abs()
    if abs(c0) > rtol * scale and abs(c0) > 0.0:
        raise SecularTermError(f"mean {c0!r} is not zero (scale {scale:.3e})")
    m = a.indices
    out = np.zeros_like(a.data)
    nz = m != 0
    out[nz] = a.data[nz] / (1j * m[nz] * a.base_freq)
    out[a.truncation] = -out[nz].sum()
    return FourierSeries(a.base_freq, out)


def remove_mean(a: FourierSeries) -> FourierSeries:
    return a.shifted_mean(0.0)


def bracket(b: FourierSeries, c: FourierSeries) -> FourierSeries:
    """``(b|c)_t = b(t) int_0^t c`` for a zero-mean ``c``."""
    b._check(c)
    return multiply(b, integrate_from_zero(c))


def renorm2(b: FourierSeries, c: FourierSeries) -> FourierSeries:
    """Renormalised bracket: the mean of ``c`` is removed before integrating."""
    b._check(c)
    return multiply(b, integrate_from_zero(remove_mean(c)))


def renorm_n(series_list: Sequence[FourierSeries]) -> FourierSeries:
    """Iterated renormalised bracket ``R_n(a_1|...|a_n)``, folded from the right."""
    items = list(series_list)
    if not items:
        raise ValueError("renorm_n needs at least one series")
    acc = items[-1]
    for s in reversed(items[:-1]):
        acc = renorm2(s, acc)
    return acc


def linear_combination(terms: Iterable[tuple[complex, FourierSeries]], base_freq: float) -> FourierSeries:
    """``sum_k c_k s_k`` over (coefficient, series) pairs."""
    acc = FourierSeries.zero(base_freq)
    for c, s in terms:
        acc = acc + s * c
    return acc
