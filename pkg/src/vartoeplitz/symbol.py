"""
GLT symbols of the variable two-step BDF matrix-sequences.

For ratio function ``phi`` (rescaled to ``[0, 1]``) the lower-triangular
sequence has symbol

    kappa(x, theta) = (1 - delta*sqrt(phi(x))*e^{i theta} - eta*phi(x)*e^{2i theta}) / (1 + phi(x))

and its symmetric part has symbol ``Re kappa``.  With constant ``phi = r`` the
real part is a quadratic in ``z = cos(theta)``, which is what the extrema and
negative-measure routines exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import GridMap

__all__ = [
    "DELTA",
    "ETA",
    "SymbolParams",
    "Phi",
    "Quadratic",
    "Extrema",
    "eval_kappa",
    "eval_re_kappa",
    "stationary_quadratic",
    "cos_quadratic",
    "extrema_on_interval",
    "negative_level_measure",
    "momentary_correction",
    "momentary_symbol",
    "sample_symbol",
    "fourier_coefficients",
]

# Smoothing parameters of the variable two-step BDF energy analysis.
DELTA = 0.9672
ETA = -0.1793

FOURIER_NODES = 2 ** 14


@dataclass(frozen=True)
class SymbolParams:
    delta: float = DELTA
    eta: float = ETA

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.eta)):
            raise ValueError("delta and eta must be finite")


class Phi:
    """
    Nonnegative ratio function on ``[0, 1]`` (the rescaled ``phi(T x)``).

    Build with :meth:`constant`, :meth:`from_callable`, :meth:`table` or
    :meth:`builtin`.
    """

    def __init__(self, func: Callable, name: str = "phi", value: float | None = None):
        self._func = func
        self.name = name
        self.value = value

    def __repr__(self):
        return f"Phi({self.name})"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self._func(x), dtype=float) + np.zeros(x.shape)

    @property
    def is_constant(self) -> bool:
        return self.value is not None

    @classmethod
    def constant(cls, r: float) -> "Phi":
        if r < 0:
            raise ValueError(f"constant ratio must be nonnegative, got {r!r}")
        r = float(r)
        return cls(lambda x: np.full(np.shape(x), r), name=f"constant({r:g})", value=r)

    @classmethod
    def from_callable(cls, f: Callable, T: float = 1.0, name: str = "callable") -> "Phi":
        """Wrap ``f`` defined on ``[0, T]`` as ``x -> f(T x)``."""
        return cls(lambda x: f(T * x), name=name)

    @classmethod
    def table(cls, x, y) -> "Phi":
        """Piecewise-linear ratio function through the samples ``(x, y)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("tabulated ratio function must be nonnegative")
        if np.any(np.diff(x) <= 0):
            raise ValueError("table abscissae must be strictly increasing")
        return cls(lambda s: np.interp(s, x, y), name="table")

    @classmethod
    def builtin(cls, name: str, T: float = 1.0) -> "Phi":
        """Named ratio functions: ``one``, ``square`` (x^2), ``one_plus_cos2`` (1+cos 2x)."""
        key = name.strip().lower().replace("-", "_")
        if key in ("one", "1", "uniform"):
            return cls.constant(1.0)
        if key in ("square", "x2", "x^2"):
            return cls(lambda x: (T * x) ** 2, name="x^2")
        if key in ("one_plus_cos2", "1+cos2x", "1+cos(2x)"):
            return cls(lambda x: 1.0 + np.cos(2.0 * T * x), name="1+cos(2x)")
        try:
            return cls.constant(float(key))
        except ValueError:
            raise ValueError(f"unknown builtin ratio function {name!r}") from None


def _phi_values(phi, x):
    v = phi(x) if callable(phi) else np.full(np.shape(x), float(phi))
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise ValueError("ratio function is negative; sqrt(phi) is undefined")
    return v


def eval_kappa(params: SymbolParams, phi, x, theta):
    """
    Complex symbol ``kappa(x, theta)``; broadcasts over ``x`` and ``theta``.

    ``phi`` is a :class:`Phi`, any callable on ``[0, 1]``, or a number.
    """
    x, theta = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(theta, dtype=float))
    v = _phi_values(phi, x)
    out = (1.0 - params.delta * np.sqrt(v) * np.exp(1j * theta)
           - params.eta * v * np.exp(2j * theta)) / (1.0 + v)
    return out[()] if out.ndim == 0 else out


def eval_re_kappa(params: SymbolParams, phi, x, theta):
    """Real part of the symbol, evaluated through its cosine form."""
    x, theta = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(theta, dtype=float))
    v = _phi_values(phi, x)
    out = (1.0 - params.delta * np.sqrt(v) * np.cos(theta)
           - params.eta * v * np.cos(2.0 * theta)) / (1.0 + v)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Quadratic:
    """``a z^2 + b z + c``."""

    a: float
    b: float
    c: float

    def __call__(self, z):
        return (self.a * z + self.b) * z + self.c

    @property
    def is_linear(self) -> bool:
        return self.a == 0.0

    @property
    def vertex(self) -> float:
        if self.is_linear:
            raise ValueError("linear polynomial has no vertex")
        return -self.b / (2.0 * self.a)

    @property
    def vertex_value(self) -> float:
        if self.is_linear:
            raise ValueError("linear polynomial has no vertex")
        return self.c - self.b * self.b / (4.0 * self.a)

    def real_roots(self) -> list[float]:
        """Sorted real roots (empty for a constant polynomial)."""
        a, b, c = self.a, self.b, self.c
        if a == 0.0:
            return [] if b == 0.0 else [-c / b]
        disc = b * b - 4.0 * a * c
        if disc < 0:
            return []
        s = math.sqrt(disc)
        # cancellation-free pair
        q = -0.5 * (b + math.copysign(s, b)) if b != 0.0 else -0.5 * s
        if q == 0.0:
            return [0.0, 0.0]
        return sorted([q / a, c / q])


def stationary_quadratic(params: SymbolParams) -> Quadratic:
    """``P(z) = -eta z^2 - (delta/2) z + (eta+1)/2`` with ``P(cos theta) = Re kappa`` at ``r = 1``."""
    return Quadratic(-params.eta, -params.delta / 2.0, (params.eta + 1.0) / 2.0)


def cos_quadratic(params: SymbolParams, r: float) -> Quadratic:
    """Quadratic ``Q`` in ``z = cos theta`` with ``Q(cos theta) = Re kappa_r(theta)``."""
    if r < 0:
        raise ValueError(f"ratio must be nonnegative, got {r!r}")
    w = 1.0 / (1.0 + r)
    return Quadratic(-2.0 * params.eta * r * w,
                     -params.delta * math.sqrt(r) * w,
                     (1.0 + params.eta * r) * w)


@dataclass(frozen=True)
class Extrema:
    """Extrema of ``Re kappa_r`` on ``[-pi, pi]``; arguments reported in ``[0, pi]``."""

    min: float
    argmin: float
    max: float
    argmax: float


def extrema_on_interval(params: SymbolParams, r: float = 1.0) -> Extrema:
    """
    Exact extrema of the stationary symbol ``Re kappa_r`` over ``theta``.

    Compares the endpoint values ``z = +-1`` with the vertex when it falls in
    ``(-1, 1)``; ``Re kappa_r`` is even, so the mirrored ``-argmin`` is a
    minimiser as well.
    """
    q = cos_quadratic(params, r)
    cands = [1.0, -1.0]
    if not q.is_linear and -1.0 < q.vertex < 1.0:
        cands.append(q.vertex)
    vals = [q(z) for z in cands]
    imin = int(np.argmin(vals))
    imax = int(np.argmax(vals))
    return Extrema(vals[imin], math.acos(cands[imin]), vals[imax], math.acos(cands[imax]))


def negative_level_measure(params: SymbolParams, r: float) -> float:
    """
    Lebesgue measure of ``{theta in [0, pi] : Re kappa_r(theta) < 0}``.

    The sign changes of the quadratic in ``z`` inside ``[-1, 1]`` split the
    interval; ``theta = arccos z`` maps each negative piece to an arc.
    """
    q = cos_quadratic(params, r)
    cuts = [-1.0] + [z for z in q.real_roots() if -1.0 < z < 1.0] + [1.0]
    total = 0.0
    for z0, z1 in zip(cuts[:-1], cuts[1:]):
        if z1 <= z0:
            continue
        if q(0.5 * (z0 + z1)) < 0:
            total += math.acos(z0) - math.acos(z1)
    return total


def _log_derivative_ratio(gmap: GridMap, x):
    """``psi''/psi'`` with the domain checks of the momentary expansion."""
    if not gmap.has_closed_form_derivatives:
        raise ValueError(f"{gmap!r} has no closed-form derivatives; momentary symbol needs a smooth map")
    x = np.asarray(x, dtype=float)
    if gmap.kind == "power" and gmap.p != 1.0 and np.any(x == 0.0):
        raise ValueError("power map has a degenerate derivative at x = 0")
    d1 = np.asarray(gmap.derivative(x, 1), dtype=float)
    if np.any(~(d1 > 0)):
        raise ValueError("map derivative must be strictly positive")
    return np.asarray(gmap.derivative(x, 2), dtype=float) / d1


def momentary_correction(gmap: GridMap, params: SymbolParams, x, theta):
    """First-order correction ``l(x, theta) = -(psi''/psi')(x) [1/4 + (eta/4) e^{2i theta}]``."""
    x, theta = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(theta, dtype=float))
    g = _log_derivative_ratio(gmap, x)
    out = -g * (0.25 + 0.25 * params.eta * np.exp(2j * theta))
    return out[()] if out.ndim == 0 else out


def momentary_symbol(gmap: GridMap, params: SymbolParams, n: int, x, theta):
    """``kappa(theta) + l(x, theta) / n`` for the grid ``t_i = T psi(i/n)``."""
    return eval_kappa(params, 1.0, x, theta) + momentary_correction(gmap, params, x, theta) / n


def sample_symbol(params: SymbolParams, phi, grid_x: int, grid_theta: int,
                  part: str = "real") -> np.ndarray:
    """
    Sorted samples of the symbol on the tensor grid
    ``x_j = j/grid_x`` (j = 1..grid_x), ``theta_k = -pi + 2 pi k/grid_theta`` (k = 1..grid_theta).

    ``part="real"`` gives ``Re kappa`` (eigenvalue comparisons), ``part="modulus"``
    gives ``|kappa|`` (singular value comparisons).
    """
    if grid_x < 1 or grid_theta < 1:
        raise ValueError("grid sizes must be >= 1")
    x = np.arange(1, grid_x + 1) / grid_x
    theta = -np.pi + 2.0 * np.pi * np.arange(1, grid_theta + 1) / grid_theta
    X, TH = np.meshgrid(x, theta, indexing="ij")
    if part in ("real", "real-part", "re"):
        vals = eval_re_kappa(params, phi, X, TH)
    elif part in ("modulus", "complex-modulus", "abs"):
        vals = np.abs(eval_kappa(params, phi, X, TH))
    else:
        raise ValueError(f"unknown part {part!r}")
    return np.sort(np.ravel(vals))


def fourier_coefficients(f: Callable, k: int, nodes: int = FOURIER_NODES) -> np.ndarray:
    """
    Fourier coefficients ``a_{-k}, ..., a_k`` of a ``2 pi``-periodic ``f``.

    Trapezoid rule on ``nodes`` equispaced points, exact for trigonometric
    polynomials of degree below ``nodes / 2``.
    """
    if k < 0 or 2 * k >= nodes:
        raise ValueError("need 0 <= k < nodes/2")
    theta = -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes
    vals = np.asarray(f(theta), dtype=complex) * np.ones(nodes)
    ks = np.arange(-k, k + 1)
    # FFT phase is relative to theta_0 = -pi: a_m = (-1)^m * fft_m / N
    spec = np.fft.fft(vals) / nodes
    coeffs = spec[ks % nodes] * np.where(ks % 2 == 0, 1.0, -1.0)
    return coeffs
