"""
Time grids for variable-step two-step BDF and their step-ratio sequences.

A grid is a partition ``0 = t_0 < t_1 < ... < t_n = T``; its step ratios are
``r_i = (t_i - t_{i-1}) / (t_{i-1} - t_{i-2})`` for ``i = 2, ..., n``.  The
matrices built in :mod:`vartoeplitz.matrix` depend on the grid only through
these ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, ClassVar

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "TimeGrid",
    "GridMap",
    "GridSpec",
    "SplitMix64",
    "uniform_grid",
    "mapped_grid",
    "random_ratio_grid",
    "ratios_of",
    "grid_from_ratios",
    "power_ratio_exact",
]

_FD_STEP = 1e-6


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing time points ``t_0 = 0 < ... < t_n = T``."""

    points: np.ndarray

    def __post_init__(self):
        t = np.array(self.points, dtype=float)
        if t.ndim != 1 or t.size < 3:
            raise ValueError("a time grid needs at least 3 points (n >= 2)")
        if t[0] != 0.0:
            raise ValueError(f"grid must start at 0, got t_0={t[0]!r}")
        if not np.all(np.isfinite(t)):
            raise ValueError("grid points must be finite")
        if np.any(np.diff(t) <= 0):
            i = int(np.argmin(np.diff(t)))
            raise ValueError(f"grid points not strictly increasing at index {i + 1}")
        t.setflags(write=False)
        object.__setattr__(self, "points", t)

    @property
    def n(self) -> int:
        return self.points.size - 1

    @property
    def T(self) -> float:
        return float(self.points[-1])

    @property
    def steps(self) -> np.ndarray:
        """Step sizes ``k_i = t_i - t_{i-1}``, ``i = 1..n``."""
        return np.diff(self.points)

    def __len__(self):
        return self.points.size


class GridMap:
    """
    Monotone map of ``[0, 1]`` onto ``[0, 1]`` generating ``t_i = T * map(i/n)``.

    Use the constructors :meth:`identity`, :meth:`power`,
    :meth:`affine_quadratic` and :meth:`table`.  The first three carry
    closed-form first and second derivatives; table maps differentiate by
    central finite differences.
    """

    def __init__(self, kind: str, func: Callable, d1: Callable | None = None,
                 d2: Callable | None = None, p: float | None = None):
        self.kind = kind
        self.p = p
        self._func = func
        self._d1 = d1
        self._d2 = d2

    def __repr__(self):
        if self.kind == "power":
            return f"GridMap.power({self.p!r})"
        return f"GridMap.{self.kind}()"

    @classmethod
    def identity(cls) -> "GridMap":
        return cls("identity", lambda x: np.asarray(x, dtype=float) * 1.0,
                   lambda x: np.ones_like(np.asarray(x, dtype=float)),
                   lambda x: np.zeros_like(np.asarray(x, dtype=float)))

    @classmethod
    def power(cls, p: float) -> "GridMap":
        if p <= 0:
            raise ValueError("power map needs p > 0")
        p = float(p)
        return cls("power",
                   lambda x: np.asarray(x, dtype=float) ** p,
                   lambda x: p * np.asarray(x, dtype=float) ** (p - 1.0),
                   lambda x: p * (p - 1.0) * np.asarray(x, dtype=float) ** (p - 2.0),
                   p=p)

    @classmethod
    def affine_quadratic(cls) -> "GridMap":
        """The map ``(x + x**2) / 2``; smooth with derivative bounded below by 1/2."""
        return cls("affine_quadratic",
                   lambda x: 0.5 * (np.asarray(x, dtype=float) + np.asarray(x, dtype=float) ** 2),
                   lambda x: 0.5 + np.asarray(x, dtype=float),
                   lambda x: np.ones_like(np.asarray(x, dtype=float)))

    @classmethod
    def table(cls, x, y) -> "GridMap":
        """Monotone piecewise-cubic interpolant through samples ``(x, y)``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.size < 2:
            raise ValueError("table map needs matching x, y arrays with >= 2 samples")
        if x[0] != 0.0 or x[-1] != 1.0 or y[0] != 0.0 or y[-1] != 1.0:
            raise ValueError("table map must run from (0, 0) to (1, 1)")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(y) <= 0):
            raise ValueError("table map samples must be strictly increasing")
        interp = PchipInterpolator(x, y, extrapolate=True)
        gm = cls("table", lambda s: interp(np.asarray(s, dtype=float)))
        gm.samples = (x, y)
        return gm

    @property
    def has_closed_form_derivatives(self) -> bool:
        return self._d1 is not None

    def __call__(self, x):
        return self._func(x)

    def derivative(self, x, order: int = 1):
        """First or second derivative of the map at ``x``."""
        if order not in (1, 2):
            raise ValueError("only first and second derivatives are available")
        x = np.asarray(x, dtype=float)
        if self.has_closed_form_derivatives:
            return (self._d1 if order == 1 else self._d2)(x)
        h = _FD_STEP
        f = self._func
        if order == 1:
            return (f(x + h) - f(x - h)) / (2 * h)
        return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)

    @classmethod
    def from_name(cls, name: str) -> "GridMap":
        """Parse ``identity``, ``affine-quadratic``, ``power2``, ``power:2.5`` ..."""
        key = name.strip().lower().replace("-", "_")
        if key in ("identity", "uniform", "id"):
            return cls.identity()
        if key in ("affine_quadratic", "quadratic_affine"):
            return cls.affine_quadratic()
        if key.startswith("power"):
            rest = key[5:].lstrip(":=_")
            if not rest:
                raise ValueError("power map needs an exponent, e.g. power2")
            return cls.power(float(rest))
        raise ValueError(f"unknown grid map {name!r}")


def uniform_grid(n: int, T: float = 1.0) -> TimeGrid:
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T!r}")
    n = int(n)
    t = np.arange(n + 1) * (T / n)
    t[-1] = T
    return TimeGrid(t)


def mapped_grid(gmap: GridMap, n: int, T: float = 1.0) -> TimeGrid:
    """Grid ``t_i = T * gmap(i/n)``."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T!r}")
    n = int(n)
    t = T * np.asarray(gmap(np.arange(n + 1) / n), dtype=float)
    t[0], t[-1] = 0.0, T
    if np.any(np.diff(t) <= 0):
        raise ValueError(f"{gmap!r} does not produce strictly increasing points for n={n}")
    return TimeGrid(t)


class SplitMix64:
    """The splitmix64 generator (Steele, Lea & Flood), producing uniform doubles."""

    _MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = int(seed) & self._MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self._MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in ``[0, 1)`` from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float, size: int) -> np.ndarray:
        return np.array([lo + (hi - lo) * self.random() for _ in range(size)])


def random_ratio_grid(n: int, T: float, lo: float, hi: float, seed: int) -> TimeGrid:
    """
    Grid whose step ratios ``r_2, ..., r_n`` are i.i.d. uniform on ``[lo, hi]``.

    Ratios come from a splitmix64 stream seeded with ``seed``; the first step
    is then fixed by ``t_n = T``.  Identical arguments give identical grids.
    """
    if not lo > 0:
        raise ValueError(f"lo must be positive, got {lo!r}")
    if hi < lo:
        raise ValueError(f"need lo <= hi, got lo={lo!r}, hi={hi!r}")
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    ratios = SplitMix64(seed).uniform(lo, hi, int(n) - 1)
    return grid_from_ratios(ratios, T)


def power_ratio_exact(p: int, i: int) -> Fraction:
    """
    ``r_i`` of the grid ``t_j = T (j/n)^p`` in exact arithmetic.

    It does not depend on ``n`` or ``T``: ``(i^p - (i-1)^p) / ((i-1)^p - (i-2)^p)``.
    """
    if int(p) != p or p < 1:
        raise ValueError("exact ratios need an integer exponent p >= 1")
    if i < 2:
        raise ValueError("ratios start at i = 2")
    p, i = int(p), int(i)
    return Fraction(i**p - (i - 1)**p, (i - 1)**p - (i - 2)**p)


def ratios_of(grid: TimeGrid) -> np.ndarray:
    """Step ratios ``r_i``, ``i = 2..n``, as an array of length ``n - 1``."""
    k = grid.steps
    return k[1:] / k[:-1]


def grid_from_ratios(ratios, T: float = 1.0) -> TimeGrid:
    """
    Rebuild the grid with the given step ratios and ``t_n = T``.

    Steps are accumulated in log space so that long sequences of large or small
    ratios neither overflow nor underflow before normalisation.
    """
    r = np.asarray(ratios, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("need a non-empty 1-d ratio sequence")
    if np.any(~(r > 0)) or not np.all(np.isfinite(r)):
        raise ValueError("all ratios must be positive and finite")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T!r}")
    logk = np.concatenate(([0.0], np.cumsum(np.log(r))))
    k = np.exp(logk - logk.max())
    t = np.concatenate(([0.0], np.cumsum(k)))
    t *= T / t[-1]
    t[-1] = T
    return TimeGrid(t)


@dataclass
class GridSpec:
    """
    Serializable grid description.

    ``kind`` is one of ``uniform``, ``power``, ``affine-quadratic`` or
    ``random``; ``p`` applies to ``power``, ``lo``/``hi``/``seed`` to ``random``.
    """

    kind: str = "uniform"
    n: int = 64
    T: float = 1.0
    p: float | None = None
    lo: float | None = None
    hi: float | None = None
    seed: int | None = None
    _KEYS: ClassVar[tuple] = ("kind", "n", "T", "p", "lo", "hi", "seed")

    def build(self, n: int | None = None) -> TimeGrid:
        n = self.n if n is None else n
        kind = self.kind.lower().replace("_", "-")
        if kind == "uniform":
            return uniform_grid(n, self.T)
        if kind == "power":
            if self.p is None:
                raise ValueError("power grid needs p")
            return mapped_grid(GridMap.power(self.p), n, self.T)
        if kind == "affine-quadratic":
            return mapped_grid(GridMap.affine_quadratic(), n, self.T)
        if kind == "random":
            if self.lo is None or self.hi is None or self.seed is None:
                raise ValueError("random grid needs lo, hi and seed")
            return random_ratio_grid(n, self.T, self.lo, self.hi, self.seed)
        raise ValueError(f"unknown grid kind {self.kind!r}")

    def to_config(self) -> dict:
        return {k: getattr(self, k) for k in self._KEYS if getattr(self, k) is not None}

    @classmethod
    def from_config(cls, cfg: dict) -> "GridSpec":
        unknown = set(cfg) - set(cls._KEYS)
        if unknown:
            raise ValueError(f"unknown grid keys: {sorted(unknown)}")
        conv = {"kind": str, "n": int, "T": float, "p": float, "lo": float,
                "hi": float, "seed": int}
        return cls(**{k: conv[k](v) for k, v in cfg.items()})
