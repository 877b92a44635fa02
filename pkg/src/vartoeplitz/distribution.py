"""
Empirical checks of eigenvalue and singular value distributions.

Distribution claims are tested by rearrangement: sorted eigenvalues (or
singular values) are compared with the sorted samples of the symbol on a
uniform tensor grid, resampled to the same number of quantiles.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigsolve import fit_convergence_order, jacobi_eigenvalues, singular_values
from .matrix import build_L, symmetrize
from .symbol import SymbolParams, extrema_on_interval, negative_level_measure, sample_symbol

__all__ = [
    "DistributionReport",
    "CountRecord",
    "ExtremeStudy",
    "quantile_distance",
    "resample_quantiles",
    "ratios_from_phi",
    "eigen_distribution_test",
    "singular_distribution_test",
    "negative_count_law",
    "extreme_convergence_study",
]

OVERSAMPLE = 4  # per axis, so 16 n^2 >= 16 n symbol samples


@dataclass
class DistributionReport:
    n: int
    dim: int
    l1: float
    sup: float
    passed: bool = True
    symbol: str = ""
    part: str = ""
    lambda_min: float | None = None
    lambda_max: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def resample_quantiles(values, m: int) -> np.ndarray:
    """Linear interpolation of the empirical quantile function at ``(k + 1/2)/m``."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0 or m < 1:
        raise ValueError("need a non-empty sample and m >= 1")
    if v.size == m:
        return v
    src = (np.arange(v.size) + 0.5) / v.size
    dst = (np.arange(m) + 0.5) / m
    return np.interp(dst, src, v)


def quantile_distance(a, b) -> tuple[float, float]:
    """
    Mean and max absolute difference between two sorted samples.

    ``b`` is resampled to the length of ``a`` when the lengths differ.
    """
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    if b.size != a.size:
        b = resample_quantiles(b, a.size)
    diff = np.abs(a - b)
    return float(diff.mean()), float(diff.max())


def ratios_from_phi(phi, n: int) -> np.ndarray:
    """``r_i = phi(i/n)`` for ``i = 2..n`` (``phi`` already rescaled to ``[0, 1]``)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    r = np.asarray(phi(np.arange(2, n + 1) / n), dtype=float) * np.ones(n - 1)
    if np.any(~(r > 0)):
        raise ValueError("ratio function must be positive at the grid points")
    return r


def _mark_monotone(reports, slack):
    for prev, cur in zip(reports[:-1], reports[1:]):
        cur.passed = cur.l1 <= (1.0 + slack) * prev.l1 + 1e-14
    return reports


def _phi_label(phi):
    return getattr(phi, "name", repr(phi))


def eigen_distribution_test(phi, params: SymbolParams, ns, slack: float = 0.1,
                            oversample: int = OVERSAMPLE) -> list[DistributionReport]:
    """
    Eigenvalues of ``S_n`` against sorted ``Re kappa`` samples, one report per ``n``.

    ``passed`` on each report after the first means its ``l1`` is no more than
    ``(1 + slack)`` times the previous one.
    """
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns[:-1], ns[1:])):
        raise ValueError("ns must be increasing")
    out = []
    for n in ns:
        r = ratios_from_phi(phi, n)
        ev = jacobi_eigenvalues(symmetrize(build_L(r, params))).values
        sym = sample_symbol(params, phi, oversample * n, oversample * n, "real")
        l1, sup = quantile_distance(ev, sym)
        out.append(DistributionReport(n, n - 1, l1, sup, True, _phi_label(phi), "real",
                                      float(ev[0]), float(ev[-1])))
    return _mark_monotone(out, slack)


def singular_distribution_test(phi, params: SymbolParams, ns, slack: float = 0.1,
                               oversample: int = OVERSAMPLE) -> list[DistributionReport]:
    """Singular values of ``L_n`` against sorted ``|kappa|`` samples."""
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns[:-1], ns[1:])):
        raise ValueError("ns must be increasing")
    out = []
    for n in ns:
        r = ratios_from_phi(phi, n)
        sv = singular_values(build_L(r, params)).values
        sym = sample_symbol(params, phi, oversample * n, oversample * n, "modulus")
        l1, sup = quantile_distance(sv, sym)
        out.append(DistributionReport(n, n - 1, l1, sup, True, _phi_label(phi), "modulus",
                                      float(sv[0]), float(sv[-1])))
    return _mark_monotone(out, slack)


@dataclass
class CountRecord:
    n: int
    count: int
    predicted: float
    gap: float
    lambda_min: float
    lambda_max: float

    def to_dict(self) -> dict:
        return asdict(self)


def negative_count_law(r: float, params: SymbolParams, ns) -> tuple[list[CountRecord], float]:
    """
    Count negative eigenvalues of the constant-ratio ``S_n(r)`` against ``n mu / pi``.

    Returns the per-``n`` records and the measure ``mu`` of the negative set of
    ``Re kappa_r`` on ``[0, pi]``.
    """
    mu = negative_level_measure(params, r)
    recs = []
    for n in ns:
        n = int(n)
        ev = jacobi_eigenvalues(symmetrize(build_L(np.full(n - 1, float(r)), params))).values
        count = int(np.count_nonzero(ev < 0))
        pred = n * mu / math.pi
        recs.append(CountRecord(n, count, pred, abs(count - pred), float(ev[0]), float(ev[-1])))
    return recs, mu


@dataclass
class ExtremeStudy:
    ns: list
    lambda_min: list
    lambda_max: list
    m: float
    M: float
    order_min: float
    order_max: float
    records: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def extreme_convergence_study(params: SymbolParams, ns) -> ExtremeStudy:
    """
    Rates at which the extreme eigenvalues of the equispaced ``S_n`` reach the
    symbol's minimum ``m`` and maximum ``M``.
    """
    ns = [int(n) for n in ns]
    ext = extrema_on_interval(params, 1.0)
    lmin, lmax = [], []
    for n in ns:
        ev = jacobi_eigenvalues(symmetrize(build_L(np.ones(n - 1), params))).values
        lmin.append(float(ev[0]))
        lmax.append(float(ev[-1]))
    order_min = fit_convergence_order(ns, np.array(lmin) - ext.min)
    order_max = fit_convergence_order(ns, ext.max - np.array(lmax))
    recs = [{"n": n, "lambda_min": a, "lambda_max": b} for n, a, b in zip(ns, lmin, lmax)]
    return ExtremeStudy(ns, lmin, lmax, ext.min, ext.max, order_min, order_max, recs)
