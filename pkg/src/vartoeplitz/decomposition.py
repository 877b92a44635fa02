"""
Rank-at-most-2 positive semidefinite block splitting of ``2 S``.

For a ratio sequence of length ``N`` (matrix dimension ``N``) write

    2 S = sum_{i<N-1} A_i + sum_{i<N-2} B_i

where ``A_i`` is a 2x2 block on rows ``(i, i+1)`` carrying the first
off-diagonal, and ``B_i`` a 3x3 block on rows ``(i, i+1, i+2)`` with zero
middle row/column carrying the second off-diagonal.  Indices below are
0-based; with ``w_k = 1/(1 + r_k)`` where ``r_k`` is the ratio of row ``k``:

    A_i = [[a_i w_i,                -delta sqrt(r_{i+1}) w_{i+1}],
           [-delta sqrt(r_{i+1}) w_{i+1},   b_i w_{i+1}         ]]
    B_i corners: c_i w_i, d_i w_{i+2}; off-corner -eta sqrt(r_{i+1} r_{i+2}) w_{i+2}

Matching the diagonal gives, for every row ``k``,
``a_k + b_{k-1} + c_k + d_{k-2} = 2`` (terms present only where the index
exists).  Every block is PSD iff ``a_i b_i >= Phi_i``, ``c_i d_i >= Psi_i``
with positive ``a_i``, ``c_i``, which certifies ``S`` is positive semidefinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import build_L, symmetrize
from .symbol import SymbolParams

__all__ = [
    "BlockDecomposition",
    "VerificationReport",
    "AmGmCertificate",
    "FeasibilityResult",
    "block_bounds",
    "row_residuals",
    "reconstruct",
    "verify",
    "amgm_certificate",
    "constant_split",
    "search_constant_splits",
    "solve_feasibility",
]

POSITIVITY_FLOOR = 1e-12


@dataclass
class BlockDecomposition:
    """Block weights; ``a``, ``b`` have length ``N-1`` and ``c``, ``d`` length ``N-2``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        self.d = np.asarray(self.d, dtype=float)
        if self.a.size != self.b.size or self.c.size != self.d.size:
            raise ValueError("a/b and c/d must have matching lengths")
        if self.a.size < 1 or self.c.size != max(self.a.size - 1, 0):
            raise ValueError(f"inconsistent block counts: {self.a.size} A-blocks, {self.c.size} B-blocks")

    @property
    def dim(self) -> int:
        return self.a.size + 1

    def __add__(self, other: "BlockDecomposition") -> "BlockDecomposition":
        return BlockDecomposition(self.a + other.a, self.b + other.b,
                                  self.c + other.c, self.d + other.d)

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist(),
                "c": self.c.tolist(), "d": self.d.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "BlockDecomposition":
        return cls(data["a"], data["b"], data["c"], data["d"])


def _ratios(r, dim=None) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise ValueError("block splitting needs at least two ratios (dimension >= 2)")
    if np.any(~(r > 0)):
        raise ValueError("ratios must be positive")
    if dim is not None and dim != r.size:
        raise ValueError(f"decomposition of dimension {dim} does not match {r.size} ratios")
    return r


def block_bounds(r, params: SymbolParams = SymbolParams()) -> tuple[np.ndarray, np.ndarray]:
    """
    Lower bounds ``Phi`` (for ``a_i b_i``) and ``Psi`` (for ``c_i d_i``).

    ``Phi_i = delta^2 r_{i+1} (1 + r_i) / (1 + r_{i+1})`` and
    ``Psi_i = eta^2 r_{i+1} r_{i+2} (1 + r_i) / (1 + r_{i+2})``.
    """
    r = _ratios(r)
    phi = params.delta ** 2 * r[1:] * (1 + r[:-1]) / (1 + r[1:])
    psi = params.eta ** 2 * r[1:-1] * r[2:] * (1 + r[:-2]) / (1 + r[2:])
    return phi, psi


def row_residuals(dec: BlockDecomposition) -> np.ndarray:
    """``a_k + b_{k-1} + c_k + d_{k-2} - 2`` for every row ``k``."""
    N = dec.dim
    s = np.full(N, -2.0)
    s[:-1] += dec.a
    s[1:] += dec.b
    if N > 2:
        s[:-2] += dec.c
        s[2:] += dec.d
    return s


def _blocks_sum(dec: BlockDecomposition, r, params: SymbolParams) -> np.ndarray:
    N = r.size
    w = 1.0 / (1.0 + r)
    out = np.zeros((N, N))
    i = np.arange(N - 1)
    off1 = -params.delta * np.sqrt(r[1:]) * w[1:]
    out[i, i] += dec.a * w[:-1]
    out[i + 1, i + 1] += dec.b * w[1:]
    out[i + 1, i] += off1
    out[i, i + 1] += off1
    if N > 2:
        j = np.arange(N - 2)
        off2 = -params.eta * np.sqrt(r[1:-1] * r[2:]) * w[2:]
        out[j, j] += dec.c * w[:-2]
        out[j + 2, j + 2] += dec.d * w[2:]
        out[j + 2, j] += off2
        out[j, j + 2] += off2
    return out


def reconstruct(dec: BlockDecomposition, r, params: SymbolParams = SymbolParams()) -> np.ndarray:
    """Dense ``sum A_i + sum B_i``."""
    r = _ratios(r, dec.dim)
    return _blocks_sum(dec, r, params)


@dataclass
class VerificationReport:
    reconstruction_error: float
    linear_residual: float
    min_block_det_margin: float
    min_positive_weight: float
    all_psd: bool
    det_m: np.ndarray = field(repr=False)
    det_p: np.ndarray = field(repr=False)
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "reconstruction_error": self.reconstruction_error,
            "linear_residual": self.linear_residual,
            "min_block_det_margin": self.min_block_det_margin,
            "min_positive_weight": self.min_positive_weight,
            "all_psd": self.all_psd,
            "det_m": self.det_m.tolist(),
            "det_p": self.det_p.tolist(),
            "failures": list(self.failures),
        }


def verify(dec: BlockDecomposition, r, params: SymbolParams = SymbolParams(),
           tol: float = 1e-12) -> VerificationReport:
    """
    Check that the blocks reproduce ``2 S`` and are all PSD.

    Determinant margins are reported in the scaled form
    ``a_i b_i w_i - delta^2 r_{i+1} w_{i+1}`` and
    ``c_i d_i w_i - eta^2 r_{i+1} r_{i+2} w_{i+2}``.  A passing report means
    ``lambda_min(2 S) >= -N tol`` up to rounding.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    r = _ratios(r, dec.dim)
    w = 1.0 / (1.0 + r)
    target = 2.0 * symmetrize(build_L(r, params, check=False))
    recon = float(np.abs(_blocks_sum(dec, r, params) - target).max())
    lin = float(np.abs(row_residuals(dec)).max())
    det_m = dec.a * dec.b * w[:-1] - params.delta ** 2 * r[1:] * w[1:]
    det_p = dec.c * dec.d * w[:-2] - params.eta ** 2 * r[1:-1] * r[2:] * w[2:]
    margins = np.concatenate([det_m, det_p])
    min_det = float(margins.min())
    weights = np.concatenate([dec.a, dec.c])
    min_w = float(weights.min()) if weights.size else math.inf

    failures = []
    if recon > tol:
        failures.append(f"reconstruction error {recon:.3e} > {tol:.1e}")
    bad = np.flatnonzero(det_m < -tol)
    if bad.size:
        failures.append(f"d(m_{bad[0]}) = {det_m[bad[0]]:.3e} < 0 ({bad.size} A-blocks)")
    bad = np.flatnonzero(det_p < -tol)
    if bad.size:
        failures.append(f"d(p_{bad[0]}) = {det_p[bad[0]]:.3e} < 0 ({bad.size} B-blocks)")
    if min_w < POSITIVITY_FLOOR:
        failures.append(f"nonpositive diagonal weight {min_w:.3e}")
    return VerificationReport(recon, lin, min_det, min_w, not failures, det_m, det_p, failures)


@dataclass(frozen=True)
class AmGmCertificate:
    """
    Necessary condition from summing every row equation.

    Any PSD splitting has ``a_i + b_i >= 2 sqrt(Phi_i)`` and
    ``c_i + d_i >= 2 sqrt(Psi_i)``; the row equations sum to ``2 N``.  If the
    bound exceeds the budget no splitting exists.
    """

    feasible_possible: bool
    lower_bound: float
    budget: float
    interior_rate: float

    @property
    def infeasible(self) -> bool:
        return not self.feasible_possible


def amgm_certificate(r, params: SymbolParams = SymbolParams()) -> AmGmCertificate:
    """
    ``interior_rate`` is the median of ``2 sqrt(Phi_i) + 2 sqrt(Psi_i)`` over
    interior blocks; above 2 the certificate eventually fires as ``N`` grows
    (2.293 for the default parameters at ``r = 1``).
    """
    r = _ratios(r)
    phi, psi = block_bounds(r, params)
    lower = 2.0 * np.sqrt(phi).sum() + 2.0 * np.sqrt(psi).sum()
    budget = 2.0 * r.size
    rates = 2.0 * np.sqrt(phi[:psi.size]) + 2.0 * np.sqrt(psi)
    rate = float(np.median(rates)) if rates.size else float(2.0 * np.sqrt(phi).max())
    return AmGmCertificate(bool(lower <= budget), float(lower), float(budget), rate)


def constant_split(r, alpha: float, gamma: float | None = None) -> BlockDecomposition:
    """
    ``a = b = alpha``, ``c = d = gamma`` (default ``1 - alpha``) with the
    row deficits at the boundary rows added to ``a_k`` (or ``b_{k-1}`` on the
    last row).
    """
    r = _ratios(r)
    N = r.size
    gamma = 1.0 - alpha if gamma is None else gamma
    dec = BlockDecomposition(np.full(N - 1, alpha), np.full(N - 1, alpha),
                             np.full(N - 2, gamma), np.full(N - 2, gamma))
    deficit = -row_residuals(dec)
    dec.a += deficit[:-1]
    dec.b[-1] += deficit[-1]
    return dec


def search_constant_splits(r, params: SymbolParams = SymbolParams(), step: float = 1e-3,
                           tol: float = 1e-12) -> list[float]:
    """Every ``alpha`` on the grid ``0, step, ..., 1`` whose constant split verifies."""
    r = _ratios(r)
    hits = []
    for alpha in np.arange(0.0, 1.0 + step / 2, step):
        if verify(constant_split(r, float(alpha)), r, params, tol).all_psd:
            hits.append(float(alpha))
    return hits


@dataclass
class FeasibilityResult:
    decomposition: BlockDecomposition | None
    report: VerificationReport | None
    certificate: AmGmCertificate
    strategy: str
    iterations: int = 0
    message: str = ""

    @property
    def found(self) -> bool:
        return self.decomposition is not None


def _project_hyperbola(u, v, bound, floor):
    """Push each pair onto ``{u v >= bound, u >= floor, v >= floor}`` (nearest point for nonnegative input)."""
    u = np.maximum(u, floor)
    v = np.maximum(v, floor)
    bad = u * v < bound
    if not np.any(bad):
        return u, v
    u0, v0, phi = u[bad], v[bad], bound[bad]
    lo = np.zeros_like(u0)
    hi = np.ones_like(u0)
    for _ in range(80):
        lam = 0.5 * (lo + hi)
        den = 1.0 - lam * lam
        prod = (u0 + lam * v0) * (v0 + lam * u0) / (den * den)
        grow = prod < phi
        lo = np.where(grow, lam, lo)
        hi = np.where(grow, hi, lam)
    den = 1.0 - hi * hi
    u[bad] = (u0 + hi * v0) / den
    v[bad] = (v0 + hi * u0) / den
    return u, v


def _project_rows(dec: BlockDecomposition):
    N = dec.dim
    counts = np.zeros(N)
    counts[:-1] += 1
    counts[1:] += 1
    if N > 2:
        counts[:-2] += 1
        counts[2:] += 1
    shift = row_residuals(dec) / counts
    dec.a -= shift[:-1]
    dec.b -= shift[1:]
    if N > 2:
        dec.c -= shift[:-2]
        dec.d -= shift[2:]


def solve_feasibility(r, params: SymbolParams = SymbolParams(),
                      strategy: str = "proportional-iterative", max_iter: int = 5000,
                      tol: float = 1e-12) -> FeasibilityResult:
    """
    Search for a verified PSD splitting of ``2 S``.

    ``constant-split`` puts ``alpha`` at the midpoint of
    ``[max sqrt(Phi), 1 - max sqrt(Psi)]``.  ``proportional-iterative`` starts
    there (or from ``alpha = 1/2``) and alternates projections onto the
    determinant constraints, inflated by a small margin, and onto the row
    equations.  Both return only decompositions that pass :func:`verify`.
    """
    r = _ratios(r)
    cert = amgm_certificate(r, params)
    if cert.infeasible:
        return FeasibilityResult(None, None, cert, strategy, 0,
                                 f"AM-GM bound {cert.lower_bound:.6g} exceeds budget {cert.budget:.6g}")
    phi, psi = block_bounds(r, params)
    lo = math.sqrt(phi.max())
    hi = 1.0 - (math.sqrt(psi.max()) if psi.size else 0.0)
    if strategy == "constant-split":
        if lo > hi:
            return FeasibilityResult(None, None, cert, strategy, 0,
                                     f"no constant split: need alpha >= {lo:.6g} and alpha <= {hi:.6g}")
        dec = constant_split(r, 0.5 * (lo + hi))
        rep = verify(dec, r, params, tol)
        if rep.all_psd:
            return FeasibilityResult(dec, rep, cert, strategy, 1, "constant split verified")
        return FeasibilityResult(None, rep, cert, strategy, 1, "; ".join(rep.failures))
    if strategy != "proportional-iterative":
        raise ValueError(f"unknown strategy {strategy!r}")

    dec = constant_split(r, 0.5 * (lo + hi) if lo <= hi else 0.5)
    rep = verify(dec, r, params, tol)
    if rep.all_psd:
        return FeasibilityResult(dec, rep, cert, strategy, 0, "constant split verified")
    margin = 1e-9
    phi_t = phi * (1 + margin) + 1e-12
    psi_t = psi * (1 + margin) + 1e-12
    for it in range(1, max_iter + 1):
        dec.a, dec.b = _project_hyperbola(dec.a, dec.b, phi_t, 10 * POSITIVITY_FLOOR)
        if psi.size:
            dec.c, dec.d = _project_hyperbola(dec.c, dec.d, psi_t, 10 * POSITIVITY_FLOOR)
        _project_rows(dec)
        if it % 10 == 0 or it == max_iter:
            rep = verify(dec, r, params, tol)
            if rep.all_psd:
                return FeasibilityResult(dec, rep, cert, strategy, it, "alternating projections converged")
    return FeasibilityResult(None, rep, cert, strategy, max_iter,
                             "no feasible point found: " + "; ".join(rep.failures))
