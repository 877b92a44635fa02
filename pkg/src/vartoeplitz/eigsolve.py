"""
Dense symmetric eigenvalues and singular values by Jacobi rotations.

Eigenvalues use the two-sided cyclic-by-row Jacobi method; singular values use
the one-sided (Hestenes) variant on columns.  Both kernels are compiled with
numba and work on a private copy of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = [
    "ConvergenceError",
    "SpectralSample",
    "jacobi_eigenvalues",
    "singular_values",
    "min_max_eig",
    "is_positive_definite",
    "fit_convergence_order",
]

MAX_SWEEPS = 64


class ConvergenceError(RuntimeError):
    """Jacobi sweeps did not reach the requested off-diagonal tolerance."""


@dataclass(frozen=True)
class SpectralSample:
    """Ascending eigenvalues or singular values of one matrix."""

    values: np.ndarray
    kind: str = "eigenvalues"
    sweeps: int = 0

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))
        if self.kind not in ("eigenvalues", "singular-values"):
            raise ValueError(f"unknown spectral kind {self.kind!r}")
        if self.kind == "singular-values" and v.size and v[0] < 0:
            raise ValueError("singular values must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s += a[i, j] * a[i, j]
    return np.sqrt(2.0 * s)


@njit(cache=True)
def _jacobi_sweeps(a, tol, max_sweeps):
    # Row p and the rows q > p are kept current; column p is written back once
    # after its q-loop, so row q reads a_qp from a[p, q].
    n = a.shape[0]
    fro = np.sqrt(np.sum(a * a))
    target = tol * fro
    thresh = target / max(n, 1)
    off = _off_norm(a)
    sweep = 0
    while off > target and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= thresh:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                a[q, p] = apq
                for k in range(n):
                    akp = a[p, k]
                    akq = a[q, k]
                    a[p, k] = c * akp - s * akq
                    a[q, k] = s * akp + c * akq
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    a[k, q] = a[q, k]
            for k in range(n):
                a[k, p] = a[p, k]
        sweep += 1
        off = _off_norm(a)
    return sweep, off, fro


@njit(cache=True)
def _hestenes_sweeps(g, tol, max_sweeps):
    # g holds the columns of the input as rows (contiguous)
    n = g.shape[0]
    m = g.shape[1]
    sweep = 0
    rotated = True
    worst = 0.0
    while rotated and sweep < max_sweeps:
        rotated = False
        worst = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(m):
                    alpha += g[p, k] * g[p, k]
                    beta += g[q, k] * g[q, k]
                    gamma += g[p, k] * g[q, k]
                if gamma == 0.0:
                    continue
                scale = np.sqrt(alpha * beta)
                rel = abs(gamma) / scale
                if rel > worst:
                    worst = rel
                if rel <= tol:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = 1.0 / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                if zeta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for k in range(m):
                    gp = g[p, k]
                    gq = g[q, k]
                    g[p, k] = c * gp - s * gq
                    g[q, k] = s * gp + c * gq
        sweep += 1
    return sweep, rotated, worst


def _as_square(S) -> np.ndarray:
    a = np.array(S.toarray() if hasattr(S, "toarray") else S, dtype=float, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def jacobi_eigenvalues(S, tol: float = 1e-12, max_sweeps: int = MAX_SWEEPS) -> SpectralSample:
    """
    Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    S : array_like
        Symmetric matrix; only symmetric inputs give meaningful results.
    tol : float
        Stop once the off-diagonal Frobenius norm is at most ``tol * ||S||_F``.
    max_sweeps : int
        Raise :class:`ConvergenceError` if the tolerance is not met in this
        many sweeps.

    Returns
    -------
    SpectralSample
        Eigenvalues in ascending order.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = _as_square(S)
    if not np.allclose(a, a.T, rtol=0.0, atol=1e-13 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("matrix is not symmetric")
    if a.shape[0] == 0:
        return SpectralSample(np.empty(0))
    sweeps, off, fro = _jacobi_sweeps(a, float(tol), int(max_sweeps))
    if off > tol * fro:
        raise ConvergenceError(
            f"Jacobi did not converge in {sweeps} sweeps: off-diagonal norm "
            f"{off:.3e} > {tol:.1e} * ||S||_F = {tol * fro:.3e} (dim {a.shape[0]})")
    return SpectralSample(np.diag(a).copy(), "eigenvalues", sweeps)


def singular_values(L, tol: float = 1e-12, max_sweeps: int = MAX_SWEEPS) -> SpectralSample:
    """
    Singular values by one-sided Jacobi orthogonalisation of the columns.

    ``L`` may be a dense array or anything with ``toarray()`` (e.g.
    :class:`~vartoeplitz.matrix.LowerBand3Matrix`).  Columns are rotated until
    every pair has cosine at most ``tol``; the column norms are the singular
    values.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = np.array(L.toarray() if hasattr(L, "toarray") else L, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if a.shape[0] < a.shape[1]:
        a = a.T
    g = np.ascontiguousarray(a.T)
    sweeps, rotated, worst = _hestenes_sweeps(g, float(tol), int(max_sweeps))
    if rotated:
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {sweeps} sweeps: largest column "
            f"cosine {worst:.3e} > {tol:.1e}")
    return SpectralSample(np.sqrt(np.sum(g * g, axis=1)), "singular-values", sweeps)


def min_max_eig(S, tol: float = 1e-12) -> tuple[float, float]:
    v = jacobi_eigenvalues(S, tol).values
    return float(v[0]), float(v[-1])


def is_positive_definite(S, tol: float = 1e-12) -> bool:
    """True iff the smallest Jacobi eigenvalue is strictly positive."""
    return min_max_eig(S, tol)[0] > 0.0


def fit_convergence_order(ns, errors) -> float:
    """
    Least-squares slope of ``log(error)`` against ``log(n)``, negated.

    ``errors ~ C n^{-alpha}`` gives ``alpha``.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ns.shape != errors.shape or ns.size < 3:
        raise ValueError("need at least 3 (n, error) pairs")
    if np.any(~(errors > 0)):
        raise ValueError("errors must be positive")
    if np.any(~(ns > 0)):
        raise ValueError("sizes must be positive")
    slope = np.polyfit(np.log(ns), np.log(errors), 1)[0]
    return float(-slope) + 0.0
