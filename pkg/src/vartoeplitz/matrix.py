"""
Matrices of the variable two-step BDF sequence and their Toeplitz/momentary models.

Row ``k`` (1-based) of the lower-triangular matrix ``L`` belongs to the step
ratio ``r_{k+1}``:

    L[k, k]   =  1 / (1 + r_{k+1})
    L[k, k-1] = -delta * sqrt(r_{k+1}) / (1 + r_{k+1})
    L[k, k-2] = -eta * sqrt(r_k * r_{k+1}) / (1 + r_{k+1})

Dense symmetric matrices are plain 2-d ``numpy`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .eigsolve import jacobi_eigenvalues
from .grid import GridMap
from .symbol import SymbolParams, _log_derivative_ratio

__all__ = [
    "LowerBand3Matrix",
    "build_L",
    "build_L_factored",
    "symmetrize",
    "build_toeplitz",
    "stationary_toeplitz",
    "diag_sampling",
    "build_momentary_matrix",
    "residual_spectral_gap",
]

_FACTORED_TOL = 1e-15


@dataclass(frozen=True)
class LowerBand3Matrix:
    """Lower-triangular matrix with bandwidth 2, stored by diagonals."""

    diag: np.ndarray
    sub1: np.ndarray
    sub2: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        s1 = np.asarray(self.sub1, dtype=float)
        s2 = np.asarray(self.sub2, dtype=float)
        n = d.size
        if s1.size != max(n - 1, 0) or s2.size != max(n - 2, 0):
            raise ValueError(f"diagonal lengths {d.size}, {s1.size}, {s2.size} do not fit dim {n}")
        for arr in (d, s1, s2):
            if not np.all(np.isfinite(arr)):
                raise ValueError("matrix entries must be finite")
            arr.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "sub1", s1)
        object.__setattr__(self, "sub2", s2)

    @property
    def dim(self) -> int:
        return self.diag.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dim, self.dim)

    def toarray(self) -> np.ndarray:
        n = self.dim
        a = np.diag(self.diag)
        if n > 1:
            a[np.arange(1, n), np.arange(n - 1)] = self.sub1
        if n > 2:
            a[np.arange(2, n), np.arange(n - 2)] = self.sub2
        return a

    def tosparse(self):
        n = self.dim
        diags, offs = [self.diag], [0]
        if n > 1:
            diags.append(self.sub1)
            offs.append(-1)
        if n > 2:
            diags.append(self.sub2)
            offs.append(-2)
        return sparse.diags(diags, offs, shape=(n, n), format="csr")


def _check_ratios(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("need a non-empty ratio sequence")
    if np.any(~(r > 0)) or not np.all(np.isfinite(r)):
        raise ValueError("ratios must be positive and finite")
    return r


def build_L_factored(r, params: SymbolParams = SymbolParams()):
    """
    ``D1 - delta D2 T(e^{i theta}) - eta D3 T(e^{2i theta})`` as a sparse matrix.

    The first two entries of ``D3`` multiply zero rows of the shift and are set
    to zero.
    """
    r = _check_ratios(r)
    n = r.size
    w = 1.0 / (1.0 + r)
    d3 = np.zeros(n)
    d3[1:] = np.sqrt(r[:-1] * r[1:]) * w[1:]
    # sparse.eye rejects offsets outside the matrix
    shift1 = sparse.eye(n, k=-1, format="csr") if n > 1 else sparse.csr_matrix((n, n))
    shift2 = sparse.eye(n, k=-2, format="csr") if n > 2 else sparse.csr_matrix((n, n))
    return (sparse.diags(w) - params.delta * sparse.diags(np.sqrt(r) * w) @ shift1
            - params.eta * sparse.diags(d3) @ shift2)


def build_L(r, params: SymbolParams = SymbolParams(), check: bool = True) -> LowerBand3Matrix:
    """
    The ``(n-1) x (n-1)`` matrix for ratios ``r = (r_2, ..., r_n)``.

    With ``check`` (default) the entrywise construction is compared with the
    diagonal-times-shift factorisation and must agree to 1e-15.
    """
    r = _check_ratios(r)
    w = 1.0 / (1.0 + r)
    diag = w
    sub1 = -params.delta * np.sqrt(r[1:]) * w[1:]
    sub2 = -params.eta * np.sqrt(r[1:-1] * r[2:]) * w[2:]
    L = LowerBand3Matrix(diag, sub1, sub2)
    if check:
        diff = abs(L.tosparse() - build_L_factored(r, params))
        err = diff.max() if diff.nnz else 0.0
        if err > _FACTORED_TOL:
            raise AssertionError(f"entrywise and factored constructions differ by {err:.3e}")
    return L


def symmetrize(L) -> np.ndarray:
    """Symmetric part ``(L + L^T) / 2`` as a dense array."""
    a = L.toarray() if hasattr(L, "toarray") else np.asarray(L, dtype=float)
    return 0.5 * (a + a.T)


def build_toeplitz(coeffs, dim: int, q: int | None = None) -> np.ndarray:
    """
    Banded Toeplitz matrix with entry ``(j, k) = a_{j-k}``.

    ``coeffs`` lists ``a_{-q}, ..., a_p``; ``q`` defaults to the centre of the
    list (symmetric band).
    """
    coeffs = np.asarray(coeffs)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if q is None:
        if coeffs.size % 2 == 0:
            raise ValueError("give q explicitly for an even-length coefficient list")
        q = coeffs.size // 2
    p = coeffs.size - 1 - q
    if q < 0 or p < 0:
        raise ValueError("q out of range for the coefficient list")
    if max(p, q) >= dim:
        raise ValueError(f"band (-{q}, {p}) is wider than dimension {dim}")
    dtype = complex if np.iscomplexobj(coeffs) else float
    a = np.zeros((dim, dim), dtype=dtype)
    for idx, c in enumerate(coeffs):
        k = idx - q  # a_k sits where row - col = k
        if c != 0:
            a += c * np.eye(dim, k=-k, dtype=dtype)
    return a


def stationary_toeplitz(params: SymbolParams, dim: int) -> np.ndarray:
    """``T_dim(Re kappa)`` for the equispaced grid: coefficients ``(-eta/4, -delta/4, 1/2, -delta/4, -eta/4)``."""
    c = [-params.eta / 4, -params.delta / 4, 0.5, -params.delta / 4, -params.eta / 4]
    if dim < 3:
        mid = 2
        c = c[mid - (dim - 1): mid + dim]
    return build_toeplitz(c, dim)


def diag_sampling(alpha, n: int) -> np.ndarray:
    """``diag(alpha(i/n))``, ``i = 1..n``."""
    vals = np.asarray(alpha(np.arange(1, n + 1) / n), dtype=float) * np.ones(n)
    if not np.all(np.isfinite(vals)):
        raise ValueError("sampled values must be finite")
    return np.diag(vals)


def build_momentary_matrix(gmap: GridMap, n: int, params: SymbolParams = SymbolParams()) -> np.ndarray:
    """
    Symmetric part of ``A_n + h B_n`` with ``h = 1/n``.

    ``A_n`` is the equispaced Toeplitz matrix and
    ``B_n = diag(-psi''/psi') (I/4 + (eta/4) T(e^{2i theta}))``, the log-derivative
    ratio for row ``k`` sampled at ``x = k/n`` (the Taylor centre of ``r_{k+1}``).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    dim = n - 1
    x = np.arange(1, dim + 1) / n
    g = -_log_derivative_ratio(gmap, x)
    A = stationary_toeplitz(params, dim)
    B = np.diag(0.25 * g)
    if dim > 2:
        B[np.arange(2, dim), np.arange(dim - 2)] = 0.25 * params.eta * g[2:]
    return A + symmetrize(B) / n


def residual_spectral_gap(S, S_approx, tol: float = 1e-12) -> float:
    """Spectral norm of ``S - S_approx`` (largest eigenvalue magnitude)."""
    S = np.asarray(S, dtype=float)
    S_approx = np.asarray(S_approx, dtype=float)
    if S.shape != S_approx.shape:
        raise ValueError(f"dimension mismatch: {S.shape} vs {S_approx.shape}")
    if not np.any(S - S_approx):
        return 0.0
    v = jacobi_eigenvalues(S - S_approx, tol).values
    return float(max(abs(v[0]), abs(v[-1])))
