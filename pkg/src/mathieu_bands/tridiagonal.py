"""Symmetric tridiagonal eigensolver: Sturm counts, bisection, inverse iteration.

Written out by hand (no LAPACK) so eigenvalues are reproducible bit for bit
and the kernel can be checked against brute-force oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

EPS = np.finfo(float).eps
_SAFMIN = np.finfo(float).tiny

# bisection stops once the bracket is this wide (absolute part)
_ABS_WIDTH = EPS


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal matrix stored as its diagonal and off-diagonal."""

    diag: np.ndarray
    off: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        off = np.asarray(self.off, dtype=float)
        if diag.ndim != 1 or off.ndim != 1 or len(diag) < 1:
            raise ValueError("diag and off must be 1-d, diag non-empty")
        if len(off) != len(diag) - 1:
            raise ValueError(
                f"off-diagonal has length {len(off)}, expected {len(diag) - 1}"
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "off", off)

    @property
    def size(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def norm1(self) -> float:
        """Max absolute column sum."""
        a = np.abs(self.diag).copy()
        e = np.abs(self.off)
        a[:-1] += e
        a[1:] += e
        return float(a.max())

    def gershgorin(self) -> tuple[float, float]:
        e = np.abs(self.off)
        r = np.zeros_like(self.diag)
        r[:-1] += e
        r[1:] += e
        return float((self.diag - r).min()), float((self.diag + r).max())


def sturm_count(diag, off_sq, x: float, pivmin: float) -> int:
    """Number of eigenvalues strictly below ``x``.

    ``diag`` and ``off_sq`` are plain sequences (squared off-diagonal), which
    keeps the inner loop in fast scalar Python.
    """
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, len(diag)):
        q = diag[i] - x - off_sq[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def _bisect(diag, off_sq, index, lo, hi, pivmin):
    # invariant: count(lo) <= index < count(hi)
    while True:
        width = hi - lo
        if width <= _ABS_WIDTH + 2.0 * EPS * max(abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if sturm_count(diag, off_sq, mid, pivmin) > index:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def eigenvalues_bisection(T: Tridiagonal, k: int | None = None) -> np.ndarray:
    """The ``k`` smallest eigenvalues of ``T`` in ascending order."""
    n = T.size
    if k is None:
        k = n
    if not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, {n}]")
    diag = T.diag.tolist()
    off_sq = (T.off**2).tolist()
    pivmin = _SAFMIN * max(1.0, max(off_sq, default=0.0))
    glo, ghi = T.gershgorin()
    pad = 2.0 * EPS * max(abs(glo), abs(ghi)) + 2.0 * pivmin
    glo -= pad
    ghi += pad
    out = np.empty(k)
    lo = glo
    for j in range(k):
        # eigenvalues come out ascending, so the previous one is a valid lower bound
        out[j] = _bisect(diag, off_sq, j, lo, ghi, pivmin)
        lo = max(glo, out[j] - 2.0 * (_ABS_WIDTH + 2.0 * EPS * abs(out[j])))
    # exact ties can land a rounding step out of order
    return np.sort(out, kind="stable")


def _start_vector(n: int) -> np.ndarray:
    # deterministic and without any mirror symmetry, so it overlaps both
    # parity classes of the Floquet matrix at nu = 0
    i = np.arange(n, dtype=float)
    return 1.0 + 0.5 * np.sin(1.7 * i + 0.3)


def _solve_shifted(T: Tridiagonal, shift: float, rhs: np.ndarray, tiny: float):
    """Solve (T - shift I) x = rhs by Gaussian elimination with partial pivoting.

    Zero pivots are replaced by ``tiny``; that is what makes inverse
    iteration work when the shift is an eigenvalue to full precision.
    """
    n = T.size
    d = (T.diag - shift).tolist()
    e = T.off.tolist()
    b = rhs.tolist()
    if n == 1:
        piv = d[0] if abs(d[0]) >= tiny else math.copysign(tiny, d[0] or 1.0)
        return np.array([b[0] / piv])
    # U has main diagonal u0, first super u1, second super u2
    u0 = [0.0] * n
    u1 = [0.0] * n
    u2 = [0.0] * n
    cur_d = d[0]
    cur_e = e[0]
    for i in range(n - 1):
        sub = e[i]
        next_d = d[i + 1]
        next_e = e[i + 1] if i + 1 < n - 1 else 0.0
        if abs(cur_d) >= abs(sub):
            # no row swap
            piv = cur_d if abs(cur_d) >= tiny else math.copysign(tiny, cur_d or 1.0)
            u0[i], u1[i], u2[i] = piv, cur_e, 0.0
            m = sub / piv
            cur_d = next_d - m * cur_e
            cur_e = next_e
            b[i + 1] -= m * b[i]
        else:
            # swap rows i and i+1
            u0[i], u1[i], u2[i] = sub, next_d, next_e
            m = cur_d / sub
            cur_d = cur_e - m * next_d
            cur_e = -m * next_e
            b[i], b[i + 1] = b[i + 1], b[i] - m * b[i + 1]
    u0[n - 1] = cur_d if abs(cur_d) >= tiny else math.copysign(tiny, cur_d or 1.0)
    x = [0.0] * n
    for i in range(n - 1, -1, -1):
        s = b[i]
        if i + 1 < n:
            s -= u1[i] * x[i + 1]
        if i + 2 < n:
            s -= u2[i] * x[i + 2]
        x[i] = s / u0[i]
    return np.array(x)


def fix_sign(v: np.ndarray, rel: float = 1e-8) -> np.ndarray:
    """Make the largest-magnitude entry positive.

    Entries within ``rel`` of the maximum count as tied, and the first of them
    decides, so mirror-symmetric vectors get a stable phase.
    """
    mags = np.abs(v)
    top = mags.max()
    if top == 0.0:
        return v
    j = int(np.argmax(mags >= top * (1.0 - rel)))
    return -v if v[j] < 0 else v


def _inverse_iteration(T, lam, start, basis, tiny, tol_res, min_iter=3, max_iter=10):
    x = start / np.linalg.norm(start)
    for it in range(max_iter):
        x = _solve_shifted(T, lam, x, tiny)
        for u in basis:
            x -= np.dot(u, x) * u
        nrm = np.linalg.norm(x)
        if not np.isfinite(nrm) or nrm == 0.0:
            return None
        x /= nrm
        if it + 1 >= min_iter:
            res = np.linalg.norm(T.matvec(x) - lam * x)
            if res <= tol_res:
                return x
    return None


def eigen_tridiagonal(T: Tridiagonal, k: int | None = None):
    """Lowest ``k`` eigenpairs of a symmetric tridiagonal matrix.

    Parameters
    ----------
    T : Tridiagonal
    k : int, optional
        Number of eigenpairs (default: all).

    Returns
    -------
    values : ndarray, shape (k,)
        Ascending eigenvalues.
    vectors : ndarray, shape (n, k)
        Unit eigenvectors in the columns, sign fixed by :func:`fix_sign`.

    Raises
    ------
    NonConvergence
        If inverse iteration fails, including one retry with a perturbed shift.
    """
    n = T.size
    values = eigenvalues_bisection(T, k)
    k = len(values)
    vectors = np.empty((n, k))
    tnorm = max(T.norm1(), 1.0)
    tiny = EPS * tnorm
    tol_res = 64.0 * n * EPS * tnorm
    # eigenvalues closer than this are treated as one cluster (as LAPACK stein)
    cluster_gap = 1e-3 * tnorm
    start = _start_vector(n)
    cluster: list[np.ndarray] = []
    for j, lam in enumerate(values):
        if j == 0 or lam - values[j - 1] > cluster_gap:
            cluster = []
        x = _inverse_iteration(T, lam, start, cluster, tiny, tol_res)
        if x is None:
            shifted = lam + 1e-10 * max(1.0, abs(lam))
            x = _inverse_iteration(T, shifted, start, cluster, tiny, tol_res)
        if x is None:
            raise NonConvergence(
                f"inverse iteration failed for eigenvalue #{j} ({lam!r})"
            )
        cluster.append(x)
        vectors[:, j] = fix_sign(x)
    return values, vectors
