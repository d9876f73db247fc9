"""Symmetric eigensolver: Householder reduction, implicit QL, inverse iteration.

Tridiagonal input skips the reduction, which is how the discretised
Hamiltonians are solved.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from numba import njit

_EPS = np.finfo(float).eps


class NumericFailure(RuntimeError):
    """A numerical routine failed to converge or produced unusable output."""


class AsymmetryError(NumericFailure):
    pass


@dataclass
class EigenReport:
    eigenvalues: np.ndarray
    grid_sizes: List[int] = field(default_factory=list)
    extrapolated: Optional[np.ndarray] = None
    error_estimate: Optional[np.ndarray] = None
    residual_norms: Optional[np.ndarray] = None
    eigenvectors: Optional[np.ndarray] = None
    apparent_order: Optional[np.ndarray] = None
    asymmetry: float = 0.0

    def best(self) -> np.ndarray:
        return self.eigenvalues if self.extrapolated is None else self.extrapolated


@njit(cache=True)
def _ql_implicit(d, e, z, want_vectors):
    """In-place implicit QL on a symmetric tridiagonal matrix.

    ``d`` is the diagonal, ``e[i]`` couples ``i`` and ``i+1`` (last entry unused).
    Rotations are accumulated into the columns of ``z`` when requested.
    Returns 0 on success, -1 if an eigenvalue failed to converge.
    """
    n = d.shape[0]
    nz = z.shape[0]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    for k in range(nz):
                        f = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * f
                        z[k, i] = c * z[k, i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


@njit(cache=True)
def _tridiag_solve(sub, diag, sup, rhs, tiny):
    """Solve a tridiagonal system with partial pivoting (rows swapped as needed)."""
    n = diag.shape[0]
    dl = sub.copy()
    d = diag.copy()
    du = sup.copy()
    b = rhs.copy()
    du2 = np.zeros(max(n - 2, 0))
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            if d[i] == 0.0:
                d[i] = tiny
            fact = dl[i] / d[i]
            d[i + 1] -= fact * du[i]
            b[i + 1] -= fact * b[i]
        else:
            fact = d[i] / dl[i]
            d[i] = dl[i]
            temp = d[i + 1]
            d[i + 1] = du[i] - fact * temp
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du2[i]
            du[i] = temp
            temp = b[i]
            b[i] = b[i + 1]
            b[i + 1] = temp - fact * b[i + 1]
    if d[n - 1] == 0.0:
        d[n - 1] = tiny
    b[n - 1] /= d[n - 1]
    if n > 1:
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i]
    return b


def tridiagonal_eigenvalues(diag, off) -> np.ndarray:
    d = np.array(diag, dtype=float)
    e = np.zeros_like(d)
    e[:-1] = off
    status = _ql_implicit(d, e, np.zeros((0, 0)), False)
    if status != 0:
        raise NumericFailure("QL iteration did not converge")
    return np.sort(d)


def _tridiag_matvec(diag, off, v):
    out = diag * v
    out[:-1] += off * v[1:]
    out[1:] += off * v[:-1]
    return out


def inverse_iteration(diag, off, values, iterations: int = 3, seed: int = 12345):
    """Eigenvectors of a tridiagonal matrix for the given (accurate) eigenvalues."""
    diag = np.asarray(diag, float)
    off = np.asarray(off, float)
    n = len(diag)
    norm = np.max(np.abs(diag)) + 2 * (np.max(np.abs(off)) if n > 1 else 0.0)
    tiny = _EPS * max(norm, 1.0)
    rng = np.random.default_rng(seed)
    vecs = np.zeros((n, len(values)))
    for k, lam in enumerate(values):
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        shifted = diag - lam
        close = [j for j in range(k) if abs(values[j] - lam) < 1e-7 * norm]
        for _ in range(iterations):
            v = _tridiag_solve(off, shifted, off, v, tiny)
            for j in close:
                v -= (vecs[:, j] @ v) * vecs[:, j]
            v /= np.linalg.norm(v)
        vecs[:, k] = v
    return vecs


def tridiagonal_eigh(diag, off, n_vectors: int = 20):
    """All eigenvalues and the lowest ``n_vectors`` eigenvectors with residual norms."""
    values = tridiagonal_eigenvalues(diag, off)
    k = min(n_vectors, len(values))
    vecs = inverse_iteration(diag, off, values[:k])
    resid = np.array([np.linalg.norm(_tridiag_matvec(np.asarray(diag, float), np.asarray(off, float), vecs[:, j])
                                     - values[j] * vecs[:, j]) for j in range(k)])
    return values, vecs, resid


def householder_tridiagonalize(a: np.ndarray):
    """Return ``(d, e, Q)`` with ``Q.T @ a @ Q`` tridiagonal."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += np.copysign(alpha, x[0])
        vnorm2 = v @ v
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        # two-sided update on the trailing block, rank-2 form
        block = a[k + 1:, k + 1:]
        w = beta * (block @ v)
        kk = 0.5 * beta * (v @ w)
        w -= kk * v
        block -= np.outer(v, w) + np.outer(w, v)
        a[k + 1:, k + 1:] = block
        col = x - beta * (v @ x) * v
        a[k + 1:, k] = col
        a[k, k + 1:] = col
        q[:, k + 1:] -= beta * np.outer(q[:, k + 1:] @ v, v)
    return np.diag(a).copy(), np.diag(a, -1).copy(), q


def _is_tridiagonal(a: np.ndarray) -> bool:
    return not np.any(np.triu(a, 2)) and not np.any(np.tril(a, -2))


def check_symmetric(a: np.ndarray, tol: float = 1e-12) -> float:
    scale = np.linalg.norm(a)
    asym = np.linalg.norm(a - a.T) / scale if scale else 0.0
    if asym > tol:
        raise AsymmetryError(f"matrix asymmetry {asym:.3e} exceeds {tol:.1e}")
    return asym


def eig_sym(matrix, n_vectors: int = 20, tol: float = 1e-12) -> EigenReport:
    """Eigenvalues of a real symmetric matrix plus the lowest eigenpairs.

    Raises ``AsymmetryError`` if ``||A - A^T|| / ||A||`` exceeds ``tol``.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eig_sym needs a square matrix")
    asym = check_symmetric(a, tol)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    if _is_tridiagonal(a):
        values, vecs, _ = tridiagonal_eigh(np.diag(a), np.diag(a, 1), n_vectors)
    else:
        d, e, q = householder_tridiagonalize(a)
        values = tridiagonal_eigenvalues(d, e)
        k = min(n_vectors, n)
        vecs = q @ inverse_iteration(d, e, values[:k])
    k = vecs.shape[1]
    resid = np.array([np.linalg.norm(a @ vecs[:, j] - values[j] * vecs[:, j]) for j in range(k)])
    return EigenReport(eigenvalues=values, grid_sizes=[n], residual_norms=resid,
                       eigenvectors=vecs, asymmetry=asym)


def eig_herm(matrix, n_vectors: int = 20, tol: float = 1e-12) -> EigenReport:
    """Hermitian eigenproblem through the real embedding ``[[X, -Y], [Y, X]]``.

    The embedding doubles each eigenvalue; one copy of each pair is kept.
    """
    h = np.asarray(matrix, dtype=complex)
    x, y = h.real, h.imag
    big = np.block([[x, -y], [y, x]])
    rep = eig_sym(big, n_vectors=2 * n_vectors, tol=tol)
    values = rep.eigenvalues[::2]
    n = h.shape[0]
    vecs = rep.eigenvectors[:n, ::2] + 1j * rep.eigenvectors[n:, ::2]
    norms = np.linalg.norm(vecs, axis=0)
    vecs = vecs / np.where(norms > 0, norms, 1.0)
    resid = np.array([np.linalg.norm(h @ vecs[:, j] - values[j] * vecs[:, j]) for j in range(vecs.shape[1])])
    return EigenReport(eigenvalues=values, grid_sizes=[n], residual_norms=resid,
                       eigenvectors=vecs, asymmetry=rep.asymmetry)
