"""Grid-refinement pipelines: discretise, diagonalise, extrapolate."""
from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from ..params import DeformationParams
from .discretize import (Bands, PositionSpectrum, cluster, discretize_position_1d,
                         hamiltonian_bands_1d, hamiltonian_bands_radial)
from .eigen import AsymmetryError, EigenReport, NumericFailure, eig_herm, tridiagonal_eigh
from .grids import MomentumGrid, make_grid
from .richardson import richardson

DEFAULT_GRIDS = (512, 1024, 2048)


class DomainTruncationError(NumericFailure):
    """The lowest eigenvector has not decayed at a truncated grid edge."""


def count_sign_changes(vec: np.ndarray, rel_tol: float = 1e-8) -> int:
    v = np.asarray(vec, float)
    v = v[np.abs(v) > rel_tol * np.max(np.abs(v))]
    return int(np.count_nonzero(np.sign(v[1:]) != np.sign(v[:-1])))


def _edge_ratio(vec, grid: MomentumGrid) -> float:
    peak = np.max(np.abs(vec))
    if grid.kind == "truncated_p":
        edge = max(abs(vec[0]), abs(vec[-1]))
    elif grid.kind == "radial_p" and grid.map == "linear":
        edge = abs(vec[-1])
    else:
        return 0.0
    return float(edge / peak)


def solve_bands(bands: Bands, n_levels: int, asym_tol: float = 1e-12, truncation_tol: float = 1e-6):
    if bands.asymmetry > asym_tol:
        raise AsymmetryError(f"discretised operator asymmetry {bands.asymmetry:.3e} exceeds {asym_tol:.1e}")
    diag, off = bands.symmetric()
    values, vecs, resid = tridiagonal_eigh(diag, off, n_levels)
    ratio = _edge_ratio(vecs[:, 0], bands.grid)
    if ratio > truncation_tol:
        raise DomainTruncationError(f"ground state is {ratio:.2e} of its peak at the grid edge; enlarge p_max")
    return values, vecs, resid


def _refine(build, grids: Sequence[int], n_levels: int, asym_tol: float) -> EigenReport:
    grids = sorted(int(g) for g in grids)
    if any(b != 2 * a for a, b in zip(grids, grids[1:])):
        raise ValueError("grid sizes must double at each level")
    levels = []
    asym = 0.0
    for n in grids:
        bands = build(n)
        asym = max(asym, bands.asymmetry)
        values, vecs, resid = solve_bands(bands, n_levels, asym_tol)
        levels.append(values[:n_levels])
    if len(levels) >= 2:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            extrap, err, order = richardson(levels)
        for w in caught:
            warnings.warn_explicit(w.message, w.category, __file__, 0)
    else:
        extrap, err, order = levels[-1], np.full(n_levels, np.nan), np.full(n_levels, np.nan)
    return EigenReport(eigenvalues=levels[-1], grid_sizes=grids, extrapolated=extrap,
                       error_estimate=err, residual_norms=resid, eigenvectors=vecs,
                       apparent_order=order, asymmetry=asym)


def default_grid_1d(params: DeformationParams, n: int, kind: str = None, p_max: float = None) -> MomentumGrid:
    if kind is None:
        kind = "compact_theta" if params.delta_sq > 0 else "truncated_p"
    return make_grid(kind, n, params.delta, p_max)


def spectrum_1d(params: DeformationParams, grids: Sequence[int] = DEFAULT_GRIDS, n_levels: int = 11,
                kind: str = None, p_max: float = None, asym_tol: float = 1e-12) -> EigenReport:
    """Lowest ``n_levels`` energies of the one-dimensional oscillator."""
    return _refine(lambda n: hamiltonian_bands_1d(params, default_grid_1d(params, n, kind, p_max)),
                   grids, n_levels, asym_tol)


def spectrum_radial(params: DeformationParams, s: int, grids: Sequence[int] = DEFAULT_GRIDS,
                    n_levels: int = 5, map: str = None, p_max: float = None, factored: bool = True,
                    asym_tol: float = 1e-12) -> EigenReport:
    """Lowest ``n_levels`` radial energies at angular momentum ``s`` (index ``m'``)."""
    def build(n):
        grid = make_grid("radial_p", n, params.delta, p_max, map)
        return hamiltonian_bands_radial(params, grid, s, factored)
    return _refine(build, grids, n_levels, asym_tol)


def position_spectrum(params: DeformationParams, n: int = 256, cluster_tol: float = 1e-9) -> PositionSpectrum:
    """Eigenvalues of the discretised position operator, clustered to distinct values."""
    mat = discretize_position_1d(params, n)
    rep = eig_herm(mat, n_vectors=n)
    distinct, mult = cluster(rep.eigenvalues, cluster_tol * max(1.0, np.max(np.abs(rep.eigenvalues))))
    return PositionSpectrum(rep.eigenvalues, distinct, mult, np.diff(distinct), rep.residual_norms)
