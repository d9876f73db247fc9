"""Finite-difference Hamiltonians and the position operator on momentum grids.

Every Hamiltonian is a second-order operator ``a2 u'' + a1 u' + a0 u`` in
``p``.  It is rewritten in the grid variable ``xi`` and conjugated by the
square root of the measure ``dp/dxi * (radial factor) / W``, which makes it
formally symmetric.  The conservative three-point stencil of the symmetric
form is then a symmetric tridiagonal matrix; whatever first-derivative
coefficient survives the conjugation (the symmetric-form defect) is
discretised too, so any mistake in the weight shows up as matrix asymmetry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from ..params import DeformationParams
from .eigen import NumericFailure
from .grids import MapSamples, MomentumGrid


class OriginSingularityError(NumericFailure):
    """The centrifugal term is unbounded at p = 0 without factoring out p^s."""


@dataclass
class Bands:
    """Tridiagonal operator: ``lower[i]`` is entry ``(i+1, i)``, ``upper[i]`` is ``(i, i+1)``."""
    diag: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    grid: MomentumGrid
    measure: np.ndarray          # sqrt of this multiplies the wavefunction
    defect: np.ndarray           # first-order coefficient left after symmetrisation

    @property
    def asymmetry(self) -> float:
        num = math.sqrt(2.0) * np.linalg.norm(self.upper - self.lower)
        den = math.sqrt(np.sum(self.diag ** 2) + np.sum(self.upper ** 2) + np.sum(self.lower ** 2))
        return float(num / den)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)

    def symmetric(self):
        return self.diag, 0.5 * (self.upper + self.lower)


def _oscillator_prefactor(params: DeformationParams) -> float:
    return 0.5 * params.mass * params.omega ** 2 * params.hbar ** 2


def coefficients_1d(params: DeformationParams):
    """Polynomials ``(a2, a1, a0)`` of ``H = p^2/2m + m omega^2 q^2 / 2`` in one dimension.

    ``q^2 = -hbar^2 [f^2 d^2 + (f f' + 2 f g) d + (f g' + g^2)]`` with
    ``f = 1 + d2 p^2`` and ``g = kappa p``.
    """
    d2, kappa = float(params.delta_sq), float(params.kappa)
    f = Polynomial([1.0, 0.0, d2])
    g = Polynomial([0.0, kappa])
    c = _oscillator_prefactor(params)
    a2 = -c * f * f
    a1 = -c * (f * f.deriv() + 2 * f * g)
    a0 = Polynomial([0.0, 0.0, 0.5 / params.mass]) - c * (f * g.deriv() + g * g)
    return a2, a1, a0


def _log_weight_derivs(params: DeformationParams, dimension: int, p):
    """``(log W)'`` and ``(log W)''`` in ``p`` for ``W = (1 + d2 p^2)^((N+1)/2 - kappa/d2)``."""
    d2 = float(params.delta_sq)
    amp = (dimension + 1) * d2 - 2 * float(params.kappa)
    f = 1 + d2 * p * p
    return amp * p / f, amp * (1 - d2 * p * p) / (f * f)


def _conjugate(c2, c1, c0, l1, l2):
    """Coefficients of ``s A s^-1`` given ``l1 = (log s)'`` and ``l2 = (log s)''``.

    With ``A = c2 d^2 + c1 d + c0`` and ``u = s^-1 v`` this is the usual
    similarity identity for second-order operators.
    """
    return c2, c1 - 2 * c2 * l1, c0 - c1 * l1 + c2 * (l1 * l1 - l2)


def _to_xi(a2, a2p, a1, a0, m: MapSamples):
    j = m.jac
    b2 = a2 / j ** 2
    b1 = a1 / j - a2 * m.djac / j ** 3
    c2_prime = a2p / j - 2 * a2 * m.djac / j ** 3
    return b2, b1, a0, c2_prime


def _assemble(grid: MomentumGrid, c2_faces, c0, defect, measure) -> Bands:
    h = grid.h
    h2 = h * h
    diag = -(c2_faces[1:] + c2_faces[:-1]) / h2 + c0
    # Dirichlet through an odd ghost value at each end
    diag[0] -= c2_faces[0] / h2 - defect[0] / (2 * h)
    diag[-1] -= c2_faces[-1] / h2 + defect[-1] / (2 * h)
    inner = c2_faces[1:-1] / h2
    upper = inner + defect[:-1] / (2 * h)
    lower = inner - defect[1:] / (2 * h)
    return Bands(diag, upper, lower, grid, measure, defect)


def hamiltonian_bands_1d(params: DeformationParams, grid: MomentumGrid) -> Bands:
    if grid.kind not in ("compact_theta", "truncated_p"):
        raise ValueError(f"one-dimensional Hamiltonian needs a compact_theta or truncated_p grid, got {grid.kind}")
    a2, a1, a0 = coefficients_1d(params)
    a2p = a2.deriv()
    m = grid.nodes
    p = m.p
    b2, b1, b0, c2_prime = _to_xi(a2(p), a2p(p), a1(p), a0(p), m)
    lw1, lw2 = _log_weight_derivs(params, 1, p)
    # s = sqrt(J / W)
    l1 = 0.5 * (m.dlogjac - lw1 * m.jac)
    l2 = 0.5 * (m.d2logjac - lw2 * m.jac ** 2 - lw1 * m.djac)
    c2, c1, c0 = _conjugate(b2, b1, b0, l1, l2)
    faces = grid.sample(grid.xi_mid)
    with np.errstate(over="ignore", invalid="ignore"):
        c2_faces = a2(faces.p) / faces.jac ** 2
    c2_faces = _finite_faces(c2_faces, params)
    measure = m.jac / np.exp(_log_w(params, 1, p))
    return _assemble(grid, c2_faces, c0, c1 - c2_prime, measure)


def _finite_faces(c2_faces, params):
    # at theta = +-pi/2 the ratio a2/J^2 tends to -hbar^2 m omega^2 d2 / 2
    bad = ~np.isfinite(c2_faces)
    if np.any(bad):
        c2_faces = c2_faces.copy()
        c2_faces[bad] = -_oscillator_prefactor(params) * float(params.delta_sq)
    return c2_faces


def _log_w(params: DeformationParams, dimension: int, p):
    d2, kappa = float(params.delta_sq), float(params.kappa)
    lb = np.log1p(d2 * p * p)
    over = p * p if d2 == 0 else lb / d2
    return 0.5 * (dimension + 1) * lb - kappa * over


def hamiltonian_bands_radial(params: DeformationParams, grid: MomentumGrid, s: int,
                             factored: bool = True) -> Bands:
    """Radial Hamiltonian for angular momentum ``s`` acting on ``Pi(p)``.

    With ``factored`` the unknown is ``p^-s Pi``; the unfactored form is only
    accepted for ``s = 0`` because the centrifugal term is unbounded at the
    origin otherwise.
    """
    if grid.kind != "radial_p":
        raise ValueError("radial Hamiltonian needs a radial_p grid")
    if s > 0 and not factored:
        raise OriginSingularityError(f"s = {s} requires factoring p^s out of the radial function")
    d2, kappa = float(params.delta_sq), float(params.kappa)
    c = _oscillator_prefactor(params)
    m = grid.nodes
    p = m.p
    f = 1 + d2 * p * p
    a2 = -c * f * f
    a2p = -c * 4 * d2 * p * f
    a1 = -c * f * (1 + (kappa + d2) * p * p) * 2 / p
    a0 = p * p / (2 * params.mass) - c * (-s * (s + 1) / (p * p) + kappa * (3 + (kappa + d2) * p * p))
    b2, b1, b0, c2_prime = _to_xi(a2, a2p, a1, a0, m)
    j = m.jac
    # d/dxi log p and its derivative
    lp1 = j / p
    lp2 = m.djac / p - (j / p) ** 2
    if s:
        b2, b1, b0 = _conjugate(b2, b1, b0, -s * lp1, -s * lp2)
    lw1, lw2 = _log_weight_derivs(params, 3, p)
    k = 2 * s + 2
    l1 = 0.5 * (m.dlogjac + k * lp1 - lw1 * j)
    l2 = 0.5 * (m.d2logjac + k * lp2 - lw2 * j ** 2 - lw1 * m.djac)
    c2, c1, c0 = _conjugate(b2, b1, b0, l1, l2)
    faces = grid.sample(grid.xi_mid)
    with np.errstate(over="ignore", invalid="ignore"):
        fp = faces.p
        c2_faces = -c * (1 + d2 * fp * fp) ** 2 / faces.jac ** 2
    c2_faces = _finite_faces(c2_faces, params)
    measure = j * p ** k / np.exp(_log_w(params, 3, p))
    return _assemble(grid, c2_faces, c0, c1 - c2_prime, measure)


def discretize_hamiltonian_1d(params: DeformationParams, grid: MomentumGrid, kappa=None) -> np.ndarray:
    """Dense symmetric-frame Hamiltonian; ``kappa`` overrides ``params.kappa``."""
    if kappa is not None:
        params = params.with_(kappa=kappa)
    return hamiltonian_bands_1d(params, grid).dense()


def discretize_hamiltonian_radial(params: DeformationParams, s: int, grid: MomentumGrid, kappa=None,
                                  factored: bool = True) -> np.ndarray:
    if kappa is not None:
        params = params.with_(kappa=kappa)
    return hamiltonian_bands_radial(params, grid, s, factored).dense()


def fourier_derivative_matrix(n: int, period: float = math.pi) -> np.ndarray:
    """Spectral first-derivative matrix for ``n`` (even) equispaced periodic nodes."""
    if n % 2:
        raise ValueError("use an even number of nodes")
    k = np.arange(n)
    diff = k[:, None] - k[None, :]
    with np.errstate(divide="ignore"):
        mat = 0.5 * (-1.0) ** diff / np.tan(np.pi * diff / n)
    np.fill_diagonal(mat, 0.0)
    return mat * (2 * math.pi / period)


def discretize_position_1d(params: DeformationParams, n: int = 256) -> np.ndarray:
    """``q`` as a Hermitian matrix on ``theta = arctan(delta p)`` in ``(-pi/2, pi/2)``.

    In the symmetric frame ``q = i hbar delta d/dtheta`` for every kappa, and
    ``theta`` is taken periodic with period ``pi``.
    """
    if n < 16:
        raise ValueError("position discretisation needs at least 16 nodes")
    delta = params.delta
    if delta <= 0:
        raise ValueError("position lattice needs delta > 0")
    return 1j * params.hbar * delta * fourier_derivative_matrix(n)


@dataclass
class PositionSpectrum:
    eigenvalues: np.ndarray
    distinct: np.ndarray
    multiplicity: np.ndarray
    spacing: np.ndarray
    residual_norms: Optional[np.ndarray] = None


def cluster(values: np.ndarray, tol: float):
    values = np.sort(values)
    groups = [[values[0]]]
    for v in values[1:]:
        if v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return np.array([np.mean(g) for g in groups]), np.array([len(g) for g in groups])
