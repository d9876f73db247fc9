"""Closed-form results: weights, the position lattice, oscillator spectra and
eigenfunctions, and residual checks of the differential equations they solve."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .params import DeformationParams, SpaceTimeSignature
from .specfun import gegenbauer, jacobi, log_gamma


class WeightDomainError(ValueError):
    """The weight base ``1 - d2 g_mu_nu p_mu p_nu`` is not positive."""


# --------------------------------------------------------------------------
# weights and densities

def metric_square(p, sig: SpaceTimeSignature):
    """``g_mu_nu p_mu p_nu``; ``p`` has a trailing axis over ``sig.axes``.

    For ``dimension == 1`` a bare scalar or 1-d array of momenta is accepted.
    """
    p = np.asarray(p, dtype=float)
    if sig.dimension == 1 and (p.ndim == 0 or p.shape[-1] != 1):
        return -p * p
    if p.shape[-1] != sig.dimension:
        raise ValueError(f"expected trailing axis of length {sig.dimension}")
    signs = np.array([sig.g(mu, mu) for mu in sig.axes], dtype=float)
    return np.sum(signs * p * p, axis=-1)


def beta(params: DeformationParams, sig: SpaceTimeSignature) -> float:
    d2 = params.delta_sq
    if d2 <= 0:
        raise ZeroDivisionError("beta is undefined for delta_sq = 0")
    return params.kappa / d2 - (sig.dimension - 1) / 2


@dataclass(frozen=True)
class WeightSpec:
    params: DeformationParams
    sig: SpaceTimeSignature

    @property
    def beta(self) -> float:
        return beta(self.params, self.sig)

    def __call__(self, p):
        return weight(self.params, self.sig, p)


def log_weight(params: DeformationParams, sig: SpaceTimeSignature, p):
    """``log W`` with ``W = (1 - d2 g p p)^(1 - beta)``.

    Written as ``(N+1)/2 log(base) - kappa log(base)/d2`` so that the
    ``d2 -> 0`` limit ``kappa g p p`` is taken exactly.
    """
    d2 = float(params.delta_sq)
    kappa = float(params.kappa)
    s = metric_square(p, sig)
    base = 1.0 - d2 * s
    if np.any(base <= 0):
        raise WeightDomainError("1 - delta_sq * g p p must be positive")
    log_base = np.log1p(-d2 * s)
    log_base_over_d2 = -s if d2 == 0 else log_base / d2
    out = 0.5 * (sig.dimension + 1) * log_base - kappa * log_base_over_d2
    return float(out) if np.ndim(out) == 0 else out


def weight(params: DeformationParams, sig: SpaceTimeSignature, p):
    return np.exp(log_weight(params, sig, p))


def probability_density(params: DeformationParams, sig: SpaceTimeSignature, psi_value, p):
    return np.abs(psi_value) ** 2 / weight(params, sig, p)


# --------------------------------------------------------------------------
# hermiticity of the one-dimensional position operator

_FD8_FIRST = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def fd_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Eighth-order central first derivative; values beyond the ends are taken as zero."""
    padded = np.concatenate([np.zeros(4, dtype=values.dtype), values, np.zeros(4, dtype=values.dtype)])
    n = len(values)
    out = np.zeros_like(values)
    for k, c in enumerate(_FD8_FIRST):
        if c:
            out = out + c * padded[k:k + n]
    return out / h


def apply_position_1d(params: DeformationParams, psi: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """``q psi = i hbar ((1 + d2 p^2) psi' + kappa p psi)`` by finite differences."""
    h = grid[1] - grid[0]
    d2, kappa = float(params.delta_sq), float(params.kappa)
    dpsi = fd_derivative(np.asarray(psi, dtype=complex), h)
    return 1j * params.hbar * ((1 + d2 * grid ** 2) * dpsi + kappa * grid * psi)


def weighted_inner(psi, phi, grid, w):
    h = grid[1] - grid[0]
    return np.sum(np.conj(psi) * phi / w) * h


def hermiticity_defect(params: DeformationParams, sig: SpaceTimeSignature, psi, phi,
                       grid: np.ndarray, weight_values=None) -> float:
    """Relative mismatch of ``(q psi, phi)`` and ``(psi, q phi)`` in the weighted product.

    ``grid`` must be uniform and wide enough for both functions to vanish at
    its ends.  ``weight_values`` overrides the weight (negative controls).
    """
    if sig.dimension != 1:
        raise NotImplementedError("hermiticity_defect is implemented for one dimension")
    grid = np.asarray(grid, dtype=float)
    w = weight(params, sig, grid) if weight_values is None else np.asarray(weight_values, float)
    qpsi = apply_position_1d(params, psi, grid)
    qphi = apply_position_1d(params, phi, grid)
    left = weighted_inner(qpsi, phi, grid, w)
    right = weighted_inner(psi, qphi, grid, w)
    # when both products vanish by symmetry (e.g. psi = phi even) the plain
    # ratio is noise over noise; the floor is sqrt(eps) times the
    # Cauchy-Schwarz scale of the two products
    norm = lambda f: math.sqrt(abs(weighted_inner(f, f, grid, w)))
    scale = norm(qpsi) * norm(phi) + norm(psi) * norm(qphi)
    floor = math.sqrt(np.finfo(float).eps) * scale
    return float(abs(left - right) / max(abs(left) + abs(right), floor, np.finfo(float).tiny))


def wrong_weight(params: DeformationParams, sig: SpaceTimeSignature, grid):
    """Correct weight divided by ``1 + d2 p^2``: equals 1 at kappa = 0, wrong for every kappa."""
    return weight(params, sig, grid) / (1 + float(params.delta_sq) * np.asarray(grid) ** 2)


def gaussian_test_function(seed: int, index: int, grid: np.ndarray) -> np.ndarray:
    """Random complex cubic times a Gaussian, drawn from a Philox stream keyed by ``seed``.

    The stream for ``index`` starts at counter ``index`` so every function is
    reproducible on its own.
    """
    gen = np.random.Generator(np.random.Philox(key=seed, counter=index))
    coeffs = gen.normal(size=4) + 1j * gen.normal(size=4)
    centre = gen.uniform(-1.0, 1.0)
    width = gen.uniform(0.7, 1.3)
    x = np.asarray(grid, dtype=float)
    return np.polyval(coeffs[::-1], x) * np.exp(-0.5 * ((x - centre) / width) ** 2)


def hermiticity_grid(half_width: float = 16.0, step: float = 0.01) -> np.ndarray:
    n = int(round(2 * half_width / step)) + 1
    return np.linspace(-half_width, half_width, n)


# --------------------------------------------------------------------------
# position lattice and oscillator spectra

def position_eigenvalue(n: int, params: DeformationParams) -> float:
    return 2 * n * params.hbar * params.delta


def _root_factor(params: DeformationParams) -> float:
    """``sqrt(1 + (2c/(omega ell))^2)``."""
    eps = float(params.eps)
    if eps == 0:
        return math.inf
    return math.sqrt(1.0 + eps * eps) / eps


def energy_1d(n: int, params: DeformationParams) -> float:
    eps = float(params.eps)
    hw = params.hbar * params.omega
    return hw * ((n + 0.5) * math.sqrt(1 + eps * eps) + (n * n + n + 0.5) * eps)


def energy_3d(s: int, m_prime: int, params: DeformationParams) -> float:
    eps = float(params.eps)
    hw = params.hbar * params.omega
    n = s + 2 * m_prime
    return hw * (n + 1.5) * math.sqrt(1 + eps * eps) + hw * (n * n + 3 * n - s * (s + 1) + 1.5) * eps


def level_spacing_excess_1d(n: int, eps) -> object:
    """``(E_{n+1} - E_n)/(hbar omega) - sqrt(1 + eps^2)`` evaluated on the closed form.

    Works with exact ``Fraction`` input because the square-root parts are
    carried symbolically as coefficients of ``sqrt(1 + eps^2)``.
    """
    def parts(k):  # (rational part, coefficient of sqrt(1+eps^2))
        return ((k * k + k + Fraction(1, 2)) * eps, k + Fraction(1, 2))

    r1, s1 = parts(n + 1)
    r0, s0 = parts(n)
    sqrt_coeff = s1 - s0 - 1
    if sqrt_coeff != 0:
        raise ArithmeticError("spacing does not carry exactly one sqrt(1+eps^2)")
    return r1 - r0


class SigmaRoots(NamedTuple):
    sigma1: float
    sigma2: float
    undeformed: bool = False


def sigma_roots(params: DeformationParams) -> SigmaRoots:
    """Both exponents of ``(1 + d2 p^2)`` in the oscillator ansatz; ``sigma2`` is the physical one.

    At ``ell = 0`` the exponents diverge; the ``undeformed`` flag is set and
    ``(+inf, -inf)`` returned.
    """
    if params.ell == 0 or params.delta_sq == 0:
        return SigmaRoots(math.inf, -math.inf, True)
    root = _root_factor(params)
    shift = -0.25 - params.kappa / (2 * params.delta_sq)
    return SigmaRoots(shift + 0.25 * root, shift - 0.25 * root)


def gamma_root(s: int, params: DeformationParams) -> float:
    """Radial exponent of ``(1 + d2 p^2)``; ``-inf`` at ``ell = 0``."""
    if params.ell == 0 or params.delta_sq == 0:
        return -math.inf
    return -0.25 - s / 2 - params.kappa / (2 * params.delta_sq) - 0.25 * _root_factor(params)


@dataclass(frozen=True)
class OscillatorMode1D:
    n: int
    sigma: float
    a: float


@dataclass(frozen=True)
class RadialMode3D:
    s: int
    m_prime: int
    gamma: float
    a: float
    b: float

    @property
    def n(self) -> int:
        return self.s + 2 * self.m_prime


def oscillator_mode_1d(n: int, params: DeformationParams) -> OscillatorMode1D:
    if n < 0:
        raise ValueError("n must be non-negative")
    roots = sigma_roots(params)
    if roots.undeformed:
        raise ZeroDivisionError("oscillator mode needs ell > 0")
    return OscillatorMode1D(n, roots.sigma2, 0.5 + 0.5 * _root_factor(params))


def radial_mode_3d(s: int, m_prime: int, params: DeformationParams) -> RadialMode3D:
    if s < 0 or m_prime < 0:
        raise ValueError("quantum numbers must be non-negative")
    if params.ell == 0 or params.delta_sq == 0:
        raise ZeroDivisionError("radial mode needs ell > 0")
    return RadialMode3D(s, m_prime, gamma_root(s, params), 0.5 * _root_factor(params), s + 0.5)


def eigenfunction_1d(mode: OscillatorMode1D, p, params: DeformationParams):
    n, a, sigma = mode.n, mode.a, mode.sigma
    delta = params.delta
    log_norm = (a * math.log(2.0) + log_gamma(a)
                + 0.5 * (log_gamma(n + 1) + math.log(n + a) + math.log(delta)
                         - math.log(2 * math.pi) - log_gamma(n + 2 * a)))
    p = np.asarray(p, dtype=float)
    u = delta * p
    base = np.log1p(u * u)
    arg = u / np.sqrt(1 + u * u)
    out = np.exp(log_norm + sigma * base) * gegenbauer(n, a, arg)
    return float(out) if out.ndim == 0 else out


def radial_eigenfunction_3d(mode: RadialMode3D, p, params: DeformationParams):
    """Normalised radial function; the Jacobi polynomial has degree ``m_prime``."""
    m, a, b, s, gam = mode.m_prime, mode.a, mode.b, mode.s, mode.gamma
    delta = params.delta
    log_norm = 0.5 * (math.log(2.0) + math.log(2 * m + a + b + 1) + log_gamma(m + 1)
                      + log_gamma(m + a + b + 1) - log_gamma(m + a + 1) - log_gamma(m + b + 1)) \
        + 1.5 * math.log(delta)
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise ValueError("radial momentum must be non-negative")
    u2 = (delta * p) ** 2
    arg = (u2 - 1) / (u2 + 1)
    out = np.exp(log_norm + gam * np.log1p(u2)) * (delta * p) ** s * jacobi(m, a, b, arg)
    return float(out) if out.ndim == 0 else out


def hermite_function(n: int, p, params: DeformationParams):
    """Undeformed oscillator eigenfunction in momentum space (real convention)."""
    p0 = math.sqrt(params.mass * params.hbar * params.omega)
    x = np.asarray(p, dtype=float) / p0
    h_prev, h = np.ones_like(x), 2 * x
    if n == 0:
        h = h_prev
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    log_norm = -0.5 * (n * math.log(2) + math.lgamma(n + 1) + 0.5 * math.log(math.pi) + math.log(p0))
    return math.exp(log_norm) * h * np.exp(-0.5 * x * x)


# --------------------------------------------------------------------------
# residuals of the reduced differential equations

_FD_SECOND = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def _fd_derivatives(fun, x: np.ndarray, h: float):
    stencil = np.arange(-4, 5)
    samples = np.array([fun(x + k * h) for k in stencil])
    d1 = np.tensordot(_FD8_FIRST, samples, axes=1) / h
    d2 = np.tensordot(_FD_SECOND, samples, axes=1) / (h * h)
    return samples[4], d1, d2


def laguerre_poly_exact(n: int, k: int):
    """L_n^k as a list of exact rational coefficients (ascending powers)."""
    return [Fraction((-1) ** m * math.comb(n + k, n - m), math.factorial(m)) for m in range(n + 1)]


def _poly_deriv(c):
    return [i * c[i] for i in range(1, len(c))]


def _poly_add(*polys):
    out = [Fraction(0)] * max(len(p) for p in polys)
    for p in polys:
        for i, v in enumerate(p):
            out[i] += v
    return out


def _poly_shift(c, k=1):
    return [Fraction(0)] * k + list(c)


def laguerre_background_residual(n: int):
    """Exact residual polynomial of ``eta phi'' + (2 - eta) phi' + (lam/(2 hbar delta) - 1) phi``
    with ``phi = L^1_{n-1}`` and ``lam = 2 n hbar delta`` (so the bracket is ``n - 1``)."""
    if n < 1:
        raise ValueError("background solutions start at n = 1")
    phi = laguerre_poly_exact(n - 1, 1)
    d1 = _poly_deriv(phi) or [Fraction(0)]
    d2 = _poly_deriv(d1) or [Fraction(0)]
    residual = _poly_add(_poly_shift(d2), [2 * c for c in d1], [-c for c in _poly_shift(d1)],
                         [(n - 1) * c for c in phi])
    return residual


def ode_residual(kind: str, mode=None, samples=None, params: Optional[DeformationParams] = None,
                 step: float = 1e-3):
    """Max residual of a reduced equation with its closed-form solution substituted.

    ``laguerre_background`` takes an integer ``mode`` and returns an exact ``Fraction``;
    the other kinds take an ``OscillatorMode1D``/``RadialMode3D`` plus ``params``
    and return the residual normalised by the largest solution value.
    """
    if kind == "laguerre_background":
        return max(abs(c) for c in laguerre_background_residual(int(mode)))
    if params is None:
        raise ValueError(f"{kind} needs params")
    root = _root_factor(params)
    x = np.linspace(-0.9, 0.9, 37) if samples is None else np.asarray(samples, dtype=float)
    hw = params.hbar * params.omega
    eps = float(params.eps)
    if kind == "gegenbauer":
        energy = energy_1d(mode.n, params)
        f, d1, d2 = _fd_derivatives(lambda t: gegenbauer(mode.n, mode.a, t), x, step)
        res = (1 - x * x) * d2 - (2 + root) * x * d1 + (energy / (hw * eps) - 0.5 * (1 + root)) * f
    elif kind == "jacobi_radial":
        energy = energy_3d(mode.s, mode.m_prime, params)
        s = mode.s
        f, d1, d2 = _fd_derivatives(lambda t: jacobi(mode.m_prime, mode.a, mode.b, t), x, step)
        drift = s + 0.5 - 0.5 * root - (2.5 + s + 0.5 * root) * x
        const = energy / (4 * eps * hw) - 0.375 - s / 2 - (0.375 + s / 4) * root
        res = (1 - x * x) * d2 + drift * d1 + const * f
    else:
        raise ValueError(f"unknown residual kind {kind!r}")
    return float(np.max(np.abs(res)) / np.max(np.abs(f)))


# --------------------------------------------------------------------------
# time operator

def artanh(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= 1):
        raise WeightDomainError("artanh needs |x| < 1")
    return 0.5 * np.log((1 + x) / (1 - x))


def time_eigenfunction(lam: float, p, params: DeformationParams, amplitude: complex = 1.0):
    """Eigenfunction of the time component of the position operator; ``p`` is ``(..., 4)``."""
    p = np.asarray(p, dtype=float)
    d2 = float(params.delta_sq)
    if d2 <= 0:
        raise ZeroDivisionError("time eigenfunction needs delta_sq > 0")
    delta = math.sqrt(d2)
    p0 = p[..., 0]
    if np.any(np.abs(delta * p0) >= 1):
        raise WeightDomainError("time eigenfunction needs |delta p0| < 1")
    phase = lam / (params.hbar * delta) * artanh(delta * p0)
    s = metric_square(p, SpaceTimeSignature(4))
    base = 1 - d2 * s
    if np.any(base <= 0):
        raise WeightDomainError("1 - delta_sq * g p p must be positive")
    return amplitude * np.exp(1j * phase - float(params.kappa) / (2 * d2) * np.log(base))


_FD6_FIRST = np.array([-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60])


def apply_time_operator(fun, p, params: DeformationParams, step: float = 1e-3):
    """``q0 f = -i hbar (d0 f - d2 p0 sum_nu p_nu d_nu f) + i hbar kappa p0 f`` by central differences."""
    p = np.asarray(p, dtype=float)
    grads = []
    for nu in range(4):
        acc = 0
        for k, c in zip(range(-3, 4), _FD6_FIRST):
            if c:
                shifted = p.copy()
                shifted[..., nu] += k * step
                acc = acc + c * fun(shifted)
        grads.append(acc / step)
    f = fun(p)
    d2 = float(params.delta_sq)
    p0 = p[..., 0]
    euler = sum(p[..., nu] * grads[nu] for nu in range(4))
    return -1j * params.hbar * (grads[0] - d2 * p0 * euler) + 1j * params.hbar * float(params.kappa) * p0 * f


def time_residual(lam: float, p, params: DeformationParams, step: float = 1e-3) -> float:
    """``max|q0 psi - lam psi| / max|lam psi|`` over sample points (``max|psi|`` when ``lam = 0``)."""
    fun = lambda q: time_eigenfunction(lam, q, params)
    psi = fun(np.asarray(p, dtype=float))
    image = apply_time_operator(fun, p, params, step)
    scale = np.max(np.abs(lam * psi))
    if scale == 0:
        scale = np.max(np.abs(psi))
    return float(np.max(np.abs(image - lam * psi)) / scale)
