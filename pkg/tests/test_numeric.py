import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dynquant import analytic as A
from dynquant.numeric import discretize as D
from dynquant.numeric import (AsymmetryError, DomainTruncationError, OrderWarning,
                              OriginSingularityError, count_sign_changes, discretize_hamiltonian_1d,
                              discretize_hamiltonian_radial, discretize_position_1d, eig_herm, eig_sym,
                              make_grid, position_spectrum, richardson, spectrum_1d, spectrum_radial,
                              tridiagonal_eigh)
from dynquant.numeric.eigen import householder_tridiagonalize
from dynquant.params import DeformationParams


def eps_params(eps, kappa_ratio=0.0):
    return DeformationParams.from_epsilon(eps, kappa_ratio=kappa_ratio)


# --- dense eigensolver ----------------------------------------------------------

def test_eig_sym_examples():
    rep = eig_sym(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(rep.eigenvalues, [1.0, 2.0, 3.0])
    rep = eig_sym(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(rep.eigenvalues, [1.0, 3.0], atol=1e-15)
    with pytest.raises(AsymmetryError):
        eig_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        eig_sym(np.ones((2, 3)))


@settings(max_examples=25)
@given(st.integers(2, 40), st.integers(0, 2 ** 32 - 1))
def test_eig_sym_matches_reference(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    a = a + a.T
    rep = eig_sym(a, n_vectors=n)
    ref = np.linalg.eigvalsh(a)
    scale = np.linalg.norm(a)
    assert np.max(np.abs(rep.eigenvalues - ref)) <= 1e-12 * scale
    assert np.sum(rep.eigenvalues) == pytest.approx(np.trace(a), abs=1e-11 * scale)
    assert np.all(np.diff(rep.eigenvalues) >= 0)
    assert np.max(rep.residual_norms) <= 1e-10 * scale


def test_householder_is_similarity():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(12, 12))
    a = a + a.T
    d, e, q = householder_tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(q @ t @ q.T, a, atol=1e-12)
    assert np.allclose(q.T @ q, np.eye(12), atol=1e-13)


def test_tridiagonal_eigh_large():
    n = 2000
    diag = 2.0 * np.ones(n)
    off = -np.ones(n - 1)
    values, vecs, resid = tridiagonal_eigh(diag, off, 5)
    k = np.arange(1, n + 1)
    exact = np.sort(2 - 2 * np.cos(k * np.pi / (n + 1)))
    assert np.allclose(values, exact, atol=1e-12)
    assert np.max(resid) < 1e-10


def test_eig_herm():
    rng = np.random.default_rng(3)
    h = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    h = h + h.conj().T
    rep = eig_herm(h, n_vectors=10)
    assert np.allclose(rep.eigenvalues, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.max(rep.residual_norms) < 1e-10


# --- Richardson ----------------------------------------------------------------

def test_richardson_exact_limit():
    h = np.array([0.1, 0.05, 0.025])
    values = [3.0 + 2.0 * x ** 2 for x in h]
    extrap, err, q = richardson(values)
    assert extrap == pytest.approx(3.0, abs=1e-13)
    assert q == pytest.approx(2.0)
    values = [3.0 + 2.0 * x ** 2 - 5 * x ** 4 for x in h]
    assert richardson(values)[0] == pytest.approx(3.0, abs=1e-13)
    assert richardson(values[1:])[0] == pytest.approx(3.0, abs=1e-5)


def test_richardson_warns_on_wrong_order():
    values = [1.0 + x for x in (0.1, 0.05, 0.025)]
    with pytest.warns(OrderWarning):
        richardson(values)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        richardson([1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        richardson([1.0])


def test_oscillator_ground_state_extrapolates():
    rep = spectrum_1d(DeformationParams(), grids=(128, 256, 512), n_levels=3)
    assert rep.extrapolated[0] == pytest.approx(0.5, abs=1e-8)
    assert np.all(np.abs(rep.apparent_order - 2) < 0.3)


# --- grids ---------------------------------------------------------------------

@pytest.mark.parametrize("kind,delta", [("compact_theta", 0.3), ("truncated_p", 0.0),
                                        ("radial_p", 0.3), ("radial_p", 0.0)])
def test_grid_invariants(kind, delta):
    g = make_grid(kind, 64, delta)
    m = g.nodes
    assert np.all(np.diff(m.p) > 0) and np.all(m.jac > 0)
    assert np.all(np.isfinite(m.p))
    assert len(g.xi_mid) == g.n + 1
    if kind == "radial_p":
        assert m.p[0] > 0
    assert g.refined().n == 128 and g.with_size(32).n == 32


def test_grid_errors():
    with pytest.raises(ValueError):
        make_grid("compact_theta", 64, 0.0)
    with pytest.raises(ValueError):
        make_grid("lattice", 64, 0.1)
    with pytest.raises(ValueError):
        make_grid("truncated_p", 1)


# --- one-dimensional spectra -----------------------------------------------------

def test_undeformed_1d_spectrum():
    rep = spectrum_1d(DeformationParams())
    assert np.max(np.abs(rep.extrapolated - (np.arange(11) + 0.5))) < 1e-6


@pytest.mark.parametrize("eps", [0.01, 0.1, 0.5])
def test_deformed_1d_spectrum(eps):
    p = eps_params(eps)
    rep = spectrum_1d(p)
    exact = np.array([A.energy_1d(n, p) for n in range(11)])
    rel = np.abs(rep.extrapolated - exact) / exact
    assert np.max(rel) < 1e-6
    assert np.all(rep.error_estimate >= 0)
    assert np.all(np.abs(rep.extrapolated - exact) <= rep.error_estimate + 1e-9 * exact)


def test_truncated_and_compact_maps_agree():
    p = eps_params(0.01)
    a = spectrum_1d(p, kind="compact_theta")
    b = spectrum_1d(p, kind="truncated_p", p_max=20.0)
    assert np.max(np.abs(a.extrapolated - b.extrapolated) / a.extrapolated) < 1e-6


def test_truncation_domain_doubling():
    p = DeformationParams()
    small = spectrum_1d(p, grids=(256, 512, 1024), p_max=10.0, n_levels=5)
    large = spectrum_1d(p, grids=(512, 1024, 2048), p_max=20.0, n_levels=5)
    assert np.max(np.abs(small.extrapolated - large.extrapolated)) < 1e-8


def test_domain_truncation_error():
    with pytest.raises(DomainTruncationError):
        spectrum_1d(DeformationParams(), grids=(256, 512), p_max=3.0)


@pytest.mark.parametrize("eps", [0.0, 0.1])
def test_kappa_invariance(eps):
    p = eps_params(eps)
    a = spectrum_1d(p.with_(kappa=0.0), kind="truncated_p" if eps == 0 else None)
    if eps == 0:
        b = spectrum_1d(p.with_(kappa=0.3), kind="truncated_p")
    else:
        b = spectrum_1d(p.with_(kappa=p.delta_sq))
    assert np.max(np.abs(a.extrapolated - b.extrapolated) / a.extrapolated) < 1e-8


def test_eigenvector_nodes():
    p = eps_params(0.1)
    grid = make_grid("compact_theta", 512, p.delta)
    bands = D.hamiltonian_bands_1d(p, grid)
    diag, off = bands.symmetric()
    _, vecs, _ = tridiagonal_eigh(diag, off, 6)
    assert [count_sign_changes(vecs[:, n]) for n in range(6)] == list(range(6))
    # parity: symmetric grid, so the n-th vector is even or odd
    for n in range(6):
        assert np.allclose(vecs[::-1, n], (-1) ** n * vecs[:, n], atol=1e-8)


def test_dense_wrappers_are_symmetric():
    p = eps_params(0.1)
    grid = make_grid("compact_theta", 64, p.delta)
    h = discretize_hamiltonian_1d(p, grid, kappa=0.05)
    assert np.linalg.norm(h - h.T) <= 1e-12 * np.linalg.norm(h)
    r = discretize_hamiltonian_radial(p, 1, make_grid("radial_p", 64, p.delta))
    assert np.linalg.norm(r - r.T) <= 1e-12 * np.linalg.norm(r)
    with pytest.raises(ValueError):
        discretize_hamiltonian_1d(p, make_grid("radial_p", 64, p.delta))


def test_wrong_weight_breaks_symmetry(monkeypatch):
    p = eps_params(0.1, 1.0)
    grid = make_grid("compact_theta", 256, p.delta)
    assert D.hamiltonian_bands_1d(p, grid).asymmetry < 1e-12
    good = D._log_weight_derivs

    def wrong(params, dimension, x):
        l1, l2 = good(params, dimension, x)
        d2 = float(params.delta_sq)
        f = 1 + d2 * x * x
        return l1 - 2 * d2 * x / f, l2 - 2 * d2 * (1 - d2 * x * x) / (f * f)

    monkeypatch.setattr(D, "_log_weight_derivs", wrong)
    bands = D.hamiltonian_bands_1d(p, grid)
    assert bands.asymmetry > 1e-6
    with pytest.raises(AsymmetryError):
        spectrum_1d(p, grids=(256, 512))


# --- radial spectra -------------------------------------------------------------

@pytest.mark.parametrize("s", [0, 1, 2])
def test_undeformed_radial(s):
    rep = spectrum_radial(DeformationParams(), s)
    exact = 2 * np.arange(5) + s + 1.5
    assert np.max(np.abs(rep.extrapolated - exact)) < 1e-6


@pytest.mark.parametrize("s", [0, 1, 2])
@pytest.mark.parametrize("kr", [0.0, 1.0])
def test_deformed_radial(s, kr):
    p = eps_params(0.1, kr)
    rep = spectrum_radial(p, s)
    exact = np.array([A.energy_3d(s, m, p) for m in range(5)])
    assert np.max(np.abs(rep.extrapolated - exact) / exact) < 1e-6


def test_undeformed_degeneracy():
    p = DeformationParams()
    a = spectrum_radial(p, 0).extrapolated
    b = spectrum_radial(p, 2).extrapolated
    assert abs(a[1] - b[0]) < 1e-8
    # s = 1 carries odd n only; its n = 3 level meets s = 3 at m' = 0
    c = spectrum_radial(p, 1).extrapolated
    d = spectrum_radial(p, 3).extrapolated
    assert abs(c[1] - d[0]) < 1e-6


def test_deformation_splits_degeneracy():
    p = eps_params(0.1)
    a = spectrum_radial(p, 0).extrapolated
    b = spectrum_radial(p, 2).extrapolated
    assert abs(b[0] - a[1]) > 0.1


def test_origin_singularity():
    p = eps_params(0.1)
    grid = make_grid("radial_p", 64, p.delta)
    with pytest.raises(OriginSingularityError):
        D.hamiltonian_bands_radial(p, grid, 1, factored=False)
    bands = D.hamiltonian_bands_radial(p, grid, 0, factored=False)
    assert bands.asymmetry < 1e-12


def test_refinement_requires_doubling():
    with pytest.raises(ValueError):
        spectrum_1d(eps_params(0.1), grids=(256, 384))


# --- position operator ------------------------------------------------------------

def test_position_spectrum():
    p = DeformationParams(delta_sq_override=0.25)
    spec = position_spectrum(p, 256)
    assert np.min(np.abs(spec.distinct)) < 1e-10
    assert np.max(np.abs(spec.spacing - 2 * p.delta)) < 1e-8
    assert np.all(spec.residual_norms < 1e-8)
    assert len(spec.distinct) == 255
    zero = np.argmin(np.abs(spec.distinct))
    assert spec.multiplicity[zero] == 2


def test_position_spectrum_scales_with_delta():
    a = position_spectrum(DeformationParams(delta_sq_override=0.25), 64).distinct
    b = position_spectrum(DeformationParams(delta_sq_override=0.0625), 64).distinct
    assert np.allclose(b, a / 2, atol=1e-10)


def test_position_matrix_errors():
    with pytest.raises(ValueError):
        discretize_position_1d(DeformationParams(delta_sq_override=0.25), 8)
    with pytest.raises(ValueError):
        discretize_position_1d(DeformationParams(), 64)
    m = discretize_position_1d(DeformationParams(delta_sq_override=0.25), 32)
    assert np.allclose(m, m.conj().T)
