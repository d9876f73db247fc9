"""One test per acceptance criterion; each prints and records a PASS/FAIL line."""
import math
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

from dynquant import analytic as A
from dynquant.numeric import position_spectrum, spectrum_1d, spectrum_radial
from dynquant.params import DeformationParams, SpaceTimeSignature
from dynquant.polyalg import run_algebra_suite
from dynquant.specfun import gauss_legendre

from conftest import ACCEPTANCE_LINES

SIG1 = SpaceTimeSignature(1)
SIG3 = SpaceTimeSignature(3)


def record(k, ok, detail):
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok


def test_criterion_1_exact_algebra():
    start = time.perf_counter()
    reports = run_algebra_suite(6)
    elapsed = time.perf_counter() - start
    failing = [r.name for r in reports if not r.holds]
    combos = {(str(r.params["delta_sq"]), str(r.params["kappa"])) for r in reports}
    # kappa is a multiple of delta^2, so the three delta^2 = 0 sets coincide
    ok = not failing and len(combos) == 7 and elapsed < 120
    printed = run_algebra_suite(6, printed=True)
    printed_fail = sorted({r.name for r in printed if not r.holds})
    record(1, ok, f"{len(reports)} identity checks over {len(combos)} (delta^2, kappa) sets, degree <= 6, "
                  f"{elapsed:.1f}s; printed sign/index forms fail as expected: {printed_fail}")
    assert ok, failing
    assert printed_fail == ["M_M", "q0_q"]


def test_criterion_2_position_lattice():
    params = DeformationParams(hbar=1, delta_sq_override=0.25)
    spec = position_spectrum(params, 256)
    dev = float(np.max(np.abs(spec.spacing - 1.0)))
    ok = dev < 1e-8
    record(2, ok, f"N_g=256, delta=0.5: max spacing deviation {dev:.2e} from 1.0")
    assert ok


def test_criterion_3_spectrum_1d():
    start = time.perf_counter()
    worst = 0.0
    for eps in (0.0, 0.01, 0.05, 0.1):
        params = DeformationParams.from_epsilon(eps)
        rep = spectrum_1d(params, grids=(512, 1024, 2048), n_levels=11)
        exact = np.array([A.energy_1d(n, params) for n in range(11)])
        worst = max(worst, float(np.max(np.abs(rep.extrapolated - exact) / exact)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 300
    record(3, ok, f"max relative error {worst:.2e} over eps in {{0,0.01,0.05,0.1}}, n<=10, {elapsed:.1f}s")
    assert ok


def test_criterion_4_spectrum_3d():
    start = time.perf_counter()
    worst = 0.0
    for eps in (0.0, 0.1):
        params = DeformationParams.from_epsilon(eps)
        for s in (0, 1, 2):
            rep = spectrum_radial(params, s, n_levels=5)
            exact = np.array([A.energy_3d(s, m, params) for m in range(5)])
            worst = max(worst, float(np.max(np.abs(rep.extrapolated - exact) / exact)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-4 and elapsed < 600
    record(4, ok, f"max relative error {worst:.2e} over eps in {{0,0.1}}, s<=2, m'<=4, {elapsed:.1f}s")
    assert ok


def _undeformed_gaps(eps, nmax=10):
    params = DeformationParams.from_epsilon(eps)
    gaps = []
    for n in range(nmax + 1):
        gaps.append(abs(A.energy_1d(n, params) - (n + 0.5)))
        for s in range(n % 2, n + 1, 2):
            gaps.append(abs(A.energy_3d(s, (n - s) // 2, params) - (n + 1.5)))
    return max(gaps)


@pytest.mark.xfail(strict=True, reason="the closed-form energies shift by (n^2+n+1/2) eps to first order, "
                                       "which exceeds 1e-5 at eps=1e-6 once n >= 3")
def test_criterion_5_undeformed_limit():
    gap = _undeformed_gaps(1e-6)
    ok = gap < 1e-5
    record(5, ok, f"max |E - E_0| = {gap:.2e} at eps=1e-6 for n<=10 (bound 1e-5); unattainable as stated, "
                  f"first-order shift is (n^2+n+1/2) eps")
    assert ok


def test_criterion_5_corrected_limit():
    # the continuity the criterion is after: gaps vanish linearly in eps
    assert _undeformed_gaps(1e-8) < 1e-5
    ratio = _undeformed_gaps(1e-6) / _undeformed_gaps(1e-7)
    assert ratio == pytest.approx(10.0, rel=1e-4)


def test_criterion_6_kappa_invariance():
    worst = 0.0
    for eps in (0.01, 0.05, 0.1):
        params = DeformationParams.from_epsilon(eps)
        a = spectrum_1d(params.with_(kappa=0.0)).extrapolated
        b = spectrum_1d(params.with_(kappa=params.delta_sq)).extrapolated
        worst = max(worst, float(np.max(np.abs(a - b) / a)))
    ok = worst < 1e-8
    record(6, ok, f"max relative difference {worst:.2e} between kappa=0 and kappa=delta^2, n<=10")
    assert ok


def test_criterion_7_hermiticity():
    grid = A.hermiticity_grid()
    good, bad = [], []
    for kr in (0.0, 1.0):
        params = DeformationParams(delta_sq_override=0.5, kappa=0.5 * kr)
        wrong = A.wrong_weight(params, SIG1, grid)
        for i in range(20):
            psi = A.gaussian_test_function(2024, 2 * i, grid)
            phi = A.gaussian_test_function(2024, 2 * i + 1, grid)
            good.append(A.hermiticity_defect(params, SIG1, psi, phi, grid))
            bad.append(A.hermiticity_defect(params, SIG1, psi, phi, grid, weight_values=wrong))
    ok = max(good) < 1e-8 and min(bad) > 1e-3
    record(7, ok, f"20 pairs x kappa in {{0, delta^2}}: correct weight max defect {max(good):.2e}, "
                  f"wrong weight min defect {min(bad):.2e}")
    assert ok


def _gram_1d(params, nmax=8):
    th, wt = gauss_legendre(240).mapped(-math.pi / 2, math.pi / 2)
    p = np.tan(th) / params.delta
    w = wt / np.cos(th) ** 2 / params.delta / A.weight(params, SIG1, p)
    vals = np.array([A.eigenfunction_1d(A.oscillator_mode_1d(n, params), p, params) for n in range(nmax + 1)])
    return (vals * w) @ vals.T


def _radial_norms(params, s, mmax=8):
    th, wt = gauss_legendre(240).mapped(0.0, math.pi / 2)
    p = np.tan(th) / params.delta
    vec = np.stack([p, 0 * p, 0 * p], axis=-1)
    w = wt / np.cos(th) ** 2 / params.delta * p ** 2 / A.weight(params, SIG3, vec)
    vals = np.array([A.radial_eigenfunction_3d(A.radial_mode_3d(s, m, params), p, params)
                     for m in range(mmax + 1)])
    return np.diag((vals * w) @ vals.T)


def test_criterion_8_eigenfunctions():
    ortho = 0.0
    norm = 0.0
    for eps in (0.01, 0.1, 1.0):
        for kr in (0.0, 1.0):
            params = DeformationParams.from_epsilon(eps, kappa_ratio=kr)
            gram = _gram_1d(params)
            ortho = max(ortho, float(np.max(np.abs(gram - np.eye(len(gram))))))
            for s in (0, 1, 2):
                norm = max(norm, float(np.max(np.abs(_radial_norms(params, s) - 1))))
    laguerre = [A.ode_residual("laguerre_background", n) for n in range(1, 11)]
    exact_zero = all(isinstance(r, Fraction) and r == 0 for r in laguerre)
    ode = 0.0
    for eps in (0.01, 0.1, 1.0):
        params = DeformationParams.from_epsilon(eps)
        for n in range(9):
            ode = max(ode, A.ode_residual("gegenbauer", A.oscillator_mode_1d(n, params), params=params))
        for s in range(3):
            for m in range(5):
                ode = max(ode, A.ode_residual("jacobi_radial", A.radial_mode_3d(s, m, params), params=params))
    ok = ortho < 1e-8 and norm < 1e-8 and exact_zero and ode < 1e-7
    record(8, ok, f"1D orthonormality {ortho:.2e}, radial norm {norm:.2e}, Laguerre residual exactly zero: "
                  f"{exact_zero}, Gegenbauer/Jacobi residual {ode:.2e}")
    assert ok


def test_criterion_9_n_squared_law():
    eps, n = sympy.symbols("epsilon n", nonnegative=True)
    root = sympy.sqrt(1 + eps ** 2)

    def energy(k):
        # closed form rewritten from the Gegenbauer index a = 1/2 + sqrt(1 + 1/eps^2)/2
        return (k + sympy.Rational(1, 2)) * root + (k * k + k + sympy.Rational(1, 2)) * eps

    law = sympy.simplify(energy(n + 1) - energy(n) - root - 2 * (n + 1) * eps) == 0
    # the library's closed form agrees with the symbolic one
    agree = all(abs(A.energy_1d(k, DeformationParams.from_epsilon(e))
                    - float(energy(k).subs(eps, e))) < 1e-12 for k in range(6) for e in (0.01, 0.3, 2.0))
    exact = all(A.level_spacing_excess_1d(k, Fraction(3, 7)) == 2 * (k + 1) * Fraction(3, 7) for k in range(20))
    ok = law and agree and exact
    record(9, ok, "(E_{n+1} - E_n) - sqrt(1+eps^2) = 2(n+1) eps holds symbolically and in exact arithmetic")
    assert ok
