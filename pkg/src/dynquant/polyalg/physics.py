"""Position, momentum, Lorentz and background-space operators, and the
commutator identity suite they are checked against."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..params import DeformationParams, SpaceTimeSignature
from .gaussian import GaussianRational, I
from .operators import DiffOperator, op_commutator
from .poly import Exponent, GaussianRationalPoly, monomials

SPATIAL = (1, 2, 3)


def exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def levi_civita(j: int, k: int, l: int) -> int:
    """Totally antisymmetric symbol on spatial labels 1..3."""
    if len({j, k, l}) < 3:
        return 0
    perm = (j, k, l)
    return 1 if perm in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def _p(var: int) -> GaussianRationalPoly:
    return GaussianRationalPoly.variable(var)


def momentum_operators(sig: SpaceTimeSignature) -> List[DiffOperator]:
    return [DiffOperator.variable(mu) for mu in sig.axes]


def euler_operator(axes: Sequence[int]) -> DiffOperator:
    """``sum_nu p_nu d/dp_nu`` over ``axes`` (plain sum, no metric)."""
    out = DiffOperator.zero()
    for nu in axes:
        out = out + DiffOperator({tuple(1 if i == nu else 0 for i in range(4)): _p(nu)})
    return out


def build_position_operators(params: DeformationParams, sig: SpaceTimeSignature,
                             corrupt_q0_sign: bool = False) -> List[DiffOperator]:
    """``q_mu = -i hbar (g_mu_nu - d2 p_mu p_nu) d/dp_nu + i hbar kappa p_mu``.

    Returned in the order of ``sig.axes``; for ``dimension == 1`` the single
    operator acts on slot 1.  ``corrupt_q0_sign`` flips the sign of the
    derivative bracket of the time component (negative-control hook).
    """
    if sig.dimension not in (1, 4):
        raise ValueError(f"position operators are built for N = 1 or 4, not {sig.dimension}")
    hbar, d2, kappa = exact(params.hbar), exact(params.delta_sq), exact(params.kappa)
    ih = I * hbar
    ops = []
    for mu in sig.axes:
        terms = {}
        for nu in sig.axes:
            coeff = GaussianRationalPoly.constant(sig.g(mu, nu)) - _p(mu) * _p(nu) * d2
            if mu == 0 and corrupt_q0_sign:
                coeff = -coeff
            alpha = tuple(1 if i == nu else 0 for i in range(4))
            terms[alpha] = coeff * (-ih)
        op = DiffOperator(terms) + DiffOperator.multiply(_p(mu) * (ih * kappa))
        ops.append(op)
    return ops


def build_lorentz_generators(params: DeformationParams,
                             sig: SpaceTimeSignature = SpaceTimeSignature(4)
                             ) -> Tuple[List[DiffOperator], List[DiffOperator]]:
    """Rotation generators ``L_j = eps_jkl q_k p_l`` and boosts ``M_k = q_k p_0 - q_0 p_k``.

    Built by composing the position operators with momenta, so the
    kappa/delta cancellation is a property of the result, not an assumption.
    """
    if not sig.has_time:
        raise ValueError("Lorentz generators need the four-dimensional signature")
    q = dict(zip(sig.axes, build_position_operators(params, sig)))
    p = {mu: DiffOperator.variable(mu) for mu in sig.axes}
    L = []
    for j in SPATIAL:
        op = DiffOperator.zero()
        for k in SPATIAL:
            for l in SPATIAL:
                e = levi_civita(j, k, l)
                if e:
                    op = op + (q[k] @ p[l]) * e
        L.append(op)
    M = [q[k] @ p[0] - q[0] @ p[k] for k in SPATIAL]
    return L, M


def explicit_lorentz_generators(hbar=1) -> Tuple[List[DiffOperator], List[DiffOperator]]:
    """The undeformed closed forms ``-i hbar eps p_k d_l`` and ``i hbar (p0 d_k + p_k d_0)``."""
    ih = I * exact(hbar)
    L = []
    for j in SPATIAL:
        op = DiffOperator.zero()
        for k in SPATIAL:
            for l in SPATIAL:
                e = levi_civita(j, k, l)
                if e:
                    op = op + DiffOperator.variable(k) @ DiffOperator.partial(l) * (-ih * e)
        L.append(op)
    M = [(DiffOperator.variable(0) @ DiffOperator.partial(k)
          + DiffOperator.variable(k) @ DiffOperator.partial(0)) * ih for k in SPATIAL]
    return L, M


def build_background_operators(params: DeformationParams,
                               sig: SpaceTimeSignature = SpaceTimeSignature(4)) -> List[DiffOperator]:
    """Background-space operators ``zeta_mu`` in the variables ``x_mu`` (same slots).

    ``zeta_mu = x_mu + hbar^2 d2 d_mu (x_nu d_nu) + hbar^2 (kappa - N d2) d_mu``.
    """
    hbar, d2, kappa = exact(params.hbar), exact(params.delta_sq), exact(params.kappa)
    n = sig.dimension
    h2 = hbar * hbar
    euler = euler_operator(sig.axes)
    ops = []
    for mu in sig.axes:
        d = DiffOperator.partial(mu)
        op = DiffOperator.variable(mu) + (d @ euler) * (h2 * d2) + d * (h2 * (kappa - n * d2))
        ops.append(op)
    return ops


def background_image(op: DiffOperator, hbar=1) -> DiffOperator:
    """Image of a momentum-space operator under the background-space substitution.

    ``p_k -> -i hbar d/dx_k``, ``d/dp_k -> -(i/hbar) x_k``,
    ``p_0 -> i hbar d/dx_0``, ``d/dp_0 -> (i/hbar) x_0``.  The substitution
    preserves commutators, so images obey the momentum-space algebra.
    """
    hbar = exact(hbar)
    p_image = {0: DiffOperator.partial(0) * (I * hbar)}
    d_image = {0: DiffOperator.variable(0) * (I / hbar)}
    for k in SPATIAL:
        p_image[k] = DiffOperator.partial(k) * (-I * hbar)
        d_image[k] = DiffOperator.variable(k) * (-I / hbar)

    def power(table, exp):
        out = DiffOperator.identity()
        for var, k in enumerate(exp):
            for _ in range(k):
                out = out @ table[var]
        return out

    result = DiffOperator.zero()
    for alpha, coeff in op.items():
        right = power(d_image, alpha)
        for exp, c in coeff.items():
            result = result + (power(p_image, exp) @ right) * c
    return result


@dataclass
class IdentityReport:
    name: str
    lhs: str
    rhs: str
    max_degree: int
    residuals: List[Tuple[Exponent, GaussianRationalPoly]] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def residual_count(self) -> int:
        return len(self.residuals)

    @property
    def holds(self) -> bool:
        return not self.residuals

    @property
    def first_failing_monomial(self) -> Optional[str]:
        if not self.residuals:
            return None
        exp, _ = self.residuals[0]
        return GaussianRationalPoly.monomial(exp).to_string() if any(exp) else "1"

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "max_degree": self.max_degree,
            "residual_count": self.residual_count,
        }
        if self.residuals:
            out["first_failing_monomial"] = self.first_failing_monomial
        if self.params:
            out["params"] = {k: str(v) for k, v in self.params.items()}
        return out


def verify_identity(lhs: DiffOperator, rhs: DiffOperator, max_degree: int,
                    axes: Sequence[int] = (0, 1, 2, 3), name: str = "",
                    lhs_label: str = None, rhs_label: str = None) -> IdentityReport:
    """Apply ``lhs - rhs`` to every monomial of degree <= ``max_degree`` on ``axes``.

    Only nonzero images are recorded; an empty list means the identity holds
    on that graded basis.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    diff = lhs - rhs
    report = IdentityReport(name, lhs_label or str(lhs), rhs_label or str(rhs), max_degree)
    if diff.is_zero():
        return report
    for exp in monomials(axes, max_degree):
        image = diff.apply(GaussianRationalPoly.monomial(exp))
        if image:
            report.residuals.append((exp, image))
    return report


def _lhs_rhs_table(params: DeformationParams, corrupt_q0_sign: bool = False,
                   printed: bool = False):
    """Yield ``(name, label_lhs, lhs, label_rhs, rhs)`` for the four-dimensional algebra."""
    sig = SpaceTimeSignature(4)
    hbar, d2 = exact(params.hbar), exact(params.delta_sq)
    ih = I * hbar
    q = dict(zip(sig.axes, build_position_operators(params, sig, corrupt_q0_sign)))
    p = {mu: DiffOperator.variable(mu) for mu in sig.axes}
    L_list, M_list = build_lorentz_generators(params, sig)
    L = dict(zip(SPATIAL, L_list))
    M = dict(zip(SPATIAL, M_list))

    def eps_sum(j, k, table, factor):
        out = DiffOperator.zero()
        for l in SPATIAL:
            e = levi_civita(j, k, l)
            if e:
                out = out + table[l] * (factor * e)
        return out

    for mu in sig.axes:
        for nu in sig.axes:
            rhs = DiffOperator.multiply(
                (GaussianRationalPoly.constant(sig.g(mu, nu)) - _p(mu) * _p(nu) * d2) * (-ih))
            yield "q_p", f"[q{mu},p{nu}]", op_commutator(q[mu], p[nu]), \
                f"-i hbar (g{mu}{nu} - d2 p{mu} p{nu})", rhs
    for mu in sig.axes:
        for nu in sig.axes:
            yield "p_p", f"[p{mu},p{nu}]", op_commutator(p[mu], p[nu]), "0", DiffOperator.zero()
    for j in SPATIAL:
        for k in SPATIAL:
            yield "L_L", f"[L{j},L{k}]", op_commutator(L[j], L[k]), \
                f"i hbar eps_{j}{k}l L_l", eps_sum(j, k, L, ih)
    for j in SPATIAL:
        for k in SPATIAL:
            if printed:
                yield "M_M", f"[M{j},M{k}]", op_commutator(M[j], M[k]), \
                    f"-i hbar eps_{j}{k}l M_l", eps_sum(j, k, M, -ih)
            else:
                yield "M_M", f"[M{j},M{k}]", op_commutator(M[j], M[k]), \
                    f"-i hbar eps_{j}{k}l L_l", eps_sum(j, k, L, -ih)
    for j in SPATIAL:
        for k in SPATIAL:
            yield "L_M", f"[L{j},M{k}]", op_commutator(L[j], M[k]), \
                f"i hbar eps_{j}{k}l M_l", eps_sum(j, k, M, ih)
    for j in SPATIAL:
        for k in SPATIAL:
            yield "q_q", f"[q{j},q{k}]", op_commutator(q[j], q[k]), \
                f"i hbar d2 eps_{j}{k}l L_l", eps_sum(j, k, L, ih * d2)
    for k in SPATIAL:
        if printed:
            yield "q0_q", f"[q0,q{k}]", op_commutator(q[0], q[k]), f"i hbar d2 M{k}", M[k] * (ih * d2)
        else:
            yield "q0_q", f"[q0,q{k}]", op_commutator(q[0], q[k]), f"-i hbar d2 M{k}", M[k] * (-ih * d2)
    for j in SPATIAL:
        for k in SPATIAL:
            yield "q_L", f"[q{j},L{k}]", op_commutator(q[j], L[k]), \
                f"i hbar eps_{j}{k}l q_l", eps_sum(j, k, q, ih)
    for j in SPATIAL:
        for k in SPATIAL:
            yield "p_L", f"[p{j},L{k}]", op_commutator(p[j], L[k]), \
                f"i hbar eps_{j}{k}l p_l", eps_sum(j, k, p, ih)


def algebra_identities(params: DeformationParams, max_degree: int = 6,
                       corrupt_q0_sign: bool = False,
                       printed: bool = False) -> List[IdentityReport]:
    """Check the full commutator table for one parameter set.

    The boost-boost and time-space rows use the forms that follow from the
    operator definitions: ``[M_j, M_k] = -i hbar eps_jkl L_l`` and
    ``[q_0, q_k] = -i hbar d2 M_k``.  ``printed=True`` swaps in the
    alternative right-hand sides ``-i hbar eps_jkl M_l`` and ``+i hbar d2 M_k``,
    which do not hold.
    """
    meta = {"delta_sq": exact(params.delta_sq), "kappa": exact(params.kappa),
            "hbar": exact(params.hbar)}
    reports = []
    for name, llabel, lhs, rlabel, rhs in _lhs_rhs_table(params, corrupt_q0_sign, printed):
        rep = verify_identity(lhs, rhs, max_degree, name=name, lhs_label=llabel, rhs_label=rlabel)
        rep.params = meta
        reports.append(rep)
    return reports


DEFAULT_DELTA_SQ = (Fraction(0), Fraction(1), Fraction(1, 3))
DEFAULT_KAPPA_FACTORS = (Fraction(0), Fraction(1), Fraction(5, 2))


def run_algebra_suite(max_degree: int = 6, delta_sq_values=DEFAULT_DELTA_SQ,
                      kappa_factors=DEFAULT_KAPPA_FACTORS, hbar=1,
                      corrupt_q0_sign: bool = False, printed: bool = False) -> List[IdentityReport]:
    """Every identity for every ``(delta_sq, kappa = factor * delta_sq)`` pair."""
    reports = []
    for d2 in delta_sq_values:
        for factor in kappa_factors:
            params = DeformationParams(hbar=exact(hbar), delta_sq_override=exact(d2),
                                       kappa=exact(factor) * exact(d2))
            reports.extend(algebra_identities(params, max_degree, corrupt_q0_sign, printed))
    return reports
