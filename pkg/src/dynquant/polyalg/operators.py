"""Normal-ordered differential operators with polynomial coefficients.

An operator is stored as ``{alpha: c_alpha}`` meaning ``sum c_alpha(p) d^alpha``
with every coefficient to the left of every derivative.  Composition
re-normal-orders with the multivariate Leibniz rule, so two operators are
equal exactly when their term maps are equal.
"""
from __future__ import annotations

from itertools import product
from math import comb
from typing import Dict

from .gaussian import GaussianRational
from .poly import NVARS, ZERO_EXP, Exponent, GaussianRationalPoly, unit_exponent


def _sub_indices(alpha: Exponent):
    for gamma in product(*(range(a + 1) for a in alpha)):
        weight = 1
        for a, g in zip(alpha, gamma):
            weight *= comb(a, g)
        yield gamma, weight


class DiffOperator:
    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Exponent, object] = None):
        clean = {}
        for alpha, coeff in (terms or {}).items():
            coeff = GaussianRationalPoly.coerce(coeff)
            if coeff:
                clean[tuple(alpha)] = coeff
        self._terms = clean

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    # constructors
    @classmethod
    def identity(cls) -> "DiffOperator":
        return cls({ZERO_EXP: 1})

    @classmethod
    def zero(cls) -> "DiffOperator":
        return cls()

    @classmethod
    def multiply(cls, poly) -> "DiffOperator":
        return cls({ZERO_EXP: GaussianRationalPoly.coerce(poly)})

    @classmethod
    def variable(cls, var: int) -> "DiffOperator":
        return cls.multiply(GaussianRationalPoly.variable(var))

    @classmethod
    def partial(cls, var: int, times: int = 1) -> "DiffOperator":
        return cls({unit_exponent(var, times): 1})

    @property
    def terms(self) -> Dict[Exponent, GaussianRationalPoly]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def order(self) -> int:
        return max((sum(a) for a in self._terms), default=-1)

    def coefficient_degree(self) -> int:
        return max((c.degree() for c in self._terms.values()), default=-1)

    def coefficient(self, alpha: Exponent) -> GaussianRationalPoly:
        return self._terms.get(tuple(alpha), GaussianRationalPoly())

    @staticmethod
    def coerce(x) -> "DiffOperator":
        if isinstance(x, DiffOperator):
            return x
        return DiffOperator.multiply(x)

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            try:
                other = DiffOperator.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __neg__(self):
        return DiffOperator._raw({a: -c for a, c in self._terms.items()})

    def __add__(self, other):
        other = DiffOperator.coerce(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            s = out.get(a)
            s = c if s is None else s + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return DiffOperator._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-DiffOperator.coerce(other))

    def __rsub__(self, other):
        return DiffOperator.coerce(other) - self

    def scale(self, factor) -> "DiffOperator":
        """Left multiplication by a scalar or polynomial."""
        factor = GaussianRationalPoly.coerce(factor)
        return DiffOperator({a: factor * c for a, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, DiffOperator):
            return self.compose(other)
        if isinstance(other, GaussianRationalPoly):
            return self.compose(DiffOperator.multiply(other))
        try:
            factor = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(factor)

    def __rmul__(self, other):
        if isinstance(other, GaussianRationalPoly):
            return self.scale(other)
        try:
            factor = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.scale(factor)

    __matmul__ = __mul__

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """``self o other``, normal ordered."""
        out: Dict[Exponent, GaussianRationalPoly] = {}
        for alpha, c in self._terms.items():
            for beta, d in other._terms.items():
                for gamma, weight in _sub_indices(alpha):
                    dd = d.diff_multi(gamma)
                    if not dd:
                        continue
                    key = tuple(alpha[i] - gamma[i] + beta[i] for i in range(NVARS))
                    term = c * dd
                    if weight != 1:
                        term = term * weight
                    prev = out.get(key)
                    out[key] = term if prev is None else prev + term
        return DiffOperator._raw({a: c for a, c in out.items() if c})

    def apply(self, f) -> GaussianRationalPoly:
        f = GaussianRationalPoly.coerce(f)
        total = GaussianRationalPoly()
        for alpha, c in self._terms.items():
            df = f.diff_multi(alpha)
            if df:
                total = total + c * df
        return total

    __call__ = apply

    def to_string(self, var: str = "p") -> str:
        if not self._terms:
            return "0"
        parts = []
        for alpha in sorted(self._terms, key=lambda a: (sum(a), a)):
            c = self._terms[alpha].to_string(var)
            ds = "".join(f"d{var}{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(alpha) if k)
            parts.append(f"({c})" + (f"*{ds}" if ds else ""))
        return " + ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"DiffOperator({self.to_string()!r})"


def op_apply(op: DiffOperator, f) -> GaussianRationalPoly:
    return op.apply(f)


def op_commutator(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a.compose(b) - b.compose(a)
