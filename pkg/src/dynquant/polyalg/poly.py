"""Sparse polynomials in four variables with Gaussian-rational coefficients."""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Dict, Iterable, Iterator, Tuple

from .gaussian import GaussianRational

NVARS = 4
Exponent = Tuple[int, int, int, int]
ZERO_EXP: Exponent = (0, 0, 0, 0)


def unit_exponent(var: int, power: int = 1) -> Exponent:
    e = [0] * NVARS
    e[var] = power
    return tuple(e)


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


class GaussianRationalPoly:
    """Immutable polynomial; ``terms`` never stores a zero coefficient.

    >>> p1 = GaussianRationalPoly.variable(1)
    >>> str(p1 * p1 + 2)
    '2 + p1^2'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Dict[Exponent, object] = None):
        clean = {}
        for exp, coeff in (terms or {}).items():
            if len(exp) != NVARS or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp!r}")
            coeff = GaussianRational.coerce(coeff)
            if coeff:
                clean[tuple(exp)] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exponent, GaussianRational]) -> "GaussianRationalPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "GaussianRationalPoly":
        return cls({ZERO_EXP: c})

    @classmethod
    def variable(cls, var: int) -> "GaussianRationalPoly":
        return cls({unit_exponent(var): 1})

    @classmethod
    def monomial(cls, exp: Exponent, coeff=1) -> "GaussianRationalPoly":
        return cls({tuple(exp): coeff})

    @property
    def terms(self) -> Dict[Exponent, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def coefficient(self, exp: Exponent) -> GaussianRational:
        return self._terms.get(tuple(exp), GaussianRational())

    @staticmethod
    def coerce(x) -> "GaussianRationalPoly":
        if isinstance(x, GaussianRationalPoly):
            return x
        return GaussianRationalPoly.constant(x)

    def __eq__(self, other):
        try:
            other = GaussianRationalPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return GaussianRationalPoly._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        other = GaussianRationalPoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return GaussianRationalPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-GaussianRationalPoly.coerce(other))

    def __rsub__(self, other):
        return GaussianRationalPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = GaussianRationalPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Exponent, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _add_exp(e1, e2)
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return GaussianRationalPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = GaussianRationalPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, var: int, times: int = 1) -> "GaussianRationalPoly":
        """Partial derivative ``times`` times with respect to variable ``var``."""
        if times == 0:
            return self
        out = {}
        for e, c in self._terms.items():
            k = e[var]
            if k < times:
                continue
            factor = 1
            for j in range(times):
                factor *= k - j
            new = list(e)
            new[var] = k - times
            out[tuple(new)] = c * factor
        return GaussianRationalPoly._raw(out)

    def diff_multi(self, alpha: Exponent) -> "GaussianRationalPoly":
        out = self
        for var, times in enumerate(alpha):
            if times:
                out = out.diff(var, times)
            if not out:
                break
        return out

    def evaluate(self, point) -> complex:
        total = 0j
        for e, c in self._terms.items():
            term = complex(c)
            for x, k in zip(point, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def to_string(self, var: str = "p") -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, key=lambda e: (sum(e), e)):
            c = self._terms[e]
            factors = [f"{var}{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(c) + "*" + "*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"GaussianRationalPoly({self.to_string()!r})"


def monomials(axes: Iterable[int], max_degree: int) -> Iterator[Exponent]:
    """All exponents of total degree <= ``max_degree`` supported on ``axes``."""
    axes = tuple(axes)
    for degree in range(max_degree + 1):
        for combo in combinations_with_replacement(axes, degree):
            e = [0] * NVARS
            for var in combo:
                e[var] += 1
            yield tuple(e)
