"""Cell-centred momentum grids with an optional nonlinear map ``p = P(xi)``.

Nodes sit at ``lo + (i + 1/2) h`` so halving ``h`` nests exactly and the
endpoints, where Dirichlet conditions are imposed, are never sampled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

KINDS = ("compact_theta", "truncated_p", "radial_p")


@dataclass(frozen=True)
class MapSamples:
    xi: np.ndarray
    p: np.ndarray
    jac: np.ndarray       # dp/dxi
    djac: np.ndarray      # d^2p/dxi^2
    dlogjac: np.ndarray   # d(log dp/dxi)/dxi
    d2logjac: np.ndarray  # second derivative of log dp/dxi


@dataclass(frozen=True)
class MomentumGrid:
    kind: str
    n: int
    lo: float
    hi: float
    map: str = "linear"
    delta: float = 0.0

    @property
    def h(self) -> float:
        return (self.hi - self.lo) / self.n

    @property
    def xi(self) -> np.ndarray:
        return self.lo + (np.arange(self.n) + 0.5) * self.h

    @property
    def xi_mid(self) -> np.ndarray:
        """Cell faces, including both boundary faces (``n + 1`` points)."""
        return self.lo + np.arange(self.n + 1) * self.h

    def sample(self, xi) -> MapSamples:
        xi = np.asarray(xi, dtype=float)
        if self.map == "linear":
            one = np.ones_like(xi)
            zero = np.zeros_like(xi)
            return MapSamples(xi, xi.copy(), one, zero, zero, zero)
        if self.map == "tan":
            d = self.delta
            t = np.tan(xi)
            sec2 = 1.0 + t * t
            return MapSamples(xi, t / d, sec2 / d, 2 * sec2 * t / d, 2 * t, 2 * sec2)
        raise ValueError(f"unknown map {self.map!r}")

    @property
    def nodes(self) -> MapSamples:
        return self.sample(self.xi)

    @property
    def p(self) -> np.ndarray:
        return self.nodes.p

    def refined(self, factor: int = 2) -> "MomentumGrid":
        return MomentumGrid(self.kind, self.n * factor, self.lo, self.hi, self.map, self.delta)

    def with_size(self, n: int) -> "MomentumGrid":
        return MomentumGrid(self.kind, int(n), self.lo, self.hi, self.map, self.delta)


def make_grid(kind: str, n: int, delta: float = 0.0, p_max: float = None, map: str = None) -> MomentumGrid:
    """Build a grid of ``n`` cells.

    ``compact_theta`` covers ``theta`` in ``(-pi/2, pi/2)`` with ``p = tan(theta)/delta``.
    ``truncated_p`` covers ``[-p_max, p_max]`` linearly.  ``radial_p`` covers
    ``(0, p_max]`` linearly or, with ``map="tan"``, all of ``p > 0``.
    """
    if n < 2:
        raise ValueError("grid needs at least two cells")
    if kind == "compact_theta":
        if delta <= 0:
            raise ValueError("compact_theta needs delta > 0")
        return MomentumGrid(kind, n, -math.pi / 2, math.pi / 2, "tan", delta)
    if kind == "truncated_p":
        p_max = 12.0 if p_max is None else float(p_max)
        return MomentumGrid(kind, n, -p_max, p_max, "linear", delta)
    if kind == "radial_p":
        map = map or ("tan" if delta > 0 else "linear")
        if map == "tan":
            if delta <= 0:
                raise ValueError("tan map needs delta > 0")
            return MomentumGrid(kind, n, 0.0, math.pi / 2, "tan", delta)
        p_max = 12.0 if p_max is None else float(p_max)
        return MomentumGrid(kind, n, 0.0, p_max, "linear", delta)
    raise ValueError(f"unknown grid kind {kind!r}; expected one of {KINDS}")
