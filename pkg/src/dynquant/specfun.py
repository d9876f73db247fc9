"""Orthogonal polynomials by three-term recurrence, log-gamma and Gauss-Legendre rules.

All polynomial evaluators accept scalars or numpy arrays for ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _check_degree(n: int, name: str = "n"):
    if int(n) != n or n < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")


def _out(value, x):
    return float(value) if np.ndim(x) == 0 else value


def gegenbauer(n: int, a: float, x):
    """C_n^a(x) with C_0 = 1, C_1 = 2 a x."""
    _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return _out(prev, x)
    cur = 2.0 * a * x
    for k in range(1, n):
        prev, cur = cur, (2.0 * (k + a) * x * cur - (k + 2.0 * a - 1.0) * prev) / (k + 1)
    return _out(cur, x)


def jacobi(n: int, a: float, b: float, x):
    """P_n^(a,b)(x), standard normalisation P_n(1) = binom(n + a, n)."""
    _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return _out(prev, x)
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x
    for k in range(1, n):
        s = 2.0 * k + a + b
        c1 = 2.0 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * (a * a - b * b)
        c3 = s * (s + 1) * (s + 2)
        c4 = 2.0 * (k + a) * (k + b) * (s + 2)
        prev, cur = cur, ((c2 + c3 * x) * cur - c4 * prev) / c1
    return _out(cur, x)


def assoc_laguerre(n: int, k: int, x):
    """L_n^k(x) with L_0 = 1, L_1 = 1 + k - x."""
    _check_degree(n)
    _check_degree(k, "k")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return _out(prev, x)
    cur = 1.0 + k - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + k - x) * cur - (j + k) * prev) / (j + 1)
    return _out(cur, x)


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma needs x > 0, got {x!r}")
    return math.lgamma(x)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f, lo: float = -1.0, hi: float = 1.0):
        half = 0.5 * (hi - lo)
        x = lo + half * (self.nodes + 1.0)
        return half * np.sum(self.weights * f(x), axis=-1)

    def mapped(self, lo: float, hi: float):
        """Nodes and weights transplanted to ``[lo, hi]``."""
        half = 0.5 * (hi - lo)
        return lo + half * (self.nodes + 1.0), half * self.weights


def _legendre_with_derivative(n: int, x: np.ndarray):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def gauss_legendre(order: int) -> QuadratureRule:
    if int(order) != order or order < 1:
        raise ValueError("order must be a positive integer")
    n = int(order)
    if n == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]), 1)
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    # Tricomi initial guess for the i-th largest root
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5)) * (1 - (n - 1) / (8.0 * n ** 3))
    for _ in range(100):
        p, dp = _legendre_with_derivative(n, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-16:
            break
    p, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    nodes = np.concatenate([-x, x[::-1][n % 2:]]) if n % 2 else np.concatenate([-x, x[::-1]])
    weights = np.concatenate([w, w[::-1][n % 2:]]) if n % 2 else np.concatenate([w, w[::-1]])
    if n % 2:
        nodes[m - 1] = 0.0
    return QuadratureRule(nodes, weights, n)
