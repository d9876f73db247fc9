"""Physical parameters, derived deformation scales and the space-time signature.

Fields accept any real number type.  Floats are used by the numerical code;
``fractions.Fraction`` values flow through untouched so the exact operator
algebra can run on the same parameter object.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from numbers import Real
from pathlib import Path
from typing import Optional, Union

Number = Union[int, float, Fraction]

CONFIG_KEYS = ("hbar", "mass", "omega", "ell", "c", "kappa", "delta_sq_override")


class ParameterError(ValueError):
    """Raised for physically invalid parameter sets."""


@dataclass(frozen=True)
class DeformationParams:
    hbar: Number = 1
    mass: Number = 1
    omega: Number = 1
    ell: Number = 0
    c: Number = 1
    kappa: Number = 0
    delta_sq_override: Optional[Number] = None

    def __post_init__(self):
        for name in ("hbar", "mass", "omega", "ell", "c", "kappa"):
            value = getattr(self, name)
            if not isinstance(value, Real) or isinstance(value, bool):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite")
        for name in ("hbar", "mass", "omega", "c"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be positive")
        if self.ell < 0:
            raise ParameterError("ell must be non-negative")
        if self.delta_sq_override is not None and not self.delta_sq_override >= 0:
            raise ParameterError("delta_sq_override must be non-negative")

    @property
    def delta_sq(self) -> Number:
        if self.delta_sq_override is not None:
            return self.delta_sq_override
        return self.ell / (self.mass * self.hbar * self.c)

    @property
    def delta(self) -> float:
        return math.sqrt(self.delta_sq)

    @property
    def eps(self) -> Number:
        return self.omega * self.ell / (2 * self.c)

    def with_(self, **changes) -> "DeformationParams":
        return replace(self, **changes)

    @classmethod
    def from_epsilon(cls, eps: Number, kappa_ratio: Number = 0, **kwargs) -> "DeformationParams":
        """Parameters with ``omega*ell/(2c) == eps``; kappa given in units of delta_sq."""
        base = cls(**kwargs)
        ell = 2 * base.c * eps / base.omega
        params = replace(base, ell=ell)
        return replace(params, kappa=kappa_ratio * params.delta_sq)


@dataclass(frozen=True)
class SpaceTimeSignature:
    """Diagonal metric on the active momentum axes.

    Axis 0 is time-like and only present for ``dimension == 4``; spatial axes
    are 1..3.  Operators always live on four exponent slots, the signature
    only selects which of them are active.
    """

    dimension: int = 4
    axes: tuple = field(init=False)

    def __post_init__(self):
        if self.dimension not in (1, 2, 3, 4):
            raise ParameterError(f"unsupported space-time dimension {self.dimension}")
        if self.dimension == 4:
            axes = (0, 1, 2, 3)
        else:
            axes = tuple(range(1, self.dimension + 1))
        object.__setattr__(self, "axes", axes)

    @property
    def has_time(self) -> bool:
        return self.dimension == 4

    def g(self, mu: int, nu: int) -> int:
        if mu != nu or mu not in self.axes:
            return 0
        return 1 if mu == 0 else -1


def derive_scales(params: DeformationParams):
    """Return ``(delta_sq, eps)``."""
    return params.delta_sq, params.eps


def uncertainty_bound(energy: float, params: DeformationParams) -> float:
    """Lower bound on the product of position and momentum spreads at energy ``energy``."""
    return abs(params.hbar / 2 + params.ell * energy / (2 * params.c))


def _parse_number(text: str) -> Number:
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_config(text: str) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ParameterError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _parse_number(value)
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"line {lineno}: bad number {value!r}") from None
    return values


def load_params(path: Union[str, Path], **overrides) -> DeformationParams:
    values = parse_config(Path(path).read_text())
    values.update({k: v for k, v in overrides.items() if v is not None})
    return DeformationParams(**values)
