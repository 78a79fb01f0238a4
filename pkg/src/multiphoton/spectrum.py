"""Solvable initial Hamiltonians described by their energy function E(n).

Units are hbar = mass = 1 throughout, so H0 = -1/2 d^2/dx^2 + V0(x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import sympy as sp

from .errors import ConfigError, MissingLevel

HARMONIC = "harmonic"
POSCHL_TELLER = "poschl-teller"
CUSTOM = "custom"

KINDS = (HARMONIC, POSCHL_TELLER, CUSTOM)

_ALIASES = {
    "harmonic": HARMONIC,
    "harmonic-oscillator": HARMONIC,
    "harmonicoscillator": HARMONIC,
    "ho": HARMONIC,
    "poschl-teller": POSCHL_TELLER,
    "poschlteller": POSCHL_TELLER,
    "pt": POSCHL_TELLER,
    "custom": CUSTOM,
}

X = sp.Symbol("x", real=True)


@dataclass(frozen=True)
class ModelSpec:
    """An exactly solvable H0 with strictly increasing, infinite discrete spectrum.

    Built-in models evaluate E(n) from their closed form, which also continues
    analytically to negative n (needed for f_m(n - m) at small n).  Custom
    models are a finite table plus an optional tail callable; anything outside
    both raises :class:`MissingLevel`.
    """

    kind: str
    nu: Optional[float] = None
    levels: Optional[tuple] = None
    tail: Optional[Callable[[int], float]] = field(default=None, compare=False)

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).strip().lower().replace("_", "-"))
        if kind is None:
            raise ConfigError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        if kind == POSCHL_TELLER:
            if self.nu is None or not math.isfinite(self.nu) or self.nu <= 1:
                raise ConfigError(f"Poschl-Teller requires nu > 1, got {self.nu!r}")
            object.__setattr__(self, "nu", float(self.nu))
        elif self.nu is not None:
            raise ConfigError("nu is only meaningful for the Poschl-Teller model")
        if kind == CUSTOM:
            if not self.levels:
                raise ConfigError("custom model needs a non-empty levels table")
            levels = tuple(float(e) for e in self.levels)
            if not all(math.isfinite(e) for e in levels):
                raise ConfigError("custom levels must be finite")
            object.__setattr__(self, "levels", levels)
        elif self.levels is not None:
            raise ConfigError("levels are only meaningful for a custom model")

    @classmethod
    def harmonic(cls) -> "ModelSpec":
        return cls(HARMONIC)

    @classmethod
    def poschl_teller(cls, nu: float) -> "ModelSpec":
        return cls(POSCHL_TELLER, nu=nu)

    @classmethod
    def custom(cls, levels: Sequence[float], tail=None) -> "ModelSpec":
        return cls(CUSTOM, levels=tuple(levels), tail=tail)

    def energy(self, n: int) -> float:
        if self.kind == HARMONIC:
            return n + 0.5
        if self.kind == POSCHL_TELLER:
            return 0.5 * (n + self.nu) ** 2
        if 0 <= n < len(self.levels):
            return self.levels[n]
        if n >= 0 and self.tail is not None:
            return float(self.tail(n))
        raise MissingLevel(n)

    @property
    def ground_energy(self) -> float:
        return self.energy(0)

    @property
    def is_analytic(self) -> bool:
        return self.kind != CUSTOM

    def potential_expr(self):
        """V0(x) as a sympy expression, or None for custom models."""
        if self.kind == HARMONIC:
            return X**2 / 2
        if self.kind == POSCHL_TELLER:
            nu = sp.nsimplify(self.nu)
            return nu * (nu - 1) / (2 * sp.cos(X) ** 2)
        return None

    @property
    def domain(self) -> tuple:
        """Open interval on which V0 is defined."""
        if self.kind == POSCHL_TELLER:
            return (-math.pi / 2, math.pi / 2)
        return (-math.inf, math.inf)

    def describe(self) -> str:
        if self.kind == POSCHL_TELLER:
            return f"poschl-teller(nu={self.nu:.17g})"
        if self.kind == CUSTOM:
            return f"custom({len(self.levels)} levels)"
        return "harmonic"


def energy(model: ModelSpec, n: int) -> float:
    """E_n for n >= 0."""
    if n < 0:
        raise ValueError(f"level index must be non-negative, got {n}")
    return model.energy(n)


def gap(model: ModelSpec, n: int) -> float:
    """f(n) = E(n+1) - E(n)."""
    return model.energy(n + 1) - model.energy(n)


def multiphoton_gap(model: ModelSpec, m: int, n: int) -> float:
    """f_m(n) = E(n+m) - E(n); n may be negative for analytic models."""
    if m < 1:
        raise ValueError(f"photon order must be >= 1, got {m}")
    return model.energy(n + m) - model.energy(n)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    n_max: int
    first_violation: Optional[int] = None
    message: str = ""


def validate(model: ModelSpec, n_max: int) -> ValidationReport:
    """Check strict monotonicity of E on [0, n_max]; never raises for bad data."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    try:
        prev = model.energy(0)
        for n in range(n_max):
            nxt = model.energy(n + 1)
            if not nxt > prev:
                return ValidationReport(
                    False, n_max, n,
                    f"E({n + 1}) = {nxt:.17g} is not above E({n}) = {prev:.17g}",
                )
            prev = nxt
    except MissingLevel as exc:
        return ValidationReport(False, n_max, exc.n, str(exc))
    return ValidationReport(True, n_max)
