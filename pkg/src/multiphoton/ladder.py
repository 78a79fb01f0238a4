"""Intrinsic and multiphoton ladder operators of H0.

Operators are represented by their action on the eigenbasis: every call
returns ``(target_level, amplitude)``.  A zero amplitude stands for the zero
vector, whatever the target index (it may be negative).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple

from .errors import MissingLevel
from .spectrum import ModelSpec, multiphoton_gap


@dataclass(frozen=True)
class LadderSpec:
    m: int = 1
    alpha: float = 0.0

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"photon order m must be a positive integer, got {self.m!r}")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "alpha", float(self.alpha))


class LadderAddress(NamedTuple):
    j: int
    step: int


def decompose(level: int, m: int) -> LadderAddress:
    """Split a level index into (ladder j, step n) with level = j + n*m."""
    if level < 0:
        raise ValueError("level must be non-negative")
    step, j = divmod(level, m)
    return LadderAddress(j, step)


def compose(address: LadderAddress, m: int) -> int:
    return address.j + address.step * m


def level_product(model: ModelSpec, top: int, count: int) -> float:
    """prod_{l=0}^{count-1} (E(top - l) - E0), scanning l upward.

    Returns 0.0 as soon as a vanishing factor (top - l == 0) is met, so levels
    below zero are never evaluated.
    """
    e0 = model.ground_energy
    prod = 1.0
    for l in range(count):
        level = top - l
        if level == 0:
            return 0.0
        if level < 0:
            raise MissingLevel(level)
        prod *= model.energy(level) - e0
    return prod


def _phase(alpha: float, delta_e: float) -> complex:
    if alpha == 0.0:
        return 1.0 + 0.0j
    return cmath.exp(1j * alpha * delta_e)


def r_coefficient(model: ModelSpec, alpha: float, n: int) -> complex:
    """r(n) = exp(i alpha (E_n - E_{n-1})) sqrt(E_n - E_0); r(0) = 0."""
    if n <= 0:
        return 0j
    e_n = model.energy(n)
    return _phase(alpha, e_n - model.energy(n - 1)) * math.sqrt(e_n - model.ground_energy)


def annihilate_m(model: ModelSpec, spec: LadderSpec, n: int):
    m = spec.m
    if n < m:
        return n - m, 0j
    amp = math.sqrt(level_product(model, n, m))
    return n - m, _phase(spec.alpha, model.energy(n) - model.energy(n - m)) * amp


def create_m(model: ModelSpec, spec: LadderSpec, n: int):
    # adjoint of a_m, so it is the conjugate of the a_m element one rung up
    _, amp = annihilate_m(model, spec, n + spec.m)
    return n + spec.m, amp.conjugate()


def commutator_structure(model: ModelSpec, m: int, n: int) -> float:
    """Eigenvalue of [a_m, a_m^dagger] on |psi_n>."""
    return level_product(model, n + m, m) - level_product(model, n, m)


def extremal_levels(m: int) -> List[int]:
    """Levels annihilated by a_m: the first m eigenstates."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return list(range(m))


class AlgebraRow(NamedTuple):
    n: int
    comm_aa: float
    comm_aa_polynomial: float
    comm_h_create_factor: float
    comm_h_annih_factor: float


def ho_algebra_table(m: int, n_range: Iterable[int]) -> List[AlgebraRow]:
    """Oscillator multiphoton algebra on |psi_n>.

    ``comm_aa`` comes from the general structure function, while
    ``comm_aa_polynomial`` evaluates the polynomial in H0 directly; the two
    must coincide.  Both H0 commutator factors are identically m.
    """
    model = ModelSpec.harmonic()
    rows = []
    for n in n_range:
        h = model.energy(n)
        upper = math.prod(h + m - l - 0.5 for l in range(m))
        lower = math.prod(h - l - 0.5 for l in range(m))
        rows.append(AlgebraRow(
            n,
            commutator_structure(model, m, n),
            upper - lower,
            multiphoton_gap(model, m, n - m),
            multiphoton_gap(model, m, n),
        ))
    return rows


def pt_algebra_factors(nu: float, m: int, n: int):
    """(creation, annihilation) factors of [H0, a_m^dagger] and -[H0, a_m].

    For the Poschl-Teller spectrum these are (m/2)(2(n+nu) - m) and
    (m/2)(2(n+nu) + m), i.e. f_m(n-m) and f_m(n).
    """
    return 0.5 * m * (2 * (n + nu) - m), 0.5 * m * (2 * (n + nu) + m)


def h_ladder_factors(model: ModelSpec, m: int, n: int):
    """(f_m(n-m), f_m(n)) from energy differences, for any analytic model."""
    return multiphoton_gap(model, m, n - m), multiphoton_gap(model, m, n)


__all__ = [
    "LadderSpec", "LadderAddress", "decompose", "compose", "level_product",
    "r_coefficient", "annihilate_m", "create_m", "commutator_structure",
    "extremal_levels", "AlgebraRow", "ho_algebra_table", "pt_algebra_factors",
    "h_ladder_factors",
]
