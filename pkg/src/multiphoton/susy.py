"""Spectral side of k-th order SUSY partners H_k of H0.

Isospectral eigenstates of H_k are labelled :class:`Iso` and the states at the
factorization energies :class:`Isolated`; the two label types never mix, so an
isolated state cannot be confused with ``Iso(0)`` even though N_k gives both
eigenvalue 0.  Passing ``cfg=None`` means k = 0: every function then returns
exactly what the matching :mod:`ladder` function returns.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Union

from . import ladder
from .errors import ConfigError
from .ladder import LadderSpec, level_product
from .spectrum import ModelSpec, multiphoton_gap


@dataclass(frozen=True)
class SusyConfig:
    """Factorization energies eps_1 > eps_2 > ... > eps_k.

    If ``model`` is given, the energies are also checked to lie below E0.
    Operations taking both a model and a config repeat that check.
    """

    epsilons: tuple

    def __init__(self, epsilons: Sequence[float], model: Optional[ModelSpec] = None):
        eps = tuple(float(e) for e in epsilons)
        if not eps:
            raise ConfigError("SUSY configuration needs k >= 1 factorization energies")
        if not all(math.isfinite(e) for e in eps):
            raise ConfigError("factorization energies must be finite")
        for a, b in zip(eps, eps[1:]):
            if not b < a:
                raise ConfigError(
                    f"factorization energies must be strictly decreasing, got {eps}"
                )
        object.__setattr__(self, "epsilons", eps)
        if model is not None:
            self.check(model)

    @property
    def k(self) -> int:
        return len(self.epsilons)

    def check(self, model: ModelSpec) -> "SusyConfig":
        e0 = model.ground_energy
        if not self.epsilons[0] < e0:
            raise ConfigError(
                f"factorization energy {self.epsilons[0]:.17g} is not below E0 = {e0:.17g}"
            )
        return self


class Iso(NamedTuple):
    """Eigenstate of H_k at E_n (isospectral with H0)."""
    n: int


class Isolated(NamedTuple):
    """Eigenstate of H_k at the factorization energy eps_i (1-based i)."""
    i: int


Label = Union[Iso, Isolated]


def _eps(model: ModelSpec, cfg: Optional[SusyConfig]) -> tuple:
    if cfg is None:
        return ()
    return cfg.check(model).epsilons


def bk_eigenvalue(model: ModelSpec, cfg: Optional[SusyConfig], n: int) -> float:
    """prod_i (E_n - eps_i): eigenvalue of B_k B_k^dagger on |psi_n^(0)>."""
    e_n = model.energy(n)
    return math.prod(e_n - e for e in _eps(model, cfg))


def _pair_product(model, eps, n_a, n_b):
    e_a, e_b = model.energy(n_a), model.energy(n_b)
    return math.prod((e_a - e) * (e_b - e) for e in eps)


def ell_dag_ell_eigenvalue(model: ModelSpec, cfg: Optional[SusyConfig], m: int, n: int) -> float:
    """Eigenvalue of ell_{k,m}^dagger ell_{k,m} on |psi_n^(k)>; zero for n < m."""
    eps = _eps(model, cfg)
    if n < m:
        return 0.0
    return level_product(model, n, m) * _pair_product(model, eps, n, n - m)


def ell_annihilate(model: ModelSpec, cfg: Optional[SusyConfig], spec: LadderSpec, n: int):
    if cfg is None:
        return ladder.annihilate_m(model, spec, n)
    m = spec.m
    if n < m:
        return n - m, 0j
    amp = math.sqrt(ell_dag_ell_eigenvalue(model, cfg, m, n))
    de = model.energy(n) - model.energy(n - m)
    phase = 1.0 + 0.0j if spec.alpha == 0.0 else cmath.exp(1j * spec.alpha * de)
    return n - m, phase * amp


def ell_create(model: ModelSpec, cfg: Optional[SusyConfig], spec: LadderSpec, n: int):
    if cfg is None:
        return ladder.create_m(model, spec, n)
    _, amp = ell_annihilate(model, cfg, spec, n + spec.m)
    return n + spec.m, amp.conjugate()


def ell_on_isolated(cfg: SusyConfig, i: int):
    """Both ell_{k,m} and its adjoint annihilate |psi_{eps_i}^(k)>."""
    if not 1 <= i <= cfg.k:
        raise ValueError(f"isolated index must lie in [1, {cfg.k}], got {i}")
    return 0j


def apply_ell(model, cfg, spec, label: Label, dagger: bool = False):
    """Action on a label; isolated states map to (label, 0)."""
    if isinstance(label, Isolated):
        return label, ell_on_isolated(cfg, label.i)
    fn = ell_create if dagger else ell_annihilate
    target, amp = fn(model, cfg, spec, label.n)
    return Iso(target), amp


def number_operator_k(model: ModelSpec, cfg: Optional[SusyConfig], label: Label) -> int:
    if isinstance(label, Isolated):
        if cfg is None or not 1 <= label.i <= cfg.k:
            raise ValueError(f"no isolated level {label.i} in this configuration")
        return 0
    return int(label.n)


def commutator_structure_susy(model: ModelSpec, cfg: Optional[SusyConfig], m: int, n: int) -> float:
    """Eigenvalue of [ell_{k,m}, ell_{k,m}^dagger] on |psi_n^(k)>."""
    if cfg is None:
        return ladder.commutator_structure(model, m, n)
    return ell_dag_ell_eigenvalue(model, cfg, m, n + m) - ell_dag_ell_eigenvalue(model, cfg, m, n)


def hk_ladder_factors(model: ModelSpec, m: int, n: int):
    """(f_m(n - m), f_m(n)): the H_k commutator factors, identical to H0's."""
    return multiphoton_gap(model, m, n - m), multiphoton_gap(model, m, n)


@dataclass(frozen=True)
class PartnerSpectrum:
    """Sp(H_k) split into m infinite ladders plus k single-step ladders."""

    model: ModelSpec
    cfg: Optional[SusyConfig]
    m: int

    @property
    def isolated(self) -> List[tuple]:
        """[(Isolated(i), eps_i)] ordered by energy, lowest first."""
        if self.cfg is None:
            return []
        pairs = [(Isolated(i + 1), e) for i, e in enumerate(self.cfg.epsilons)]
        return sorted(pairs, key=lambda p: p[1])

    def iso_energy(self, n: int) -> float:
        return self.model.energy(n)

    def extremal_states(self) -> List[Label]:
        """The m iso extremal states followed by the k isolated ones."""
        return [Iso(j) for j in range(self.m)] + [lab for lab, _ in self.isolated]

    def ladder_of(self, label: Label):
        """(ladder tag, step); isolated states sit alone on their own ladder."""
        if isinstance(label, Isolated):
            return f"isolated-{label.i}", 0
        j, step = ladder.decompose(label.n, self.m)
        return j, step

    def levels(self, n_max: int) -> List[tuple]:
        """[(label, energy)] for isolated levels and iso levels 0..n_max, by energy."""
        out = list(self.isolated)
        out += [(Iso(n), self.model.energy(n)) for n in range(n_max + 1)]
        return sorted(out, key=lambda p: p[1])


def partner_spectrum(model: ModelSpec, cfg: Optional[SusyConfig], m: int = 1) -> PartnerSpectrum:
    if cfg is not None:
        cfg.check(model)
    if m < 1:
        raise ValueError("m must be >= 1")
    return PartnerSpectrum(model, cfg, m)
