"""Barut-Girardello multiphoton coherent states of H0 and of its SUSY partners.

A state is an eigenvector of a_m (or ell_{k,m}) supported on one m-ladder
j, j+m, j+2m, ...  The series weights |z|^{2n}/rho_n grow super-geometrically
small, so coefficients are accumulated in log space and the series is cut
once both the discarded probability and the induced eigen-residual are below
``tol``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, TruncationFailure
from .ladder import LadderSpec, level_product
from .spectrum import ModelSpec
from .susy import SusyConfig, ell_annihilate

DEFAULT_TOL = 1e-12
DEFAULT_N_CAP = 512


@dataclass(frozen=True)
class CoherentStateSpec:
    """Parameters of |z>_j (cfg None) or |w>_j (cfg given); ``z`` plays both roles."""

    model: ModelSpec
    m: int
    j: int
    z: complex
    cfg: Optional[SusyConfig] = None
    alpha: float = 0.0
    tol: float = DEFAULT_TOL
    n_cap: int = DEFAULT_N_CAP

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if int(self.m) != self.m or self.m < 1:
            raise ConfigError(f"m must be a positive integer, got {self.m!r}")
        if not 0 <= self.j < self.m:
            raise ConfigError(f"ladder index j must lie in [0, {self.m - 1}], got {self.j}")
        if not (self.tol > 0):
            raise ConfigError("tol must be positive")
        if self.n_cap < 1:
            raise ConfigError("n_cap must be >= 1")
        if not (math.isfinite(self.z.real) and math.isfinite(self.z.imag)):
            raise ConfigError("eigenvalue must be finite")
        if self.cfg is not None:
            self.cfg.check(self.model)

    @property
    def k(self) -> int:
        return 0 if self.cfg is None else self.cfg.k

    @property
    def ladder(self) -> LadderSpec:
        return LadderSpec(self.m, self.alpha)

    def level(self, n: int) -> int:
        return self.j + n * self.m

    def with_z(self, z: complex) -> "CoherentStateSpec":
        return CoherentStateSpec(self.model, self.m, self.j, z, self.cfg,
                                 self.alpha, self.tol, self.n_cap)


@dataclass(frozen=True)
class CoefficientVector:
    """Truncated, normalized coefficients c_0..c_{N_t} on levels j + n m."""

    levels: np.ndarray
    amplitudes: np.ndarray
    n_trunc: int
    tail_bound: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def as_dict(self) -> dict:
        return {int(l): complex(c) for l, c in zip(self.levels, self.amplitudes)}


def rho(model: ModelSpec, m: int, j: int, n: int) -> float:
    """rho_n^j = prod_{l=0}^{nm-1} (E_{j+nm-l} - E0), rho_0 = 1."""
    if n < 0 or not 0 <= j < m:
        raise ValueError("need n >= 0 and 0 <= j < m")
    if n == 0:
        return 1.0
    return level_product(model, j + n * m, n * m)


def phi(model: ModelSpec, cfg: Optional[SusyConfig], m: int, j: int, n: int) -> float:
    """varphi_n^j for the SUSY partner; equals rho_n^j when cfg is None."""
    if cfg is None or n == 0:
        return rho(model, m, j, n)
    eps = cfg.check(model).epsilons
    num = 1.0
    for e in eps:
        for p in range(n + 1):
            num *= (model.energy(j + p * m) - e) ** 2
    den = math.prod((model.energy(j + n * m) - e) * (model.energy(j) - e) for e in eps)
    return num * rho(model, m, j, n) / den


def log_rho(model: ModelSpec, m: int, j: int, n: int) -> float:
    e0 = model.ground_energy
    return math.fsum(math.log(model.energy(j + n * m - l) - e0) for l in range(n * m))


def log_phi(model: ModelSpec, cfg: Optional[SusyConfig], m: int, j: int, n: int) -> float:
    base = log_rho(model, m, j, n)
    if cfg is None or n == 0:
        return base
    eps = cfg.check(model).epsilons
    terms = [base]
    for e in eps:
        terms += [2 * math.log(model.energy(j + p * m) - e) for p in range(n + 1)]
        terms.append(-math.log(model.energy(j + n * m) - e))
        terms.append(-math.log(model.energy(j) - e))
    return math.fsum(terms)


def log_step_weight(spec: CoherentStateSpec, n: int) -> float:
    """log(rho_{n+1}/rho_n) (or the varphi analogue): |creation amplitude|^2 from rung n."""
    model, m = spec.model, spec.m
    top = spec.level(n + 1)
    e0 = model.ground_energy
    acc = [math.log(model.energy(top - l) - e0) for l in range(m)]
    if spec.cfg is not None:
        lo = model.energy(spec.level(n))
        hi = model.energy(top)
        acc += [math.log((hi - e) * (lo - e)) for e in spec.cfg.epsilons]
    return math.fsum(acc)


def _log_add(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def coefficients(spec: CoherentStateSpec) -> CoefficientVector:
    """Coefficient vector of the multiphoton coherent state.

    Stops at the first N_t with successive ratio r < 1/2 for which the
    geometric tail t_{N_t} r/(1-r) and the eigen-residual |z|^2 t_{N_t}
    are both below the corresponding tolerance (relative to the partial norm).
    """
    z = spec.z
    if z == 0:
        return CoefficientVector(np.array([spec.j]), np.array([1.0 + 0.0j]), 0, 0.0)

    log_abs_z2 = 2.0 * math.log(abs(z))
    log_tol = math.log(spec.tol)
    log_terms = [0.0]
    log_norm = 0.0
    n_trunc = None
    tail = 0.0
    for n in range(spec.n_cap):
        log_ratio = log_abs_z2 - log_step_weight(spec, n)
        log_t = log_terms[-1]
        if log_ratio < -math.log(2.0):
            r = math.exp(log_ratio)
            log_tail = log_t + log_ratio - math.log1p(-r)
            log_resid = log_abs_z2 + log_t
            if log_tail - log_norm < log_tol and log_resid - log_norm < 2.0 * log_tol:
                n_trunc = n
                tail = math.exp(log_tail - log_norm)
                break
        log_terms.append(log_t + log_ratio)
        log_norm = _log_add(log_norm, log_terms[-1])
    if n_trunc is None:
        raise TruncationFailure(
            f"coherent series for |z|={abs(z):.6g} (m={spec.m}, j={spec.j}) "
            f"not converged within n_cap={spec.n_cap} terms"
        )

    log_terms = np.asarray(log_terms)
    ns = np.arange(n_trunc + 1)
    moduli = np.exp(0.5 * (log_terms - log_norm))
    moduli /= math.sqrt(math.fsum(moduli * moduli))
    arg_z = math.atan2(z.imag, z.real)
    phases = ns * arg_z
    if spec.alpha != 0.0:
        e_j = spec.model.energy(spec.j)
        de = np.array([spec.model.energy(spec.level(n)) - e_j for n in ns])
        phases = phases - spec.alpha * de
    amps = moduli * np.exp(1j * phases)
    levels = spec.j + spec.m * ns
    return CoefficientVector(levels, amps, int(n_trunc), float(tail))


def apply_annihilator(spec: CoherentStateSpec, vec: CoefficientVector) -> dict:
    """ell_{k,m} (a_m when k = 0) applied to ``vec`` through the ladder actions."""
    out = {}
    ls = spec.ladder
    for level, c in zip(vec.levels, vec.amplitudes):
        target, amp = ell_annihilate(spec.model, spec.cfg, ls, int(level))
        if amp != 0:
            out[target] = out.get(target, 0j) + amp * c
    return out


def eigen_residual(spec: CoherentStateSpec, vec: CoefficientVector) -> float:
    """|| A v - z v || with A = a_m or ell_{k,m}."""
    av = apply_annihilator(spec, vec)
    zv = {int(l): spec.z * c for l, c in zip(vec.levels, vec.amplitudes)}
    keys = set(av) | set(zv)
    return math.sqrt(math.fsum(abs(av.get(k, 0j) - zv.get(k, 0j)) ** 2 for k in keys))
