"""Quadrature uncertainty products on multiphoton coherent states.

Each expectation value is available two ways: as a ratio of series over the
weights |z|^{2n}/rho_n (``expect_number_moment``) and as a quadratic form
over the coefficient vector built from ladder actions
(``quadratic_form_moment``).  Both use the truncation window of the state.

Cross term for the natural SUSY quadratures at m = 2: ell_k^2 is not
ell_{k,2}; on |w>_j it has expectation w <prod_i (E(N_k+1) - eps_i)>, which
reduces to w only when k = 0 or w = 0.  That value is used by default;
``literal_cross_term=True`` substitutes Re(w) instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional

import numpy as np

from .coherent import CoefficientVector, CoherentStateSpec, coefficients, log_phi
from .errors import ConfigError, MultiphotonError, NegativeRadicand
from .ladder import LadderSpec, level_product
from .susy import ell_annihilate, ell_create

RADICAND_FLOOR = -1e-12


class QuadratureKind(str, Enum):
    INTRINSIC_H0 = "intrinsic-h0"
    MULTIPHOTON_H0 = "multiphoton-h0"
    NATURAL_HK = "natural-hk"
    MULTIPHOTON_HK = "multiphoton-hk"

    @property
    def needs_susy(self) -> bool:
        return self in (QuadratureKind.NATURAL_HK, QuadratureKind.MULTIPHOTON_HK)

    @classmethod
    def parse(cls, text) -> "QuadratureKind":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "-")
        aliases = {
            "intrinsich0": cls.INTRINSIC_H0, "multiphotonh0": cls.MULTIPHOTON_H0,
            "naturalhk": cls.NATURAL_HK, "multiphotonhk": cls.MULTIPHOTON_HK,
        }
        for kind in cls:
            if key == kind.value:
                return kind
        if key.replace("-", "") in aliases:
            return aliases[key.replace("-", "")]
        raise ConfigError(f"unknown quadrature kind {text!r}")


# moment names
ADAG_A = "adag_a"              # <a^dag a>
COMM_A = "comm_a"              # <[a, a^dag]>
AM_AMDAG = "am_amdag"          # <a_m a_m^dag>
ELLDAG_ELL = "elldag_ell"      # <ell_k^dag ell_k>
ELL_ELLDAG = "ell_elldag"      # <ell_k ell_k^dag>
ELLM_ELLMDAG = "ellm_ellmdag"  # <ell_{k,m} ell_{k,m}^dag>
MOMENTS = (ADAG_A, COMM_A, AM_AMDAG, ELLDAG_ELL, ELL_ELLDAG, ELLM_ELLMDAG)


def _check_kind(spec: CoherentStateSpec, kind: QuadratureKind):
    if kind.needs_susy and spec.cfg is None:
        raise ConfigError(f"{kind.value} quadratures need a SUSY configuration")
    if not kind.needs_susy and spec.cfg is not None:
        raise ConfigError(f"{kind.value} quadratures are defined for H0 only (no SUSY block)")


def _eps(spec):
    return () if spec.cfg is None else spec.cfg.epsilons


def _moment_summand(spec: CoherentStateSpec, which: str, n: int) -> float:
    """Diagonal value g(n) such that <O> = sum_n |c_n|^2 g(n)."""
    model, m = spec.model, spec.m
    lvl = spec.level(n)
    e0 = model.ground_energy
    E = model.energy
    eps = _eps(spec)
    if which == ADAG_A:
        return E(lvl) - e0
    if which == COMM_A:
        return E(lvl + 1) - E(lvl)
    if which == AM_AMDAG:
        return level_product(model, lvl + m, m)
    if which == ELLDAG_ELL:
        if lvl == 0:
            return 0.0
        return (E(lvl) - e0) * math.prod((E(lvl) - e) * (E(lvl - 1) - e) for e in eps)
    if which == ELL_ELLDAG:
        return (E(lvl + 1) - e0) * math.prod((E(lvl + 1) - e) * (E(lvl) - e) for e in eps)
    if which == ELLM_ELLMDAG:
        return level_product(model, lvl + m, m) * math.prod(
            (E(lvl + m) - e) * (E(lvl) - e) for e in eps)
    raise ValueError(f"unknown moment {which!r}")


def series_weights(spec: CoherentStateSpec, n_trunc: int) -> np.ndarray:
    """Normalized |z|^{2n}/rho_n^j (or varphi) for n = 0..n_trunc."""
    if spec.z == 0:
        w = np.zeros(n_trunc + 1)
        w[0] = 1.0
        return w
    log_z2 = 2.0 * math.log(abs(spec.z))
    logs = np.array([n * log_z2 - log_phi(spec.model, spec.cfg, spec.m, spec.j, n)
                     for n in range(n_trunc + 1)])
    logs -= logs.max()
    w = np.exp(logs)
    return w / w.sum()


def expect_number_moment(spec: CoherentStateSpec, which: str,
                         vec: Optional[CoefficientVector] = None) -> float:
    """Ratio-of-series value of a diagonal moment."""
    if vec is None:
        vec = coefficients(spec)
    weights = series_weights(spec, vec.n_trunc)
    g = np.array([_moment_summand(spec, which, n) for n in range(vec.n_trunc + 1)])
    return float(np.dot(weights, g))


def ell_squared_expectation(spec: CoherentStateSpec,
                            vec: Optional[CoefficientVector] = None) -> complex:
    """<ell_k^2> on |w>_j for m = 2: w <prod_i (E(N_k+1) - eps_i)>."""
    if vec is None:
        vec = coefficients(spec)
    weights = series_weights(spec, vec.n_trunc)
    E = spec.model.energy
    g = np.array([math.prod(E(spec.level(n) + 1) - e for e in _eps(spec))
                  for n in range(vec.n_trunc + 1)])
    return spec.z * float(np.dot(weights, g))


# -- quadratic forms from ladder actions -------------------------------------

def _apply(spec, vec_dict, m, dagger, susy):
    ls = LadderSpec(m, spec.alpha)
    cfg = spec.cfg if susy else None
    fn = ell_create if dagger else ell_annihilate
    out = {}
    for level, c in vec_dict.items():
        target, amp = fn(spec.model, cfg, ls, level)
        if amp != 0:
            out[target] = out.get(target, 0j) + amp * c
    return out


def _norm2(d):
    return math.fsum(abs(c) ** 2 for c in d.values())


def quadratic_form_moment(spec: CoherentStateSpec, which: str,
                          vec: Optional[CoefficientVector] = None) -> float:
    """v^dag O v computed by acting with the ladder operators on v."""
    if vec is None:
        vec = coefficients(spec)
    v = vec.as_dict()
    if which == ADAG_A:
        return _norm2(_apply(spec, v, 1, False, False))
    if which == COMM_A:
        return _norm2(_apply(spec, v, 1, True, False)) - _norm2(_apply(spec, v, 1, False, False))
    if which == AM_AMDAG:
        return _norm2(_apply(spec, v, spec.m, True, False))
    if which == ELLDAG_ELL:
        return _norm2(_apply(spec, v, 1, False, True))
    if which == ELL_ELLDAG:
        return _norm2(_apply(spec, v, 1, True, True))
    if which == ELLM_ELLMDAG:
        return _norm2(_apply(spec, v, spec.m, True, True))
    raise ValueError(f"unknown moment {which!r}")


def _sqrt_radicand(value: float, label: str) -> float:
    if value < RADICAND_FLOOR:
        raise NegativeRadicand(f"{label}: radicand {value:.6g} is negative")
    return math.sqrt(max(value, 0.0))


def uncertainty_product(spec: CoherentStateSpec, kind, literal_cross_term: bool = False,
                        vec: Optional[CoefficientVector] = None) -> float:
    """(Delta X)(Delta P) for the quadratures of ``kind`` on the coherent state."""
    kind = QuadratureKind.parse(kind)
    _check_kind(spec, kind)
    if vec is None:
        vec = coefficients(spec)
    m, z = spec.m, spec.z

    if kind is QuadratureKind.INTRINSIC_H0:
        comm = expect_number_moment(spec, COMM_A, vec)
        if m == 1:
            return 0.5 * comm
        s = expect_number_moment(spec, ADAG_A, vec) + 0.5 * comm
        if m >= 3:
            return s
        return _sqrt_radicand(s * s - z.real ** 2, "intrinsic m=2")

    if kind is QuadratureKind.MULTIPHOTON_H0:
        return 0.5 * (expect_number_moment(spec, AM_AMDAG, vec) - abs(z) ** 2)

    if kind is QuadratureKind.NATURAL_HK:
        up = expect_number_moment(spec, ELL_ELLDAG, vec)
        if m == 1:
            return 0.5 * (up - abs(z) ** 2)
        s = 0.5 * (expect_number_moment(spec, ELLDAG_ELL, vec) + up)
        if m >= 3:
            return s
        cross = z.real if literal_cross_term else ell_squared_expectation(spec, vec).real
        return _sqrt_radicand(s * s - cross ** 2, "natural m=2")

    return 0.5 * (expect_number_moment(spec, ELLM_ELLMDAG, vec) - abs(z) ** 2)


# -- scans -------------------------------------------------------------------

@dataclass(frozen=True)
class ScanPoint:
    z: complex
    product: Optional[float]
    error: Optional[str] = None


def radial_grid(z_max: float, points: int = 201, angle: float = 0.0) -> List[complex]:
    """|z| from 0 to z_max along a ray at ``angle``."""
    if points < 1:
        raise ConfigError("scan needs at least one point")
    radii = np.linspace(0.0, z_max, points)
    ray = complex(math.cos(angle), math.sin(angle))
    return [complex(float(r) * ray) for r in radii]


def square_grid(z_max: float, points: int = 21) -> List[complex]:
    """Complex square [-z_max, z_max]^2, row-major in Im z."""
    axis = np.linspace(-z_max, z_max, points)
    return [complex(float(x), float(y)) for y in axis for x in axis]


def scan(spec: CoherentStateSpec, grid: Iterable[complex], kind,
         literal_cross_term: bool = False) -> List[ScanPoint]:
    """Evaluate the product at every grid point; failures are recorded per point."""
    kind = QuadratureKind.parse(kind)
    _check_kind(spec, kind)
    grid = list(grid)
    if not grid:
        raise ConfigError("scan grid is empty")
    out = []
    for z in grid:
        try:
            value = uncertainty_product(spec.with_z(z), kind, literal_cross_term)
            out.append(ScanPoint(complex(z), value))
        except MultiphotonError as exc:
            out.append(ScanPoint(complex(z), None, f"{type(exc).__name__}: {exc}"))
    return out
