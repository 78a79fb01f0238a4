"""Brute-force truncated-matrix validator.

Every operator is a dense D x D matrix in the energy eigenbasis, built only
from r(n), E_n and the factorization energies; composite operators come from
matrix products.  The coherent states used here are obtained by solving the
eigen-recurrence on the matrix entries, so none of the closed-form series
of :mod:`coherent` / :mod:`uncertainty` enter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .coherent import CoherentStateSpec
from .errors import DimensionTooSmall
from .ladder import commutator_structure, r_coefficient
from .spectrum import ModelSpec
from .susy import SusyConfig, commutator_structure_susy
from .uncertainty import QuadratureKind, _check_kind, uncertainty_product

DEFAULT_DIM = 256
MIN_DIM = 8


def default_margin(m: int) -> int:
    return 2 * m + 2


@dataclass
class OperatorSet:
    """Truncated matrices; rows are targets, columns sources.

    H0-side operators live in the H0 eigenbasis, the ell operators, H_k and
    N_k in the isospectral H_k eigenbasis (isolated states decouple and are
    left out).  B maps the H_k basis to the H0 basis.
    """

    model: ModelSpec
    cfg: Optional[SusyConfig]
    alpha: float
    dim: int
    m: int
    energies: np.ndarray
    a: np.ndarray
    a_dag: np.ndarray
    a_m: np.ndarray
    a_m_dag: np.ndarray
    H0: np.ndarray
    N: np.ndarray
    B: np.ndarray
    B_dag: np.ndarray
    ell: np.ndarray
    ell_dag: np.ndarray
    ell_m: np.ndarray
    ell_m_dag: np.ndarray
    Hk: np.ndarray
    Nk: np.ndarray


def build(model: ModelSpec, cfg: Optional[SusyConfig], alpha: float, dim: int, m: int = 1) -> OperatorSet:
    if dim < MIN_DIM or dim <= default_margin(m):
        raise DimensionTooSmall(
            f"D={dim} too small for m={m}: need D >= {MIN_DIM} and D > {default_margin(m)}"
        )
    if cfg is not None:
        cfg.check(model)
    energies = np.array([model.energy(n) for n in range(dim)])
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = r_coefficient(model, alpha, n)
    a_dag = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        a_dag[n + 1, n] = np.conj(r_coefficient(model, alpha, n + 1))
    a_m = np.linalg.matrix_power(a, m)
    a_m_dag = np.linalg.matrix_power(a_dag, m)

    eps = () if cfg is None else cfg.epsilons
    bk = np.array([math.prod(e_n - e for e in eps) for e_n in energies])
    B = np.diag(np.sqrt(bk)).astype(complex)
    B_dag = B.conj().T

    H0 = np.diag(energies).astype(complex)
    N = np.diag(np.arange(dim, dtype=float)).astype(complex)
    return OperatorSet(
        model=model, cfg=cfg, alpha=alpha, dim=dim, m=m, energies=energies,
        a=a, a_dag=a_dag, a_m=a_m, a_m_dag=a_m_dag, H0=H0, N=N, B=B, B_dag=B_dag,
        ell=B_dag @ a @ B, ell_dag=B_dag @ a_dag @ B,
        ell_m=B_dag @ a_m @ B, ell_m_dag=B_dag @ a_m_dag @ B,
        Hk=H0.copy(), Nk=N.copy(),
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    dim: int
    margin: int
    max_deviation: float

    def passed(self, threshold: float) -> bool:
        return self.max_deviation < threshold


def _scaled_deviation(computed, predicted, scale, size):
    """max |computed - predicted| / max(scale, 1) over the leading size x size block."""
    diff = np.abs(computed[:size, :size] - predicted[:size, :size])
    return float(np.max(diff / np.maximum(scale[:size, :size], 1.0)))


def _commutator_check(name, A, B, predicted, size, dim, margin):
    ab, ba = A @ B, B @ A
    scale = np.abs(ab) + np.abs(ba)
    return CheckResult(name, dim, margin, _scaled_deviation(ab - ba, predicted, scale, size))


def _gap_diag(ops: OperatorSet, shift: int) -> np.ndarray:
    """diag(f_m(n + shift)) for rows n; zero where n + shift < 0."""
    m, E = ops.m, ops.model.energy
    vals = [E(n + shift + m) - E(n + shift) if n + shift >= 0 else 0.0 for n in range(ops.dim)]
    return np.diag(vals).astype(complex)


def check_commutators(ops: OperatorSet, safe_margin: Optional[int] = None) -> List[CheckResult]:
    """Compare matrix commutators with the structure-function predictions.

    Deviations are entrywise |C - C_pred| scaled by max(1, |AB| + |BA|), i.e.
    relative to the size of the two products being subtracted, on the block
    of rows and columns below D - safe_margin.
    """
    m, dim = ops.m, ops.dim
    margin = default_margin(m) if safe_margin is None else safe_margin
    if margin < m:
        raise ValueError("safe_margin must be at least m")
    size = dim - margin
    if size < 1:
        raise DimensionTooSmall(f"margin {margin} leaves no rows of D={dim}")
    results = []

    comm0 = np.diag([commutator_structure(ops.model, m, n) for n in range(dim)]).astype(complex)
    results.append(_commutator_check("[a_m,a_m^+]", ops.a_m, ops.a_m_dag, comm0, size, dim, margin))
    results.append(_commutator_check(
        "[H0,a_m^+]", ops.H0, ops.a_m_dag, _gap_diag(ops, -m) @ ops.a_m_dag, size, dim, margin))
    results.append(_commutator_check(
        "[H0,a_m]", ops.H0, ops.a_m, -_gap_diag(ops, 0) @ ops.a_m, size, dim, margin))
    results.append(_commutator_check("[N,a^+]", ops.N, ops.a_dag, ops.a_dag, size, dim, margin))
    results.append(_commutator_check("[N,a]", ops.N, ops.a, -ops.a, size, dim, margin))

    pairing = np.abs(ops.a_m_dag - ops.a_m.conj().T)
    results.append(CheckResult("a_m^+ == (a_m)^H", dim, 0,
                               float(np.max(pairing / np.maximum(np.abs(ops.a_m_dag), 1.0)))))
    rows, cols = np.nonzero(ops.a_m)
    shift_ok = bool(np.all(cols - rows == m))
    results.append(CheckResult("a_m shift structure", dim, 0, 0.0 if shift_ok else math.inf))

    if ops.cfg is not None:
        commk = np.diag([commutator_structure_susy(ops.model, ops.cfg, m, n)
                         for n in range(dim)]).astype(complex)
        results.append(_commutator_check(
            "[l_km,l_km^+]", ops.ell_m, ops.ell_m_dag, commk, size, dim, margin))
        results.append(_commutator_check(
            "[Hk,l_km^+]", ops.Hk, ops.ell_m_dag, _gap_diag(ops, -m) @ ops.ell_m_dag,
            size, dim, margin))
        results.append(_commutator_check(
            "[Hk,l_km]", ops.Hk, ops.ell_m, -_gap_diag(ops, 0) @ ops.ell_m, size, dim, margin))
        results.append(_commutator_check("[Nk,l_k^+]", ops.Nk, ops.ell_dag, ops.ell_dag,
                                         size, dim, margin))
        inter = ops.Hk @ ops.B_dag - ops.B_dag @ ops.H0
        scale = np.abs(ops.Hk @ ops.B_dag) + np.abs(ops.B_dag @ ops.H0)
        results.append(CheckResult("Hk B^+ - B^+ H0", dim, 0,
                                   _scaled_deviation(inter, np.zeros_like(inter), scale, dim)))
    return results


def _annihilator(ops: OperatorSet, kind: QuadratureKind):
    if kind is QuadratureKind.INTRINSIC_H0:
        return ops.a, ops.a_dag
    if kind is QuadratureKind.MULTIPHOTON_H0:
        return ops.a_m, ops.a_m_dag
    if kind is QuadratureKind.NATURAL_HK:
        return ops.ell, ops.ell_dag
    return ops.ell_m, ops.ell_m_dag


def oracle_state(ops: OperatorSet, j: int, z: complex, susy: bool) -> np.ndarray:
    """Normalized eigenvector of a_m (or ell_{k,m}) on ladder j from the matrix entries.

    Solves A v = z v rung by rung, c_{n+1} = z c_n / A[j+nm, j+(n+1)m], keeping
    2m + 1 rows free at the top of the basis.
    """
    A = ops.ell_m if susy else ops.a_m
    m, dim = ops.m, ops.dim
    limit = dim - 2 * m - 1
    v = np.zeros(dim, dtype=complex)
    v[j] = 1.0
    level = j
    while level + m < limit:
        v[level + m] = z * v[level] / A[level, level + m]
        level += m
    v /= np.linalg.norm(v)
    if z != 0 and abs(v[level]) > 1e-14:
        raise DimensionTooSmall(
            f"coherent state not resolved in D={dim}: last rung amplitude {abs(v[level]):.3g}"
        )
    return v


def _variance(Q: np.ndarray, v: np.ndarray) -> float:
    qv = Q @ v
    mean = np.vdot(v, qv).real
    return float(np.vdot(qv, qv).real - mean * mean)


def oracle_uncertainty(spec: CoherentStateSpec, kind, dim: int = DEFAULT_DIM) -> float:
    """(Delta X)(Delta P) from raw matrix moments."""
    kind = QuadratureKind.parse(kind)
    _check_kind(spec, kind)
    ops = build(spec.model, spec.cfg, spec.alpha, dim, spec.m)
    v = oracle_state(ops, spec.j, spec.z, kind.needs_susy)
    A, A_dag = _annihilator(ops, kind)
    X = (A_dag + A) / math.sqrt(2.0)
    P = 1j * (A_dag - A) / math.sqrt(2.0)
    var_x, var_p = _variance(X, v), _variance(P, v)
    return math.sqrt(max(var_x, 0.0)) * math.sqrt(max(var_p, 0.0))


def compare(spec: CoherentStateSpec, kind, dim: int = DEFAULT_DIM) -> float:
    """|closed form - oracle| for one state and quadrature kind."""
    return abs(uncertainty_product(spec, kind) - oracle_uncertainty(spec, kind, dim))


def oracle_residual(spec: CoherentStateSpec, vec_levels, vec_amps, dim: int = DEFAULT_DIM) -> float:
    """|| A v - z v || for a given coefficient vector, with A from the matrices."""
    ops = build(spec.model, spec.cfg, spec.alpha, dim, spec.m)
    A = ops.ell_m if spec.cfg is not None else ops.a_m
    v = np.zeros(dim, dtype=complex)
    for level, c in zip(vec_levels, vec_amps):
        if level >= dim:
            raise DimensionTooSmall(f"level {level} outside D={dim}")
        v[level] = c
    return float(np.linalg.norm(A @ v - spec.z * v))
