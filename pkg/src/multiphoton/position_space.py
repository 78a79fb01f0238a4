"""SUSY partner construction in x-space on a uniform grid.

Seeds u(x, eps) of -u''/2 + V0 u = eps u are integrated with fixed-step RK4;
beta functions follow from beta_1 = u'/u and the finite-difference recursion;
V_k is formed both from the betas and from the Wronskian of the seeds.

The recursion is carried on (numerator, denominator) pairs so that the poles
of intermediate functions beta_{j-1}(x, eps_l), l > j-1, never get sampled;
only the betas that enter b_j^dagger must be finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from scipy.special import eval_gegenbauer, roots_legendre

from .errors import ConfigError, PoleProximity, SingularDenominator, ZeroCrossing
from .spectrum import CUSTOM, HARMONIC, POSCHL_TELLER, X, ModelSpec
from .susy import SusyConfig

PT_GUARD = 0.05
OVERFLOW = 1e250


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 101:
            raise ConfigError(f"grid needs at least 101 points, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ConfigError("grid needs x_max > x_min")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def check_model(self, model: ModelSpec, guard: float = PT_GUARD) -> "Grid":
        if model.kind == CUSTOM:
            raise ConfigError("position-space work needs an analytic potential (harmonic or poschl-teller)")
        if model.kind == POSCHL_TELLER:
            lo, hi = -math.pi / 2 + guard, math.pi / 2 - guard
            bad = [x for x in (self.x_min, self.x_max) if not lo < x < hi]
            if bad:
                raise PoleProximity(
                    f"grid [{self.x_min}, {self.x_max}] enters the pole guard band "
                    f"(must stay inside ({lo:.6f}, {hi:.6f}))", bad)
        return self


@lru_cache(maxsize=None)
def _potential_funcs(model: ModelSpec, order: int):
    expr = model.potential_expr()
    if expr is None:
        raise ConfigError("custom models carry no potential")
    return tuple(sp.lambdify(X, sp.diff(expr, X, r), "numpy") for r in range(order + 1))


def potential(model: ModelSpec, x, derivative: int = 0):
    """V0 or one of its derivatives, evaluated at ``x``."""
    fn = _potential_funcs(model, derivative)[derivative]
    return np.broadcast_to(np.asarray(fn(np.asarray(x, dtype=float)), dtype=float), np.shape(x)).copy()


@dataclass(frozen=True)
class SeedSolution:
    """u = u_scaled * exp(log_scale) pointwise; the ratio u'/u ignores the scale."""

    epsilon: float
    x: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    log_scale: np.ndarray
    normalizable: bool
    nodes: Tuple[float, ...] = field(default=())

    @property
    def nodeless(self) -> bool:
        return not self.nodes


def _rk4_path(vfun, eps, xs, y0, substeps):
    """Integrate (u, u') along the points xs (monotone); returns values and log scales."""
    out = np.empty((len(xs), 2))
    logs = np.zeros(len(xs))
    u, up = y0
    scale = 0.0
    out[0] = (u, up)

    def rhs(x, u, up):
        return up, 2.0 * (vfun(x) - eps) * u

    for i in range(1, len(xs)):
        x0 = xs[i - 1]
        h = (xs[i] - x0) / substeps
        for s in range(substeps):
            x = x0 + s * h
            k1u, k1p = rhs(x, u, up)
            k2u, k2p = rhs(x + h / 2, u + h / 2 * k1u, up + h / 2 * k1p)
            k3u, k3p = rhs(x + h / 2, u + h / 2 * k2u, up + h / 2 * k2p)
            k4u, k4p = rhs(x + h, u + h * k3u, up + h * k3p)
            u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
            up += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        big = max(abs(u), abs(up))
        if big > OVERFLOW:
            u /= big
            up /= big
            scale += math.log(big)
        out[i] = (u, up)
        logs[i] = scale
    return out, logs


def _sign_changes(x, f):
    locs = []
    for i in range(len(f) - 1):
        if f[i] == 0.0:
            locs.append(x[i])
        elif (f[i] < 0.0) != (f[i + 1] < 0.0) and f[i + 1] != 0.0:
            locs.append(x[i] - f[i] * (x[i + 1] - x[i]) / (f[i + 1] - f[i]))
    if len(f) and f[-1] == 0.0:
        locs.append(x[-1])
    return tuple(float(v) for v in locs)


def solve_seed(model: ModelSpec, epsilon: float, grid: Grid, init=(1.0, 0.0),
               x_anchor: float = 0.0, substeps: int = 4) -> SeedSolution:
    """Solve -u''/2 + V0 u = eps u outward from ``x_anchor`` with classical RK4.

    ``substeps`` RK4 steps are taken per grid interval.  Values that would
    exceed ~1e250 are rescaled and the factor is kept in ``log_scale``.
    """
    grid.check_model(model)
    if not epsilon < model.ground_energy:
        raise ConfigError(f"seed energy {epsilon} must lie below E0 = {model.ground_energy}")
    x = grid.x
    if not grid.x_min <= x_anchor <= grid.x_max:
        raise ConfigError(f"anchor {x_anchor} outside the grid")
    vfun = _scalar_potential(model)

    right = x[x >= x_anchor]
    left = x[x < x_anchor][::-1]
    u0, up0 = float(init[0]), float(init[1])

    pts_r = right if (len(right) and right[0] == x_anchor) else np.concatenate(([x_anchor], right))
    vals_r, logs_r = _rk4_path(vfun, epsilon, pts_r, (u0, up0), substeps)
    if not (len(right) and right[0] == x_anchor):
        vals_r, logs_r = vals_r[1:], logs_r[1:]

    pts_l = np.concatenate(([x_anchor], left))
    vals_l, logs_l = _rk4_path(vfun, epsilon, pts_l, (u0, up0), substeps)
    vals_l, logs_l = vals_l[1:][::-1], logs_l[1:][::-1]

    vals = np.concatenate((vals_l, vals_r))
    logs = np.concatenate((logs_l, logs_r))
    u, up = vals[:, 0], vals[:, 1]
    nodes = _sign_changes(x, u)
    beta_ends = (up[0] / u[0] if u[0] else 0.0, up[-1] / u[-1] if u[-1] else 0.0)
    # 1/u decays toward both edges exactly when |u| grows toward both edges
    normalizable = not nodes and beta_ends[0] < 0 < beta_ends[1]
    return SeedSolution(float(epsilon), x, u, up, logs, normalizable, nodes)


@lru_cache(maxsize=None)
def _scalar_potential(model: ModelSpec):
    expr = model.potential_expr()
    return sp.lambdify(X, expr, "math")


def beta_from_seed(seed: SeedSolution) -> np.ndarray:
    """beta_1 = u'/u; the seed must be nodeless."""
    if seed.nodes:
        raise ZeroCrossing(f"seed at eps={seed.epsilon} vanishes inside the grid", seed.nodes)
    return seed.u_prime / seed.u


def riccati_residual(grid: Grid, beta: np.ndarray, v_prev: np.ndarray, epsilon: float,
                     margin: int = 2) -> float:
    """sup |beta' + beta^2 - 2 (V_prev - eps)| on the grid interior (5-point centered beta')."""
    d = first_derivative_5pt(beta, grid.h)
    r = np.abs(d + beta**2 - 2.0 * (v_prev - epsilon))
    return float(np.max(r[margin:-margin]))


def _normalize_pair(num, den):
    s = np.hypot(num, den)
    s[s == 0] = 1.0
    return num / s, den / s


def beta_recursion(beta_prev, beta_prev_at_eps, eps_prev: float, eps: float,
                   x: Optional[np.ndarray] = None, as_pair: bool = False):
    """beta_j(x, eps) = -beta_{j-1}(x, eps_{j-1}) - 2(eps_{j-1} - eps)/(beta_{j-1}(x, eps_{j-1}) - beta_{j-1}(x, eps)).

    ``beta_prev_at_eps`` may be an array or a (numerator, denominator) pair.
    With ``as_pair`` the result is returned as a normalized pair and poles are
    allowed; otherwise a vanishing denominator raises SingularDenominator.
    """
    beta_prev = np.asarray(beta_prev, dtype=float)
    if isinstance(beta_prev_at_eps, tuple):
        p, q = (np.asarray(t, dtype=float) for t in beta_prev_at_eps)
    else:
        p, q = np.asarray(beta_prev_at_eps, dtype=float), np.ones_like(beta_prev)
    den = beta_prev * q - p
    num = -beta_prev * den - 2.0 * (eps_prev - eps) * q
    num, den = _normalize_pair(num, den)
    if as_pair:
        return num, den
    return _pair_to_beta((num, den), x, f"beta at eps={eps}")


def _pair_to_beta(pair, x, what):
    num, den = pair
    locs = _sign_changes(np.arange(len(den)) if x is None else x, den)
    if locs:
        raise SingularDenominator(f"{what}: denominator vanishes", locs)
    return num / den


@dataclass(frozen=True)
class BetaChain:
    epsilons: Tuple[float, ...]
    betas: Tuple[np.ndarray, ...]
    seeds: Tuple[SeedSolution, ...]
    grid: Grid

    @property
    def k(self) -> int:
        return len(self.betas)


def default_seed_init(j: int):
    """Parity anchors at x=0: even for j = 1, 3, ..., odd for j = 2, 4, ..."""
    return (1.0, 0.0) if j % 2 == 1 else (0.0, 1.0)


def build_chain(model: ModelSpec, cfg: SusyConfig, grid: Grid,
                inits: Optional[Sequence] = None, x_anchor: Optional[float] = None,
                substeps: int = 4) -> BetaChain:
    """Seeds, then beta_1(x, eps_1), ..., beta_k(x, eps_k) by the pair recursion."""
    cfg.check(model)
    grid.check_model(model)
    if x_anchor is None:
        x_anchor = 0.0 if grid.x_min <= 0.0 <= grid.x_max else 0.5 * (grid.x_min + grid.x_max)
    eps = cfg.epsilons
    if inits is None:
        inits = [default_seed_init(j + 1) for j in range(len(eps))]
    seeds = tuple(solve_seed(model, e, grid, init, x_anchor, substeps) for e, init in zip(eps, inits))
    pairs = [(s.u_prime, s.u) for s in seeds]
    pairs = [_normalize_pair(np.array(p, dtype=float), np.array(q, dtype=float)) for p, q in pairs]
    x = grid.x
    betas = []
    for j in range(len(eps)):
        if j == 0 and seeds[0].nodes:
            raise ZeroCrossing(f"seed at eps={eps[0]} vanishes inside the grid", seeds[0].nodes)
        beta_j = _pair_to_beta(pairs[j], x, f"beta_{j + 1}")
        betas.append(beta_j)
        for l in range(j + 1, len(eps)):
            pairs[l] = beta_recursion(beta_j, pairs[l], eps[j], eps[l], x, as_pair=True)
    return BetaChain(tuple(eps), tuple(betas), seeds, grid)


def _seed_derivatives(model, seed: SeedSolution, order: int) -> List[np.ndarray]:
    """u, u', ..., u^(order) on the grid (scaled like the seed) using the ODE."""
    x = seed.x
    derivs = [seed.u, seed.u_prime]
    vders = [potential(model, x, r) for r in range(max(order - 1, 1))]
    for i in range(order - 1):
        # u^(i+2) = d^i/dx^i [2 (V0 - eps) u]
        acc = -2.0 * seed.epsilon * derivs[i]
        for r in range(i + 1):
            acc = acc + 2.0 * math.comb(i, r) * vders[r] * derivs[i - r]
        derivs.append(acc)
    return derivs[: order + 1]


def log_wronskian(model: ModelSpec, seeds: Sequence[SeedSolution]) -> Tuple[np.ndarray, np.ndarray]:
    """log|W(u_1, ..., u_k)| and the sign of W on the grid."""
    k = len(seeds)
    x = seeds[0].x
    cols, logs = [], np.zeros(len(x))
    for s in seeds:
        d = np.array(_seed_derivatives(model, s, k - 1))  # (k, npts)
        mag = np.max(np.abs(d), axis=0)
        mag[mag == 0] = 1.0
        cols.append(d / mag)
        logs += np.log(mag) + s.log_scale
    mats = np.stack(cols, axis=-1)  # (k, npts, k) -> rows are derivative orders
    mats = np.moveaxis(mats, 1, 0)  # (npts, k, k)
    sign, logdet = np.linalg.slogdet(mats)
    return logdet + logs, sign


def first_derivative_5pt(f: np.ndarray, h: float) -> np.ndarray:
    """Five-point centered first derivative; second-order one-sided at the edges."""
    out = np.gradient(f, h, edge_order=2)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    return out


def second_derivative_5pt(f: np.ndarray, h: float) -> np.ndarray:
    """Five-point second derivative; the two points at each edge use repeated np.gradient."""
    out = np.gradient(np.gradient(f, h, edge_order=2), h, edge_order=2)
    out[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)
    return out


@dataclass(frozen=True)
class PotentialTable:
    x: np.ndarray
    v0: np.ndarray
    vk_sum: np.ndarray
    vk_wronskian: np.ndarray
    max_discrepancy: float
    margin: int = 2


def partner_potential(model: ModelSpec, chain: BetaChain, margin: int = 2) -> PotentialTable:
    """V_k = V0 - sum_j beta_j' = V0 - (log W)'' computed both ways."""
    grid = chain.grid
    x = grid.x
    v0 = potential(model, x)
    vk_sum = v0 - sum(first_derivative_5pt(b, grid.h) for b in chain.betas)
    logw, sign = log_wronskian(model, chain.seeds)
    flips = _sign_changes(x, sign)
    if flips:
        raise SingularDenominator("Wronskian of the seeds vanishes", flips)
    vk_w = v0 - second_derivative_5pt(logw, grid.h)
    disc = float(np.max(np.abs(vk_sum - vk_w)[margin:-margin]))
    return PotentialTable(x, v0, vk_sum, vk_w, disc, margin)


# -- eigenfunctions ----------------------------------------------------------

def eigenfunction(model: ModelSpec, n: int, x) -> np.ndarray:
    """Normalized H0 eigenfunction psi_n^(0) sampled at x."""
    x = np.asarray(x, dtype=float)
    if model.kind == HARMONIC:
        prev = np.zeros_like(x)
        cur = np.pi ** -0.25 * np.exp(-x**2 / 2)
        for i in range(n):
            prev, cur = cur, math.sqrt(2.0 / (i + 1)) * x * cur - math.sqrt(i / (i + 1)) * prev
        return cur
    if model.kind == POSCHL_TELLER:
        nu = model.nu
        return _pt_norm(nu, n) * np.cos(x) ** nu * eval_gegenbauer(n, nu, np.sin(x))
    raise ConfigError("eigenfunctions are only available for the built-in models")


@lru_cache(maxsize=None)
def _pt_norm(nu: float, n: int) -> float:
    t, w = roots_legendre(400)
    xs = 0.5 * math.pi * t
    f = np.cos(xs) ** nu * eval_gegenbauer(n, nu, np.sin(xs))
    return 1.0 / math.sqrt(0.5 * math.pi * float(np.dot(w, f * f)))


def apply_b_dag(beta: np.ndarray, f: np.ndarray, h: float) -> np.ndarray:
    return (-np.gradient(f, h, edge_order=2) + beta * f) / math.sqrt(2.0)


def apply_b(beta: np.ndarray, f: np.ndarray, h: float) -> np.ndarray:
    return (np.gradient(f, h, edge_order=2) + beta * f) / math.sqrt(2.0)


def apply_B_dag(chain: BetaChain, f: np.ndarray) -> np.ndarray:
    for beta in chain.betas:
        f = apply_b_dag(beta, f, chain.grid.h)
    return f


def transform_eigenfunction(model: ModelSpec, chain: BetaChain, psi0: np.ndarray, e_n: float) -> np.ndarray:
    """psi_n^(k) = B_k^dagger psi_n^(0) / sqrt(prod_i (E_n - eps_i))."""
    if not e_n > chain.epsilons[0]:
        raise ConfigError("E_n must lie above every factorization energy")
    out = apply_B_dag(chain, np.asarray(psi0, dtype=float))
    return out / math.sqrt(math.prod(e_n - e for e in chain.epsilons))


def inner(f: np.ndarray, g: np.ndarray, h: float) -> float:
    return float(np.trapezoid(f * g, dx=h))


def l2_norm(f: np.ndarray, h: float) -> float:
    return math.sqrt(inner(f, f, h))


def hamiltonian_apply(v: np.ndarray, f: np.ndarray, h: float) -> np.ndarray:
    """-f''/2 + v f with the 3-point centered second difference."""
    d2 = np.empty_like(f)
    d2[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    d2[0], d2[-1] = d2[1], d2[-2]
    return -0.5 * d2 + v * f


def intertwining_residual(model: ModelSpec, chain: BetaChain, test_functions: Sequence[np.ndarray],
                          margin: Optional[int] = None) -> float:
    """max_phi ||(H_k B^dag - B^dag H0) phi|| / ||B^dag phi|| on the grid interior."""
    grid = chain.grid
    h = grid.h
    if margin is None:
        margin = 2 * chain.k + 4
    v0 = potential(model, grid.x)
    vk = partner_potential(model, chain).vk_sum
    worst = 0.0
    for phi in test_functions:
        bphi = apply_B_dag(chain, phi)
        lhs = hamiltonian_apply(vk, bphi, h)
        rhs = apply_B_dag(chain, hamiltonian_apply(v0, phi, h))
        r = lhs - rhs
        sl = slice(margin, len(r) - margin)
        num = math.sqrt(float(np.sum(r[sl] ** 2) * h))
        den = math.sqrt(float(np.sum(bphi[sl] ** 2) * h))
        worst = max(worst, num / den)
    return worst


def isolated_state(seed: SeedSolution) -> Tuple[np.ndarray, bool]:
    """psi_eps^(1) proportional to 1/u_1, grid-normalized, with the normalizability verdict."""
    if seed.nodes:
        raise ZeroCrossing(f"seed at eps={seed.epsilon} vanishes inside the grid", seed.nodes)
    logu = np.log(np.abs(seed.u)) + seed.log_scale
    f = np.exp(-(logu - logu.min()))
    h = seed.x[1] - seed.x[0]
    return f / math.sqrt(inner(f, f, h)), seed.normalizable
