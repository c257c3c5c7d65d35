"""Grid certification that the unbalanced-cut exponent f* is negative.

For alpha in (alpha_floor, 1/2) the supremum of f over feasible profiles
splits into G(alpha, gamma) + Phi*(alpha, gamma, b) + Phi*(1-alpha, gamma, b_bar).
The (alpha, gamma) region is cut into M x M cells and each cell is bounded
from above: G through its monotonicity (lower-left corner), the two Phi*
terms either by the corner maximum or by a tangent plane at the centre.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

import numpy as np

from .entropy import EntropyProblem, solve_entropy, solve_entropy_batch
from .errors import EmptyFeasibleSet, InfeasiblePoint, MonotoneGuardViolated, OutOfDomain

METHODS = ("corner", "tangent")
FEASIBILITY_TOL = 1e-9


def _xlogx(v: float) -> float:
    return v * math.log(v) if v > 0 else 0.0


def weights(delta: int) -> tuple[tuple, tuple]:
    """(b, b_bar): binomial weights on 0..delta/2 and on 0..delta/2-1."""
    half = delta // 2
    b = tuple(float(comb(delta, i)) for i in range(half + 1))
    return b, b[:-1]


def _check_g_domain(delta: int, alpha: float, gamma: float) -> None:
    if not 0 < alpha <= 0.5:
        raise OutOfDomain(f"alpha must lie in (0, 1/2], got {alpha}")
    if not 0 <= gamma < min(alpha * delta, (1 - alpha) * delta):
        raise OutOfDomain(f"gamma={gamma} outside [0, {min(alpha, 1 - alpha) * delta})")


def g_value(delta: int, alpha: float, gamma: float) -> float:
    _check_g_domain(delta, alpha, gamma)
    return (-(delta / 2) * math.log(delta) + _xlogx(gamma)
            + 0.5 * _xlogx(alpha * delta - gamma)
            + 0.5 * _xlogx(delta * (1 - alpha) - gamma))


def g_partials(delta: int, alpha: float, gamma: float) -> tuple[float, float]:
    _check_g_domain(delta, alpha, gamma)
    if gamma <= 0:
        raise OutOfDomain("dG/dgamma diverges at gamma = 0")
    inner = alpha * delta - gamma
    outer = delta * (1 - alpha) - gamma
    d_alpha = (delta / 2) * math.log(inner / outer)
    d_gamma = math.log(gamma / math.sqrt(inner * outer))
    return d_alpha, d_gamma


def _g_array(delta: int, alpha: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    def xlogx(v):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(v > 0, v * np.log(np.where(v > 0, v, 1.0)), 0.0)

    return (-(delta / 2) * math.log(delta) + xlogx(gamma)
            + 0.5 * xlogx(alpha * delta - gamma) + 0.5 * xlogx(delta * (1 - alpha) - gamma))


# ---------------------------------------------------------------------------
# the exponent itself


@dataclass(frozen=True)
class ExponentPoint:
    alpha: float
    gamma: float
    x: tuple
    x_bar: tuple

    def check(self, delta: int) -> None:
        half = delta // 2
        if len(self.x) != half + 1 or len(self.x_bar) != half + 1:
            raise InfeasiblePoint(f"profiles must have length {half + 1}")
        if not 0 < self.alpha < 1:
            raise InfeasiblePoint(f"alpha must lie in (0, 1), got {self.alpha}")
        for vec, mass, name in ((self.x, self.alpha, "x"), (self.x_bar, 1 - self.alpha, "x_bar")):
            if min(vec) < -FEASIBILITY_TOL:
                raise InfeasiblePoint(f"{name} has a negative entry")
            if abs(sum(vec) - mass) > FEASIBILITY_TOL:
                raise InfeasiblePoint(f"{name} sums to {sum(vec)}, expected {mass}")
            moment = sum(i * v for i, v in enumerate(vec))
            if abs(moment - self.gamma) > FEASIBILITY_TOL:
                raise InfeasiblePoint(f"{name} has first moment {moment}, expected {self.gamma}")
            if mass > 0.5 and abs(vec[half]) > FEASIBILITY_TOL:
                raise InfeasiblePoint(f"{name} must vanish at index {half} on the larger side")


def f_value(point: ExponentPoint, delta: int) -> float:
    point.check(delta)
    half = delta // 2
    alpha, gamma = point.alpha, point.gamma
    inner = alpha * delta - gamma
    outer = delta * (1 - alpha) - gamma
    if gamma <= 0 or inner < 0 or outer < 0:
        raise OutOfDomain(f"gamma={gamma} outside the exponent's domain")
    total = (-(delta / 2) * math.log(delta) + _xlogx(gamma)
             + 0.5 * _xlogx(inner) + 0.5 * _xlogx(outer))
    mid = max(point.x[half], 0.0) + max(point.x_bar[half], 0.0)
    if mid > 0:
        total += mid * math.log(comb(delta, half) / mid)
    for i in range(half):
        for v in (point.x[i], point.x_bar[i]):
            if v > 0:
                total += v * math.log(comb(delta, i) / v)
    return total


def sample_feasible(delta: int, alpha: float, gamma: float, seed) -> tuple:
    """A seeded random point of X(alpha, gamma).

    The polytope's vertices are supported on one or two indices bracketing
    the mean gamma/alpha; a Dirichlet mixture of all of them is returned.
    """
    half = delta // 2
    top = half - 1 if alpha > 0.5 else half
    if alpha <= 0 or gamma < 0:
        raise EmptyFeasibleSet(f"X({alpha}, {gamma}) is empty")
    mean = gamma / alpha
    if mean > top + 1e-12:
        raise EmptyFeasibleSet(f"X({alpha}, {gamma}) is empty: mean {mean} > {top}")
    mean = min(mean, float(top))
    vertices = []
    for i in range(top + 1):
        if abs(mean - i) <= 1e-12:
            v = [0.0] * (half + 1)
            v[i] = alpha
            vertices.append(v)
        for j in range(i + 1, top + 1):
            if i < mean < j:
                v = [0.0] * (half + 1)
                v[i] = alpha * (j - mean) / (j - i)
                v[j] = alpha * (mean - i) / (j - i)
                vertices.append(v)
    rng = np.random.default_rng(seed)
    mix = rng.dirichlet(np.ones(len(vertices))) if len(vertices) > 1 else np.ones(1)
    point = mix @ np.asarray(vertices)
    return tuple(float(v) for v in point)


def sup_f(delta: int, alpha: float, gamma: float) -> float:
    """Exact sup of f over X(alpha, gamma) x X(1-alpha, gamma) for alpha < 1/2."""
    b, b_bar = weights(delta)
    return (g_value(delta, alpha, gamma)
            + solve_entropy(EntropyProblem(alpha, gamma, b)).objective
            + solve_entropy(EntropyProblem(1 - alpha, gamma, b_bar)).objective)


# ---------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class CellBound:
    alpha_lo: float
    alpha_hi: float
    gamma_lo: float
    gamma_hi: float
    g_bound: float
    phi_bound: float
    phi_bar_bound: float
    total: float
    method: str

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _check_cell(delta, alpha_lo, alpha_hi, gamma_lo, gamma_hi, method):
    if method not in METHODS:
        raise OutOfDomain(f"unknown method {method!r}; expected one of {METHODS}")
    if not (0 < alpha_lo <= alpha_hi <= 0.5 and 0 <= gamma_lo <= gamma_hi):
        raise OutOfDomain("cell coordinates must satisfy 0 < a_lo <= a_hi <= 1/2, 0 <= g_lo <= g_hi")
    if gamma_hi >= delta * alpha_lo / 4:
        raise MonotoneGuardViolated(
            f"gamma_hi={gamma_hi} >= delta*alpha_lo/4={delta * alpha_lo / 4}; G is not monotone there")


def _phi_clamped(a: float, c: float, b: Sequence[float]) -> tuple:
    problem = EntropyProblem(a, min(max(c, 0.0), a * (len(b) - 1)), b)
    return solve_entropy(problem)


def cell_upper_bound(delta: int, alpha_lo: float, alpha_hi: float, gamma_lo: float,
                     gamma_hi: float, method: str = "corner") -> CellBound:
    _check_cell(delta, alpha_lo, alpha_hi, gamma_lo, gamma_hi, method)
    b, b_bar = weights(delta)
    g_bound = g_value(delta, alpha_lo, gamma_lo)
    if method == "corner":
        corners = [(a, g) for a in (alpha_lo, alpha_hi) for g in (gamma_lo, gamma_hi)]
        phi = max(_phi_clamped(a, g, b).objective for a, g in corners)
        phi_bar = max(_phi_clamped(1 - a, g, b_bar).objective for a, g in corners)
    else:
        a_mid, g_mid = 0.5 * (alpha_lo + alpha_hi), 0.5 * (gamma_lo + gamma_hi)
        a_half, g_half = 0.5 * (alpha_hi - alpha_lo), 0.5 * (gamma_hi - gamma_lo)
        phi = _tangent(solve_entropy(EntropyProblem(a_mid, g_mid, b)), a_half, g_half)
        phi_bar = _tangent(solve_entropy(EntropyProblem(1 - a_mid, g_mid, b_bar)), a_half, g_half)
    return CellBound(alpha_lo, alpha_hi, gamma_lo, gamma_hi, g_bound, phi, phi_bar,
                     g_bound + phi + phi_bar, method)


def _tangent(sol, a_half: float, c_half: float) -> float:
    # Phi*(a, c) is jointly concave; its tangent plane at the centre lies above it
    if sol.lam is None:
        raise OutOfDomain("tangent bound needs an interior centre")
    return sol.objective + abs(sol.lam) * a_half + abs(sol.mu) * c_half


# ---------------------------------------------------------------------------
# certificate


def alpha_edges(alpha_floor: float, grid_m: int) -> np.ndarray:
    edges = np.linspace(alpha_floor, 0.5, grid_m + 1)
    edges[0], edges[-1] = alpha_floor, 0.5
    return edges


def gamma_edges(alpha_lo: float, alpha_hi: float, nu_lower: float, nu: float,
                grid_m: int) -> np.ndarray:
    lo, hi = alpha_lo * nu_lower, alpha_hi * nu
    edges = np.linspace(lo, hi, grid_m + 1)
    edges[0], edges[-1] = lo, hi
    return edges


@dataclass
class Certificate:
    delta: int
    nu: float
    nu_lower: float
    alpha_floor: float
    grid_m: int
    f_star_upper: float
    negative: bool
    worst_cell: Optional[CellBound]
    method: str
    corner_f_star_upper: float
    tangent_f_star_upper: float
    sign_disagreements: int
    cell_errors: int
    totals: np.ndarray = field(repr=False, compare=False, default=None)

    def to_dict(self) -> dict:
        def num(v):
            return float(v) if math.isfinite(v) else None

        return {
            "delta": self.delta,
            "nu": self.nu,
            "nu_lower": self.nu_lower,
            "alpha_floor": self.alpha_floor,
            "grid_m": self.grid_m,
            "f_star_upper": num(self.f_star_upper),
            "negative": self.negative,
            "worst_cell": self.worst_cell.to_dict() if self.worst_cell else None,
            "method": self.method,
            "corner_f_star_upper": num(self.corner_f_star_upper),
            "tangent_f_star_upper": num(self.tangent_f_star_upper),
            "sign_disagreements": self.sign_disagreements,
            "cell_errors": self.cell_errors,
        }

    def cell_index(self, alpha: float, gamma: float) -> list:
        """(j, k) indices of every cell whose closed box contains (alpha, gamma)."""
        a_edges = alpha_edges(self.alpha_floor, self.grid_m)
        hits = []
        for j in range(self.grid_m):
            if not a_edges[j] <= alpha <= a_edges[j + 1]:
                continue
            g_edges = gamma_edges(a_edges[j], a_edges[j + 1], self.nu_lower, self.nu, self.grid_m)
            for k in range(self.grid_m):
                if g_edges[k] <= gamma <= g_edges[k + 1]:
                    hits.append((j, k))
        return hits


STRIPS_PER_TASK = 16


def _block(delta: int, a_lo: np.ndarray, a_hi: np.ndarray, g: np.ndarray):
    """Corner and tangent bounds for a block of alpha-strips.

    ``a_lo``/``a_hi`` have shape (B,), ``g`` holds each strip's gamma edges
    with shape (B, M+1).  Every returned array has shape (B, M).
    """
    b, b_bar = weights(delta)
    if np.any(g[:, -1] >= delta * a_lo / 4):
        raise MonotoneGuardViolated("gamma_hi >= delta*alpha_lo/4 in some strip")
    lo_col, hi_col = a_lo[:, None], a_hi[:, None]
    g_lo, g_hi = g[:, :-1], g[:, 1:]
    g_bound = _g_array(delta, np.broadcast_to(lo_col, g_lo.shape), g_lo)

    top = len(b) - 1
    aa = np.stack([np.broadcast_to(lo_col, g.shape), np.broadcast_to(hi_col, g.shape)])
    gg = np.stack([g, g])
    phi_nodes = solve_entropy_batch(aa, np.clip(gg, 0.0, aa * top), b)[0]
    phi_bar_nodes = solve_entropy_batch(1 - aa, np.clip(gg, 0.0, (1 - aa) * (top - 1)), b_bar)[0]

    def corner_max(nodes):
        return np.maximum(np.maximum(nodes[0, :, :-1], nodes[0, :, 1:]),
                          np.maximum(nodes[1, :, :-1], nodes[1, :, 1:]))

    corner_parts = (corner_max(phi_nodes), corner_max(phi_bar_nodes))
    corner = g_bound + corner_parts[0] + corner_parts[1]

    a_mid = np.broadcast_to(0.5 * (lo_col + hi_col), g_lo.shape)
    a_half = 0.5 * (hi_col - lo_col)
    g_mid = 0.5 * (g_lo + g_hi)
    g_half = 0.5 * (g_hi - g_lo)
    obj, _, lam, mu = solve_entropy_batch(a_mid, g_mid, b)
    tan_phi = obj + np.abs(lam) * a_half + np.abs(mu) * g_half
    obj, _, lam, mu = solve_entropy_batch(1 - a_mid, g_mid, b_bar)
    tan_phi_bar = obj + np.abs(lam) * a_half + np.abs(mu) * g_half
    if not (np.all(np.isfinite(tan_phi)) and np.all(np.isfinite(tan_phi_bar))):
        raise OutOfDomain("tangent bound needs interior cell centres")
    tangent = g_bound + tan_phi + tan_phi_bar
    return g_bound, corner_parts, corner, (tan_phi, tan_phi_bar), tangent


def certify_asymmetric(delta: int, nu: float, grid_m: int = 200, alpha_floor: float = 0.1,
                       nu_lower: Optional[float] = None, method: str = "tangent",
                       workers: Optional[int] = None) -> Certificate:
    """Upper-bound f* over alpha in (alpha_floor, 1/2), gamma in [alpha*nu_lower, alpha*nu].

    Cells are evaluated in fixed blocks of alpha-strips; blocks are the
    unit of parallel work, so the result does not depend on ``workers``.
    A block that raises marks all its cells +inf and the certificate fails.
    """
    from .baseline import bollobas_bound

    if method not in METHODS:
        raise OutOfDomain(f"unknown method {method!r}; expected one of {METHODS}")
    if nu_lower is None:
        nu_lower = bollobas_bound(delta)
    if not (nu > nu_lower > 0):
        raise OutOfDomain(f"need nu > nu_lower > 0, got nu={nu}, nu_lower={nu_lower}")
    if not 0 < alpha_floor < 0.5:
        raise OutOfDomain(f"alpha_floor must lie in (0, 1/2), got {alpha_floor}")
    if grid_m < 1:
        raise OutOfDomain("grid_m must be at least 1")

    a_edges = alpha_edges(alpha_floor, grid_m)
    g_edges = np.stack([gamma_edges(a_edges[j], a_edges[j + 1], nu_lower, nu, grid_m)
                        for j in range(grid_m)])
    blocks = [(j, min(j + STRIPS_PER_TASK, grid_m)) for j in range(0, grid_m, STRIPS_PER_TASK)]

    def task(span):
        j0, j1 = span
        try:
            return _block(delta, a_edges[j0:j1], a_edges[j0 + 1:j1 + 1], g_edges[j0:j1])
        except (OutOfDomain, ArithmeticError, ValueError):
            return None

    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, blocks))
    else:
        results = [task(span) for span in blocks]

    corner_tot = np.full((grid_m, grid_m), np.inf)
    tangent_tot = np.full((grid_m, grid_m), np.inf)
    g_bound = np.full((grid_m, grid_m), np.nan)
    parts = {m: (np.full((grid_m, grid_m), np.nan), np.full((grid_m, grid_m), np.nan))
             for m in METHODS}
    errors = 0
    for (j0, j1), res in zip(blocks, results):
        if res is None:
            errors += (j1 - j0) * grid_m
            continue
        g_bound[j0:j1] = res[0]
        corner_tot[j0:j1] = res[2]
        tangent_tot[j0:j1] = res[4]
        for m, pair in (("corner", res[1]), ("tangent", res[3])):
            parts[m][0][j0:j1] = pair[0]
            parts[m][1][j0:j1] = pair[1]
    totals = corner_tot if method == "corner" else tangent_tot
    j, k = divmod(int(np.argmax(totals)), grid_m)
    f_star = float(totals[j, k])
    worst = None
    if math.isfinite(f_star):
        worst = CellBound(float(a_edges[j]), float(a_edges[j + 1]), float(g_edges[j, k]),
                          float(g_edges[j, k + 1]), float(g_bound[j, k]),
                          float(parts[method][0][j, k]), float(parts[method][1][j, k]),
                          f_star, method)

    disagree = int(np.sum(np.sign(corner_tot) != np.sign(tangent_tot)))
    return Certificate(
        delta=delta, nu=float(nu), nu_lower=float(nu_lower), alpha_floor=float(alpha_floor),
        grid_m=grid_m, f_star_upper=f_star, negative=bool(errors == 0 and f_star < 0),
        worst_cell=worst, method=method,
        corner_f_star_upper=float(corner_tot.max()), tangent_f_star_upper=float(tangent_tot.max()),
        sign_disagreements=disagree, cell_errors=errors, totals=totals,
    )
