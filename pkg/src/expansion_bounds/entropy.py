"""Closed-form solution of the mean-constrained relative entropy program.

The program is

    Phi*(a, c, b) = max  sum_i y_i ln(b_i / y_i)
                    s.t. sum_i y_i = a,  sum_i i*y_i = c,  y >= 0,

over indices ``i = 0..T``.  In the interior regime ``0 < c < a*T`` the
optimum is the exponentially tilted vector ``y_i = a * b_i z^i / Z(z)``
where ``z`` is the unique positive root of ``sum_i (a*i - c) b_i z^i``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateDimension, InfeasibleMoment, LengthMismatch, OutOfDomain

BRACKET_LO = 1e-18
BISECTION_RTOL = 1e-14
NEWTON_STEPS = 3
_MAX_BRACKET = 1e300


@dataclass(frozen=True)
class EntropyProblem:
    a: float
    c: float
    b: tuple

    def __post_init__(self):
        b = tuple(float(v) for v in self.b)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "c", float(self.c))
        if len(b) < 2:
            raise DegenerateDimension(f"need T >= 1, got weights of length {len(b)}")
        if not all(v > 0 and math.isfinite(v) for v in b):
            raise OutOfDomain("weights must be positive and finite")
        if not self.a > 0:
            raise OutOfDomain(f"mass a must be positive, got {self.a}")

    @property
    def T(self) -> int:
        return len(self.b) - 1

    @property
    def interior(self) -> bool:
        return 0.0 < self.c < self.a * self.T

    def with_c(self, c: float) -> "EntropyProblem":
        return EntropyProblem(self.a, c, self.b)


@dataclass(frozen=True)
class EntropySolution:
    y_star: tuple
    z_star: Optional[float]
    objective: float
    lam: Optional[float]
    mu: Optional[float]


def _scaled_coefficients(a: float, c: float, b: Sequence[float]) -> list:
    coef = [(a * i - c) * bi for i, bi in enumerate(b)]
    scale = max(abs(v) for v in coef)
    return [v / scale for v in coef]


def _eval(coef: Sequence[float], z: float) -> float:
    """Value of the polynomial, divided by z**T when z > 1 (sign preserved)."""
    acc = 0.0
    if z <= 1.0:
        for ci in reversed(coef):
            acc = acc * z + ci
    else:
        w = 1.0 / z
        for ci in coef:
            acc = acc * w + ci
    return acc


def _newton_ratio(coef: Sequence[float], z: float) -> Optional[float]:
    """P(z)/P'(z), evaluated in the reciprocal variable above z = 1."""
    T = len(coef) - 1
    p = dp = 0.0
    if z <= 1.0:
        for ci in reversed(coef):
            dp = dp * z + p
            p = p * z + ci
        return p / dp if dp > 0 else None
    # P(z) = z^T R(w), w = 1/z  =>  P/P' = z R / (T R - w R')
    w = 1.0 / z
    for ci in coef:
        dp = dp * w + p
        p = p * w + ci
    denom = T * p - w * dp
    return z * p / denom if denom > 0 else None


def _check_moment(problem: EntropyProblem, strict: bool) -> None:
    a, c, T = problem.a, problem.c, problem.T
    if strict and not (0.0 < c < a * T):
        raise InfeasibleMoment(f"root solving needs 0 < c < a*T, got c={c}, a*T={a * T}")
    if not strict and not (0.0 <= c <= a * T):
        raise InfeasibleMoment(f"need 0 <= c <= a*T, got c={c}, a*T={a * T}")


def root_z_star(problem: EntropyProblem) -> float:
    """Unique positive root of ``sum_i (a*i - c) b_i z^i``.

    The coefficient sequence changes sign exactly once, so a single
    bracket [1e-18, hi] with ``hi`` found by doubling always isolates the
    root; bisection narrows it and a few guarded Newton steps polish it.
    """
    _check_moment(problem, strict=True)
    coef = _scaled_coefficients(problem.a, problem.c, problem.b)
    lo, hi = BRACKET_LO, 1.0
    while _eval(coef, hi) <= 0.0:
        hi *= 2.0
        if hi > _MAX_BRACKET:
            raise InfeasibleMoment("no positive root below 1e300; c too close to a*T")
    while hi - lo > BISECTION_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if _eval(coef, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    for _ in range(NEWTON_STEPS):
        ratio = _newton_ratio(coef, z)
        if ratio is None:
            break
        step = z - ratio
        if not (lo <= step <= hi):
            break
        z = step
    return z


def root_residual(problem: EntropyProblem, z: float) -> float:
    """Relative residual |P(z)| / sum |coef_i| max(1, z^i)."""
    a, c = problem.a, problem.c
    num = 0.0
    den = 0.0
    for i, bi in enumerate(problem.b):
        ci = (a * i - c) * bi
        num += ci * z**i
        den += abs(ci) * max(1.0, z**i)
    return abs(num) / den


def _tilted(b: Sequence[float], a: float, z: float) -> tuple[list, float]:
    """Optimal vector and ln Z(z) for a given tilt, stable for large z."""
    T = len(b) - 1
    if z <= 1.0:
        terms = [bi * z**i for i, bi in enumerate(b)]
        total = sum(terms)
        log_z = math.log(total)
    else:
        w = 1.0 / z
        terms = [bi * w ** (T - i) for i, bi in enumerate(b)]
        total = sum(terms)
        log_z = T * math.log(z) + math.log(total)
    return [a * t / total for t in terms], log_z


def evaluate_objective(y: Sequence[float], b: Sequence[float]) -> float:
    """``sum_i y_i ln(b_i / y_i)`` with ``0 ln(./0) = 0``."""
    if len(y) != len(b):
        raise LengthMismatch(f"y has length {len(y)}, b has length {len(b)}")
    total = 0.0
    for yi, bi in zip(y, b):
        if yi < 0:
            raise OutOfDomain(f"negative entry {yi}")
        if yi > 0:
            total += yi * math.log(bi / yi)
    return total


def solve_entropy(problem: EntropyProblem) -> EntropySolution:
    _check_moment(problem, strict=False)
    a, c, b, T = problem.a, problem.c, problem.b, problem.T
    if c == 0.0:
        y = (a,) + (0.0,) * T
        return EntropySolution(y, None, a * math.log(b[0] / a), None, None)
    if c == a * T:
        y = (0.0,) * T + (a,)
        return EntropySolution(y, None, a * math.log(b[T] / a), None, None)
    z = root_z_star(problem)
    y, log_partition = _tilted(b, a, z)
    lam = log_partition - math.log(a) - 1.0
    return EntropySolution(tuple(y), z, evaluate_objective(y, b), lam, -math.log(z))


def phi_star(a: float, c: float, b: Sequence[float]) -> float:
    return solve_entropy(EntropyProblem(a, c, tuple(b))).objective


def phi_star_derivative_c(problem: EntropyProblem) -> float:
    return -math.log(root_z_star(problem))


def brute_force_phi_star(problem: EntropyProblem, resolution: float = 1e-3,
                         max_points: int = 200_000) -> float:
    """Grid-search lower bound on Phi* that never touches the root equation.

    The coordinates ``y_2..y_T`` are gridded; ``y_0`` and ``y_1`` follow from
    the two linear constraints and infeasible points are dropped.  When the
    full grid at ``resolution`` would exceed ``max_points`` the grid is
    coarser.  The best grid point then seeds a pattern search that trades
    mass between triples of indices (moves that keep both sums fixed),
    halving the step whenever no move improves.  Every evaluated point is
    feasible, hence the result never exceeds Phi*.
    """
    _check_moment(problem, strict=True)
    if not 0 < resolution <= 1e-2:
        raise ValueError("resolution must lie in (0, 1e-2]")
    a, c, T = problem.a, problem.c, problem.T
    b = np.asarray(problem.b)
    if T == 1:
        return evaluate_objective((a - c, c), problem.b)

    idx = np.arange(2, T + 1, dtype=float)
    upper = np.minimum(a, c / idx)
    d = T - 1
    logb = np.log(b)

    def values(y: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(y > 0, y * (logb - np.log(np.where(y > 0, y, 1.0))), 0.0).sum(axis=1)

    per_dim = int(min(math.ceil(1.0 / resolution) + 1, max(3, math.floor(max_points ** (1.0 / d)))))
    axes = [np.linspace(0.0, u, per_dim) for u in upper]
    free = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    y1 = c - free @ idx
    y0 = a - y1 - free.sum(axis=1)
    ok = (y0 >= 0) & (y1 >= 0)
    if not ok.any():
        raise InfeasibleMoment("grid contains no feasible point; lower the resolution")
    grid = np.column_stack([y0[ok], y1[ok], free[ok]])
    vals = values(grid)
    k = int(np.argmax(vals))
    best, y = float(vals[k]), grid[k]

    # ascent along exchanges of mass between three indices; each direction
    # keeps both sums fixed, and together they span every feasible direction
    dirs = []
    for i, j, m in itertools.combinations(range(T + 1), 3):
        v = np.zeros(T + 1)
        v[i], v[j], v[m] = m - j, -(m - i), j - i
        dirs.append(v / np.abs(v).max())
    dirs = np.array(dirs + [-v for v in dirs])
    step = float(upper.max()) / (per_dim - 1)
    floor_step = resolution * 1e-3 * a
    while step > floor_step:
        cand = y[None, :] + step * dirs
        cand = cand[np.all(cand >= 0, axis=1)]
        if len(cand):
            vals = values(cand)
            k = int(np.argmax(vals))
            if vals[k] > best:
                best, y = float(vals[k]), cand[k]
                continue
        step /= 2.0
    return best


# ---------------------------------------------------------------------------
# vectorized path used by the grid certifier


def solve_entropy_batch(a, c, b: Sequence[float]):
    """Array version of :func:`solve_entropy` for a fixed weight vector.

    Returns ``(objective, z, lam, mu)`` arrays.  Points with ``c <= 0`` or
    ``c >= a*T`` are clamped to the matching point-mass value and carry
    NaN for ``z``, ``lam`` and ``mu``.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    a, c = np.broadcast_arrays(a, c)
    bw = np.asarray(b, dtype=float)
    T = len(bw) - 1
    if T < 1:
        raise DegenerateDimension("need T >= 1")
    if np.any(a <= 0):
        raise OutOfDomain("mass a must be positive")

    shape = a.shape
    a = a.ravel()
    c = c.ravel()
    obj = np.empty_like(a)
    z_out = np.full_like(a, np.nan)
    lam_out = np.full_like(a, np.nan)
    mu_out = np.full_like(a, np.nan)

    low = c <= 0
    high = c >= a * T
    obj[low] = a[low] * np.log(bw[0] / a[low])
    obj[high] = a[high] * np.log(bw[T] / a[high])
    inner = ~(low | high)
    if np.any(inner):
        ai, ci = a[inner], c[inner]
        z = _batch_root(ai, ci, bw)
        powers = np.arange(T + 1)
        big = z > 1.0
        # ln Z and y for z <= 1 directly, for z > 1 in the reciprocal variable
        zz = np.where(big, 1.0 / z, z)[:, None]
        expo = np.where(big[:, None], T - powers[None, :], powers[None, :])
        terms = bw[None, :] * zz**expo
        total = terms.sum(axis=1)
        log_partition = np.log(total) + np.where(big, T * np.log(z), 0.0)
        y = ai[:, None] * terms / total[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(y > 0, y * (np.log(bw)[None, :] - np.log(y)), 0.0)
        obj[inner] = vals.sum(axis=1)
        z_out[inner] = z
        lam_out[inner] = log_partition - np.log(ai) - 1.0
        mu_out[inner] = -np.log(z)
    return (obj.reshape(shape), z_out.reshape(shape), lam_out.reshape(shape),
            mu_out.reshape(shape))


def _batch_eval(coef: np.ndarray, z: np.ndarray) -> np.ndarray:
    big = z > 1.0
    w = np.where(big, 1.0 / z, z)
    acc = np.zeros_like(z)
    acc_rev = np.zeros_like(z)
    for k in range(coef.shape[1]):
        acc = acc * w + coef[:, -1 - k]
        acc_rev = acc_rev * w + coef[:, k]
    return np.where(big, acc_rev, acc)


def _batch_root(a: np.ndarray, c: np.ndarray, b: np.ndarray) -> np.ndarray:
    T = len(b) - 1
    coef = (a[:, None] * np.arange(T + 1)[None, :] - c[:, None]) * b[None, :]
    coef = coef / np.abs(coef).max(axis=1, keepdims=True)
    lo = np.full_like(a, BRACKET_LO)
    hi = np.ones_like(a)
    grow = _batch_eval(coef, hi) <= 0
    while np.any(grow):
        hi = np.where(grow, hi * 2.0, hi)
        if np.any(hi > _MAX_BRACKET):
            raise InfeasibleMoment("no positive root below 1e300")
        grow = _batch_eval(coef, hi) <= 0
    active = hi - lo > BISECTION_RTOL * hi
    while np.any(active):
        mid = 0.5 * (lo + hi)
        neg = _batch_eval(coef, mid) < 0
        lo = np.where(active & neg, mid, lo)
        hi = np.where(active & ~neg, mid, hi)
        active = hi - lo > BISECTION_RTOL * hi
    z = 0.5 * (lo + hi)
    live = np.ones_like(z, dtype=bool)
    for _ in range(NEWTON_STEPS):
        big = z > 1.0
        w = np.where(big, 1.0 / z, z)
        p = np.zeros_like(z)
        dp = np.zeros_like(z)
        pr = np.zeros_like(z)
        dpr = np.zeros_like(z)
        for k in range(T + 1):
            dp = dp * w + p
            p = p * w + coef[:, T - k]
            dpr = dpr * w + pr
            pr = pr * w + coef[:, k]
        denom = np.where(big, T * pr - w * dpr, dp)
        num = np.where(big, z * pr, p)
        ok = live & (denom > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = z - np.where(ok, num / np.where(ok, denom, 1.0), 0.0)
        ok &= (step >= lo) & (step <= hi)
        # mirror the scalar path: once a step is rejected, stop polishing that entry
        live = ok
        z = np.where(ok, step, z)
    return z
