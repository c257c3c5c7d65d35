"""Balanced-cut exponent H_Delta(gamma), its root bound, and nu*_Delta."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .entropy import EntropyProblem, root_z_star, solve_entropy
from .errors import NoSignChange, OutOfDomain, UnsupportedDelta

VERIFIED_DELTAS = (4, 6, 8)
DEFAULT_TOL = 1e-9
SEARCH_EPS = 1e-6


def _check_delta(delta: int) -> None:
    if delta < 4 or delta % 2:
        raise OutOfDomain(f"delta must be an even integer >= 4, got {delta}")


@dataclass(frozen=True)
class SymmetricWeights:
    delta: int
    b: tuple

    @classmethod
    def for_delta(cls, delta: int) -> "SymmetricWeights":
        _check_delta(delta)
        half = delta // 2
        b = [float(comb(delta, i)) for i in range(half + 1)]
        b[half] /= 2.0
        return cls(delta, tuple(b))

    @property
    def verified(self) -> bool:
        """The root bound has a proof only for these degrees."""
        return self.delta in VERIFIED_DELTAS


@dataclass(frozen=True)
class RootBoundWitness:
    delta: int
    gamma: float
    z_star: float
    z0: float
    holds: bool


def _problem(delta: int, gamma: float) -> EntropyProblem:
    return EntropyProblem(0.5, gamma, SymmetricWeights.for_delta(delta).b)


def h_value(delta: int, gamma: float) -> float:
    """H_Delta(gamma) = G(1/2, gamma) + 2 Phi*(1/2, gamma, b)."""
    _check_delta(delta)
    half = delta / 2
    if not 0 < gamma < half / 2:
        raise OutOfDomain(f"gamma must lie in (0, {half / 2}), got {gamma}")
    head = -half * math.log(delta) + gamma * math.log(gamma) + (half - gamma) * math.log(half - gamma)
    return head + 2.0 * solve_entropy(_problem(delta, gamma)).objective


def h_derivative(delta: int, gamma: float) -> float:
    _check_delta(delta)
    half = delta / 2
    if not 0 < gamma < half / 2:
        raise OutOfDomain(f"gamma must lie in (0, {half / 2}), got {gamma}")
    z = root_z_star(_problem(delta, gamma))
    return math.log(gamma / (half - gamma)) - 2.0 * math.log(z)


def h_point(delta: int, gamma: float, x) -> float:
    """The convexified exponent h(gamma, x) at a single profile x over 0..delta/2."""
    half = delta // 2
    w = SymmetricWeights.for_delta(delta).b
    head = (-(delta / 2) * math.log(delta) + gamma * math.log(gamma)
            + (delta / 2 - gamma) * math.log(delta / 2 - gamma))
    tail = sum(2.0 * xi * math.log(w[i] / xi) for i, xi in enumerate(x[: half + 1]) if xi > 0)
    return head + tail


# ---------------------------------------------------------------------------
# Q(z) case analysis

def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        for j, qj in enumerate(q):
            out[i + j] += pi * qj
    return out


def _poly_add(*ps):
    out = [0] * max(len(p) for p in ps)
    for p in ps:
        for i, v in enumerate(p):
            out[i] += v
    return out


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def q_polynomial(delta: int) -> list:
    """Integer coefficients (ascending powers) of Q(z) = (1+z^2) S1(z) - (delta/2) z^2 S2(z).

    The middle weight C(delta, delta/2)/2 is a half-integer in general, so
    the arithmetic runs on 2Q with integer weights 2b_i and is halved at
    the end; the halving is exact for every supported degree.
    """
    if delta not in VERIFIED_DELTAS:
        raise UnsupportedDelta(f"Q(z) case analysis exists only for delta in {VERIFIED_DELTAS}")
    half = delta // 2
    b2 = [2 * comb(delta, i) for i in range(half + 1)]
    b2[half] //= 2
    # 2*S1 has coefficients b2_i * i / 2 -> keep as Fraction to stay exact
    s1 = [Fraction(b2[i] * i, 2) for i in range(half + 1)]
    s2 = [Fraction(v) for v in b2]
    q2 = _poly_add(_poly_mul([1, 0, 1], s1), [-v for v in _poly_mul([0, 0, half], s2)])
    q = [v / 2 for v in q2]
    if any(v.denominator != 1 for v in q):
        raise AssertionError("Q(z) is expected to have integer coefficients")
    return _trim(int(v) for v in q)


def _q_decomposition(delta: int) -> tuple[list, list]:
    """Factored form of Q as (prefactor, list of terms), each term positive on (0, 1/sqrt 3)."""
    if delta == 4:
        # z (2 + z) (1 - 3 z^2)
        return _poly_mul([0, 1], [2, 1]), [[1, 0, -3]]
    if delta == 6:
        # 3z ((1 - 5 z^4) + z (4 - 10 z^2))
        return [0, 3], [[1, 0, 0, 0, -5], [0, 4, 0, -10]]
    if delta == 8:
        # 2z (2 + z (3 - 7 z^2) + z (9 - 35 z^4) + 14 z^2 (2 - 5 z^2))
        return [0, 2], [[2], [0, 3, 0, -7], [0, 9, 0, 0, 0, -35], [0, 0, 28, 0, -70]]
    raise UnsupportedDelta(f"no decomposition for delta={delta}")


def q_decomposition_expanded(delta: int) -> list:
    pre, terms = _q_decomposition(delta)
    return _trim(_poly_mul(pre, _poly_add(*terms)))


def verify_q_positive(delta: int, samples: int = 100_000) -> bool:
    """Q > 0 on a dense grid of the open interval (0, 1/sqrt 3), and the
    factored decomposition both expands to Q and has positive pieces there."""
    q = q_polynomial(delta)
    if q_decomposition_expanded(delta) != q:
        return False
    zs = np.linspace(0.0, 1.0 / math.sqrt(3.0), samples + 2)[1:-1]
    if not np.all(np.polynomial.polynomial.polyval(zs, q) > 0):
        return False
    pre, terms = _q_decomposition(delta)
    if not np.all(np.polynomial.polynomial.polyval(zs, pre) > 0):
        return False
    return all(np.all(np.polynomial.polynomial.polyval(zs, t) > 0) for t in terms)


def verify_root_bound(delta: int, gamma: float) -> RootBoundWitness:
    _check_delta(delta)
    if not 0 < gamma < delta / 8:
        raise OutOfDomain(f"gamma must lie in (0, {delta / 8}), got {gamma}")
    z = root_z_star(_problem(delta, gamma))
    z0 = math.sqrt(gamma / (delta / 2 - gamma))
    return RootBoundWitness(delta, gamma, z, z0, z < z0)


# ---------------------------------------------------------------------------

def nu_star(delta: int, tol: float = DEFAULT_TOL) -> float:
    """Root of nu -> H_Delta(nu/2) by bisection.

    For the verified degrees the bracket is (0, delta/4), where H is
    strictly increasing in gamma = nu/2.  Other even degrees have their
    root past delta/8; there the first sign change of a coarse scan over
    gamma in (0, delta/4) seeds the bisection and the answer carries no
    monotonicity guarantee (see :func:`root_bound_verified`).
    """
    _check_delta(delta)
    if tol < 1e-12:
        raise ValueError("tol must be at least 1e-12")
    lo, hi = SEARCH_EPS, delta / 4 - SEARCH_EPS
    f_lo = h_value(delta, lo / 2)
    f_hi = h_value(delta, hi / 2)
    if delta not in VERIFIED_DELTAS and f_lo < 0 and not f_hi > 0:
        scan = np.linspace(hi, delta / 2 - SEARCH_EPS, 400)
        prev = hi
        for nu in scan[1:]:
            if h_value(delta, nu / 2) > 0:
                lo, hi, f_hi = prev, nu, 1.0
                break
            prev = nu
    if not (f_lo < 0 < f_hi):
        raise NoSignChange(f"H(nu/2) has no sign change on [{lo}, {hi}]: {f_lo}, {f_hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if h_value(delta, mid / 2) < 0:
            lo = mid
        else:
            hi = mid
    nu = 0.5 * (lo + hi)
    if delta in VERIFIED_DELTAS and not nu / 2 < delta / 8:
        raise NoSignChange(f"root nu={nu} falls outside the monotone range")
    return nu


def root_bound_verified(delta: int) -> bool:
    return delta in VERIFIED_DELTAS


def truncate4(value: float) -> float:
    return math.floor(value * 1e4) / 1e4


def format4(value: float) -> str:
    return f"{truncate4(value):.4f}"
