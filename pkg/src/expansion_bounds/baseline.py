"""Bollobas' classical expansion lower bound and the small-set constants."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfDomain

# Small sets (|S| <= 0.1 n) expand by at least 3*delta/8 - 1 a.a.s. for
# delta in {4, 6, 8}; a known result, taken as given rather than computed here.
SMALL_SET_ALPHA = 0.1


def small_set_floor(delta: int) -> float:
    return 3.0 * delta / 8.0 - 1.0


@dataclass(frozen=True)
class BaselineResult:
    delta: int
    eta: float
    nu_lower: float
    small_set_alpha: float
    small_set_floor: float


def _binary_entropy_gap(eta: float) -> float:
    left = (1.0 - eta) * math.log2(1.0 - eta) if eta < 1.0 else 0.0
    return left + (1.0 + eta) * math.log2(1.0 + eta)


def bollobas_eta(delta: int, tol: float = 1e-14) -> float:
    """Solve (1-e) log2(1-e) + (1+e) log2(1+e) = 4/delta for e in (0, 1).

    The left side increases from 0 to 2 on (0, 1), so plain bisection is
    enough; ``tol`` bounds the residual of the defining equation.
    """
    if delta < 4 or delta % 2:
        raise OutOfDomain(f"delta must be an even integer >= 4, got {delta}")
    if tol < 1e-14:
        raise ValueError("tol must be at least 1e-14")
    target = 4.0 / delta
    lo, hi = 0.0, 1.0
    while True:
        mid = 0.5 * (lo + hi)
        gap = _binary_entropy_gap(mid) - target
        if abs(gap) <= tol or mid in (lo, hi):
            return mid
        if gap < 0:
            lo = mid
        else:
            hi = mid


def bollobas_bound(delta: int) -> float:
    """Supremum (1 - eta) * delta / 2 of the admissible baseline bounds."""
    return (1.0 - bollobas_eta(delta)) * delta / 2.0


def baseline(delta: int) -> BaselineResult:
    eta = bollobas_eta(delta)
    return BaselineResult(
        delta=delta,
        eta=eta,
        nu_lower=(1.0 - eta) * delta / 2.0,
        small_set_alpha=SMALL_SET_ALPHA,
        small_set_floor=small_set_floor(delta),
    )
