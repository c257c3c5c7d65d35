"""Property suites behind ``expansion-bounds verify``.

Each suite returns a list of :class:`Check`; a suite passes when every
check does.  The tests call the same functions, so the CLI and the test
run exercise identical code.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import asymmetric, entropy, pairing, symmetric
from .baseline import SMALL_SET_ALPHA, bollobas_bound

SUITES = ("entropy", "rootbound", "counting", "ordering", "dominance")

# hand expansions of Q(z) for the three proven degrees, ascending powers
EXPECTED_Q = {
    4: [0, 2, 1, -6, -3],
    6: [0, 3, 12, 0, -30, -15],
    8: [0, 4, 24, 56, -14, -140, -70],
}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def random_interior_problem(rng: np.random.Generator, max_t: int = 6) -> entropy.EntropyProblem:
    T = int(rng.integers(1, max_t + 1))
    b = tuple(rng.uniform(0.1, 100.0, T + 1))
    a = float(rng.uniform(0.1, 10.0))
    c = float(rng.uniform(0.05, 0.95)) * a * T
    return entropy.EntropyProblem(a, c, b)


def central_difference_c(problem: entropy.EntropyProblem, h: float = 1e-6) -> float:
    up = entropy.solve_entropy(problem.with_c(problem.c + h)).objective
    down = entropy.solve_entropy(problem.with_c(problem.c - h)).objective
    return (up - down) / (2 * h)


def entropy_suite(trials: int = 100, seed: int = 0, resolution: float = 1e-3) -> list:
    rng = np.random.default_rng(seed)
    worst_gap = worst_deriv = worst_resid = worst_scale = 0.0
    worst_case = None
    for _ in range(trials):
        p = random_interior_problem(rng)
        sol = entropy.solve_entropy(p)
        gap = abs(sol.objective - entropy.brute_force_phi_star(p, resolution))
        if gap > worst_gap:
            worst_gap, worst_case = gap, p
        # finite differences need a step well inside (0, aT)
        worst_deriv = max(worst_deriv, abs(entropy.phi_star_derivative_c(p) - central_difference_c(p)))
        mass = sum(sol.y_star)
        moment = sum(i * v for i, v in enumerate(sol.y_star))
        worst_resid = max(worst_resid, abs(mass - p.a) / p.a, abs(moment - p.c) / max(p.c, 1.0))
        t = float(rng.uniform(0.1, 10.0))
        scaled = entropy.solve_entropy(entropy.EntropyProblem(p.a, p.c, tuple(t * v for v in p.b)))
        worst_scale = max(worst_scale, abs(scaled.objective - sol.objective - p.a * math.log(t)),
                          abs(scaled.z_star - sol.z_star) / sol.z_star)
    return [
        Check("closed form vs grid oracle", worst_gap <= 5e-3,
              f"max gap {worst_gap:.3e} over {trials} problems (tol 5e-3)"
              + ("" if worst_gap <= 5e-3 else f"; worst {worst_case}")),
        Check("dPhi*/dc = -ln z* vs central difference", worst_deriv <= 1e-5,
              f"max error {worst_deriv:.3e} (tol 1e-5)"),
        Check("constraint residuals", worst_resid <= 1e-10, f"max relative residual {worst_resid:.3e}"),
        Check("weight scaling adds a ln t", worst_scale <= 1e-12, f"max deviation {worst_scale:.3e}"),
    ]


def rootbound_suite(grid_points: int = 1000, q_samples: int = 100_000) -> list:
    checks = []
    for delta in symmetric.VERIFIED_DELTAS:
        gammas = np.linspace(0.0, delta / 8, grid_points + 2)[1:-1]
        failures = [g for g in gammas if not symmetric.verify_root_bound(delta, float(g)).holds]
        checks.append(Check(f"z* < sqrt(g/(D/2-g)), D={delta}", not failures,
                            f"{grid_points} grid points, {len(failures)} failures"))
        q = symmetric.q_polynomial(delta)
        checks.append(Check(f"Q coefficients, D={delta}", q == EXPECTED_Q[delta], f"{q}"))
        checks.append(Check(f"Q > 0 on (0, 1/sqrt3), D={delta}",
                            symmetric.verify_q_positive(delta, q_samples), f"{q_samples} samples"))
    return checks


def monte_carlo_profiles(n: int, delta: int, subset, trials: int, seed: int) -> dict:
    """Empirical frequency of each configuration vector of ``subset``."""
    pairs = pairing.sample_pairings_batch(n, delta, trials, seed)
    side = np.zeros(n, dtype=bool)
    side[list(subset)] = True
    vert = pairs // delta
    crossing = side[vert[..., 0]] != side[vert[..., 1]]
    deg = np.zeros((trials, n), dtype=np.int64)
    rows = np.repeat(np.arange(trials), crossing.shape[1])
    for col in (0, 1):
        np.add.at(deg, (rows, vert[..., col].ravel()), crossing.ravel().astype(np.int64))
    # histogram of cross-degrees on each side, encoded as one integer per sample
    base = n + 1
    code = np.zeros(trials, dtype=np.int64)
    for inside in (True, False):
        cols = np.flatnonzero(side == inside)
        for j in range(delta + 1):
            code = code * base + (deg[:, cols] == j).sum(axis=1)
    values, counts = np.unique(code, return_counts=True)
    out = {}
    k = int(side.sum())
    for value, count in zip(values, counts):
        digits = []
        v = int(value)
        for _ in range(2 * (delta + 1)):
            digits.append(v % base)
            v //= base
        digits.reverse()
        s, s_bar = tuple(digits[: delta + 1]), tuple(digits[delta + 1:])
        c = sum(i * x for i, x in enumerate(s))
        out[pairing.ConfigurationVector(k, c, s, s_bar)] = int(count) / trials
    return out


def counting_suite(trials: int = 200_000, seed: int = 3) -> list:
    checks = []
    for n, delta in ((2, 2), (4, 2), (4, 4), (6, 4)):
        worst = 0.0
        for k in range(n + 1):
            total = sum(pairing.configuration_probability(n, delta, cv)
                        for cv in pairing.enumerate_profiles(n, delta, k))
            worst = max(worst, abs(total - 1.0))
        checks.append(Check(f"P sums to 1, n={n} D={delta}", worst <= 1e-9, f"max error {worst:.2e}"))

    zero = pairing.ConfigurationVector(1, 0, (1, 0, 0), (1, 0, 0))
    two = pairing.ConfigurationVector(1, 2, (0, 0, 1), (0, 0, 1))
    p0 = pairing.configuration_probability(2, 2, zero)
    p2 = pairing.configuration_probability(2, 2, two)
    enum = _enumerate_n2_delta2()
    checks.append(Check("n=2 D=2 exact profile probabilities",
                        abs(p0 - 1 / 3) <= 1e-12 and abs(p2 - 2 / 3) <= 1e-12
                        and enum == {0: Fraction(1, 3), 2: Fraction(2, 3)},
                        f"P(c=0)={p0:.12f}, P(c=2)={p2:.12f}, enumeration {dict(enum)}"))

    freq = monte_carlo_profiles(6, 4, (0, 1, 2), trials, seed)
    worst_z = 0.0
    profiles = [cv for cv in pairing.enumerate_profiles(6, 4, 3)
                if pairing.configuration_probability(6, 4, cv) > 0]
    for cv in profiles:
        p = pairing.configuration_probability(6, 4, cv)
        sigma = math.sqrt(p * (1 - p) / trials)
        worst_z = max(worst_z, abs(freq.get(cv, 0.0) - p) / sigma)
    unexpected = [cv for cv in freq if pairing.configuration_probability(6, 4, cv) == 0]
    checks.append(Check("Monte Carlo n=6 D=4 |S|=3 within 4 sigma", worst_z <= 4.0 and not unexpected,
                        f"{len(profiles)} profiles, {trials} samples, max |z| {worst_z:.2f}"))
    return checks


def perfect_matchings(points):
    """Every perfect matching of ``points`` as a tuple of pairs."""
    points = list(points)
    if not points:
        yield ()
        return
    first = points[0]
    for i in range(1, len(points)):
        rest = points[1:i] + points[i + 1:]
        for tail in perfect_matchings(rest):
            yield ((first, points[i]),) + tail


def _enumerate_n2_delta2() -> dict:
    """Cut size distribution of S={0} over the 3 perfect matchings of 4 half-edges."""
    matchings = list(perfect_matchings(range(4)))
    out = {}
    for m in matchings:
        cut = sum(1 for h1, h2 in m if (h1 // 2 == 0) != (h2 // 2 == 0))
        out[cut] = out.get(cut, Fraction(0)) + Fraction(1, len(matchings))
    return out


def brute_force_ordering(p: int, q: int) -> Fraction:
    """Fraction of all (p+q)! orders in which elements 0..p-1 precede p..p+q-1."""
    hits = 0
    total = 0
    for perm in itertools.permutations(range(p + q)):
        total += 1
        pos = {v: i for i, v in enumerate(perm)}
        if all(pos[a] < pos[b] for a in range(p) for b in range(p, p + q)):
            hits += 1
    return Fraction(hits, total)


def ordering_suite(max_total: int = 8) -> list:
    failures = []
    cases = 0
    for total in range(max_total + 1):
        for p in range(total + 1):
            q = total - p
            cases += 1
            exact = brute_force_ordering(p, q)
            if exact != Fraction(1, comb(p + q, q)) or pairing.ordering_probability(p, q) != 1 / comb(p + q, q):
                failures.append((p, q))
    return [Check(f"ordering probability 1/C(p+q,q), p+q <= {max_total}", not failures,
                  f"{cases} (p, q) pairs, failures {failures}")]


def dominance_suite(trials: int = 1000, seed: int = 0, grid_m: int = 200,
                    refine_m: int = 400, deltas=symmetric.VERIFIED_DELTAS) -> list:
    checks = []
    rng = np.random.default_rng(seed)
    for delta in deltas:
        nu = symmetric.nu_star(delta)
        nu_lower = bollobas_bound(delta)
        certs = {m: asymmetric.certify_asymmetric(delta, nu, grid_m, SMALL_SET_ALPHA, nu_lower, m)
                 for m in asymmetric.METHODS}
        violations = {m: 0 for m in asymmetric.METHODS}
        for _ in range(trials):
            alpha = float(rng.uniform(SMALL_SET_ALPHA, 0.5))
            gamma = float(rng.uniform(alpha * nu_lower, alpha * nu))
            x = asymmetric.sample_feasible(delta, alpha, gamma, int(rng.integers(2**32)))
            x_bar = asymmetric.sample_feasible(delta, 1 - alpha, gamma, int(rng.integers(2**32)))
            f = asymmetric.f_value(asymmetric.ExponentPoint(alpha, gamma, x, x_bar), delta)
            for m, cert in certs.items():
                cells = cert.cell_index(alpha, gamma)
                if not cells or any(f > cert.totals[j, k] for j, k in cells):
                    violations[m] += 1
        for m in asymmetric.METHODS:
            checks.append(Check(f"f <= covering cell bound ({m}), D={delta}", violations[m] == 0,
                                f"{trials} feasible tuples, {violations[m]} violations"))

        gammas = np.linspace(1e-4, delta / 8, 1002)[:-1]
        values = np.array([symmetric.h_value(delta, float(g)) for g in gammas])
        checks.append(Check(f"H strictly increasing on (1e-4, D/8), D={delta}",
                            bool(np.all(np.diff(values) > 0)), f"{len(gammas)} grid points"))

        for m in asymmetric.METHODS:
            fine = asymmetric.certify_asymmetric(delta, nu, refine_m, SMALL_SET_ALPHA, nu_lower, m)
            coarse = certs[m].f_star_upper
            checks.append(Check(f"refinement M={grid_m}->{refine_m} ({m}), D={delta}",
                                fine.f_star_upper <= coarse + 1e-12,
                                f"{coarse:.6f} -> {fine.f_star_upper:.6f}"))
    return checks


def run_suite(name: str, trials=None, seed=None) -> list:
    if name == "entropy":
        return entropy_suite(trials or 100, 0 if seed is None else seed)
    if name == "rootbound":
        return rootbound_suite()
    if name == "counting":
        return counting_suite(trials or 200_000, 3 if seed is None else seed)
    if name == "ordering":
        return ordering_suite()
    if name == "dominance":
        return dominance_suite(trials or 1000, 0 if seed is None else seed)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
