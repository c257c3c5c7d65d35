"""Pairing-model sampling, cut statistics and the counting/tie-breaking formulas.

Vertices are ``0..n-1``; half-edge ``(v, j)`` has flat id ``v * delta + j``.
Cuts and cross-degrees count configuration edges with multiplicity, and a
self-loop never crosses a cut.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Optional

import numpy as np

from .errors import EmptyOrFullSet, InvalidParity, TooLarge

EXACT_MAX_N = 24


@dataclass(frozen=True)
class MultiGraph:
    n: int
    delta: int
    matching: tuple
    seed: Optional[int] = None
    adjacency: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = [[] for _ in range(self.n)]
        seen = set()
        for h1, h2 in self.matching:
            if h1 in seen or h2 in seen or h1 == h2:
                raise ValueError(f"half-edge reused in pair ({h1}, {h2})")
            seen.update((h1, h2))
            u, v = h1 // self.delta, h2 // self.delta
            adj[u].append(v)
            adj[v].append(u)
        if len(seen) != self.n * self.delta:
            raise ValueError("matching is not perfect")
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, delta: int, edges: Iterable, seed=None) -> "MultiGraph":
        """Assign half-edges to an edge list in order of appearance."""
        used = [0] * n
        pairs = []
        for u, v in edges:
            h1 = u * delta + used[u]
            used[u] += 1
            h2 = v * delta + used[v]
            used[v] += 1
            if used[u] > delta or used[v] > delta:
                raise ValueError(f"vertex degree exceeds {delta}")
            pairs.append((h1, h2))
        return cls(n, delta, tuple(pairs), seed)

    def edges(self) -> list:
        return [(h1 // self.delta, h2 // self.delta) for h1, h2 in self.matching]

    def cut_size(self, subset) -> int:
        inside = _mask(self.n, subset)
        return sum(1 for u, v in self.edges() if inside[u] != inside[v])


def _mask(n: int, subset) -> list:
    inside = [False] * n
    for v in subset:
        inside[v] = True
    return inside


def sample_pairing(n: int, delta: int, seed) -> MultiGraph:
    """Uniform configuration: shuffle the n*delta half-edges, pair them in order."""
    if n <= 0 or n % 2 or delta <= 0 or delta % 2:
        raise InvalidParity(f"n and delta must be positive even integers, got n={n}, delta={delta}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n * delta)
    pairs = tuple((int(perm[i]), int(perm[i + 1])) for i in range(0, len(perm), 2))
    return MultiGraph(n, delta, pairs, seed)


def sample_pairings_batch(n: int, delta: int, count: int, seed) -> np.ndarray:
    """``count`` independent configurations as an array of shape (count, n*delta/2, 2)."""
    if n <= 0 or n % 2 or delta <= 0 or delta % 2:
        raise InvalidParity(f"n and delta must be positive even integers, got n={n}, delta={delta}")
    rng = np.random.default_rng(seed)
    base = np.tile(np.arange(n * delta), (count, 1))
    return rng.permuted(base, axis=1).reshape(count, -1, 2)


# ---------------------------------------------------------------------------
# cuts


@dataclass(frozen=True)
class ConfigurationVector:
    k: int
    c: int
    s: tuple
    s_bar: tuple

    def check(self, n: int) -> None:
        if sum(self.s) != self.k or sum(self.s_bar) != n - self.k:
            raise ValueError("histogram masses do not match k and n-k")
        if (sum(i * v for i, v in enumerate(self.s)) != self.c
                or sum(i * v for i, v in enumerate(self.s_bar)) != self.c):
            raise ValueError("histogram first moments do not match c")


def cross_degrees(graph: MultiGraph, subset) -> list:
    inside = _mask(graph.n, subset)
    return [sum(1 for u in graph.adjacency[v] if inside[u] != inside[v]) for v in range(graph.n)]


def configuration_vector(graph: MultiGraph, subset) -> ConfigurationVector:
    inside = _mask(graph.n, subset)
    deg = cross_degrees(graph, subset)
    s = [0] * (graph.delta + 1)
    s_bar = [0] * (graph.delta + 1)
    for v in range(graph.n):
        (s if inside[v] else s_bar)[deg[v]] += 1
    c = sum(d for v, d in enumerate(deg) if inside[v])
    return ConfigurationVector(sum(inside), c, tuple(s), tuple(s_bar))


def set_expansion(graph: MultiGraph, subset) -> float:
    members = set(subset)
    k = len(members)
    if k == 0 or k == graph.n:
        raise EmptyOrFullSet("expansion needs a proper nonempty subset")
    return graph.cut_size(members) / min(k, graph.n - k)


@dataclass(frozen=True)
class ScoreOrder:
    """Vertex scores pi(v) in 1..n; the score of S is the sum over its members."""
    pi: tuple

    def __post_init__(self):
        if sorted(self.pi) != list(range(1, len(self.pi) + 1)):
            raise ValueError("pi must be a permutation of 1..n")

    @classmethod
    def identity(cls, n: int) -> "ScoreOrder":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def random(cls, n: int, seed) -> "ScoreOrder":
        rng = np.random.default_rng(seed)
        return cls(tuple(int(v) + 1 for v in rng.permutation(n)))

    def score(self, subset) -> int:
        return sum(self.pi[v] for v in subset)


def exact_expansion(graph: MultiGraph) -> tuple[float, tuple]:
    """Minimum expansion over 1 <= |S| <= n/2 by full enumeration.

    Ties go to the smaller set, then to the smaller identity score
    (sum of v+1 over S).
    """
    n = graph.n
    if n > EXACT_MAX_N:
        raise TooLarge(f"exact enumeration is limited to n <= {EXACT_MAX_N}, got {n}")
    if n < 2:
        raise TooLarge("need at least two vertices")
    masks = np.arange(1, 1 << n, dtype=np.int32)
    size = np.zeros(masks.shape, dtype=np.int32)
    for v in range(n):
        size += (masks >> v) & 1
    keep = 2 * size <= n
    masks, size = masks[keep], size[keep]
    score = np.zeros_like(masks)
    for v in range(n):
        score += ((masks >> v) & 1) * (v + 1)
    cut = np.zeros_like(masks)
    for u, v in graph.edges():
        if u != v:
            cut += ((masks >> u) ^ (masks >> v)) & 1
    # exact rational comparison: cut_i/size_i vs cut_j/size_j via a common denominator
    lcm = math.lcm(*range(1, n // 2 + 1))
    scaled = cut * (lcm // size)
    best = scaled.min()
    cand = np.flatnonzero(scaled == best)
    order = np.lexsort((score[cand], size[cand]))
    pick = int(masks[cand[order[0]]])
    witness = tuple(v for v in range(n) if pick >> v & 1)
    return float(Fraction(int(best), lcm)), witness


# ---------------------------------------------------------------------------
# local improvement


def _key(graph: MultiGraph, inside: list, cut: int, order: ScoreOrder):
    k = sum(inside)
    small = min(k, graph.n - k)
    score = sum(order.pi[v] for v in range(graph.n) if inside[v])
    return (Fraction(cut, small), k, score)


def _normalize(graph: MultiGraph, inside: list, order: ScoreOrder) -> list:
    """Represent a cut by its smaller side (the lower-score side when balanced)."""
    k = sum(inside)
    flipped = [not b for b in inside]
    if 2 * k > graph.n:
        return flipped
    if 2 * k == graph.n:
        score = sum(order.pi[v] for v in range(graph.n) if inside[v])
        other = sum(order.pi[v] for v in range(graph.n) if flipped[v])
        if other < score:
            return flipped
    return inside


def _toggle_delta(graph: MultiGraph, inside: list, v: int) -> int:
    """Change in cut size if v switches sides."""
    same = sum(1 for u in graph.adjacency[v] if u != v and inside[u] == inside[v])
    across = sum(1 for u in graph.adjacency[v] if inside[u] != inside[v])
    return same - across


def case_one_move(graph: MultiGraph, subset) -> Optional[tuple]:
    """Move a vertex with cross-degree > delta/2 to the other side, if one exists."""
    inside = _mask(graph.n, subset)
    deg = cross_degrees(graph, subset)
    for v in range(graph.n):
        if deg[v] > graph.delta // 2:
            inside[v] = not inside[v]
            return tuple(u for u in range(graph.n) if inside[u])
    return None


def case_two_move(graph: MultiGraph, subset) -> Optional[tuple]:
    """For |S| < n/2, pull a vertex of the larger side with cross-degree delta/2 into S."""
    inside = _mask(graph.n, subset)
    if 2 * sum(inside) >= graph.n:
        return None
    deg = cross_degrees(graph, subset)
    for v in range(graph.n):
        if not inside[v] and deg[v] == graph.delta // 2:
            inside[v] = True
            return tuple(u for u in range(graph.n) if inside[u])
    return None


def local_search_expansion(graph: MultiGraph, order: ScoreOrder, start) -> tuple[float, tuple]:
    """Descend on the triple (expansion, |S|, score) from ``start``.

    Moves are single-vertex side switches (a superset of the Case I/II
    moves) and equal-cut swaps of a cross-degree delta/2 vertex of S with a
    non-adjacent cross-degree delta/2 vertex of the complement.  The best
    strictly improving move is taken until none remains.
    """
    n, half = graph.n, graph.delta // 2
    inside = _mask(n, start)
    if not 0 < sum(inside) < n:
        raise EmptyOrFullSet("start must be a proper nonempty subset")
    inside = _normalize(graph, inside, order)
    cut = graph.cut_size([v for v in range(n) if inside[v]])
    key = _key(graph, inside, cut, order)
    while True:
        best = None
        for v in range(n):
            k_new = sum(inside) + (-1 if inside[v] else 1)
            if not 0 < k_new < n:
                continue
            new_cut = cut + _toggle_delta(graph, inside, v)
            trial = list(inside)
            trial[v] = not trial[v]
            trial = _normalize(graph, trial, order)
            cand = _key(graph, trial, new_cut, order)
            if cand < key and (best is None or cand < best[0]):
                best = (cand, trial, new_cut)
        deg = cross_degrees(graph, [v for v in range(n) if inside[v]])
        side = [v for v in range(n) if inside[v] and deg[v] == half]
        other = [v for v in range(n) if not inside[v] and deg[v] == half]
        for u in side:
            nbrs = set(graph.adjacency[u])
            for w in other:
                if w in nbrs or order.pi[w] >= order.pi[u]:
                    continue
                trial = list(inside)
                trial[u], trial[w] = False, True
                new_cut = graph.cut_size([v for v in range(n) if trial[v]])
                trial = _normalize(graph, trial, order)
                cand = _key(graph, trial, new_cut, order)
                if cand < key and (best is None or cand < best[0]):
                    best = (cand, trial, new_cut)
        if best is None:
            break
        key, inside, cut = best
    return float(key[0]), tuple(v for v in range(n) if inside[v])


# ---------------------------------------------------------------------------
# counting formulas


def u_local_membership(cv: ConfigurationVector, n: int) -> bool:
    delta = len(cv.s) - 1
    half = delta // 2
    if any(cv.s[j] or cv.s_bar[j] for j in range(half + 1, delta + 1)):
        return False
    if 2 * cv.k < n and cv.s_bar[half] > 0:
        return False
    return True


@lru_cache(maxsize=None)
def _log_factorial_table(size: int) -> tuple:
    table = [0.0] * (size + 1)
    acc = 0.0
    for i in range(2, size + 1):
        acc += math.log(i)
        table[i] = acc
    return tuple(table)


def log_factorial(m: int) -> float:
    if m < 0:
        raise ValueError("factorial of a negative integer")
    size = 1 << max(10, (m).bit_length())
    return _log_factorial_table(size)[m]


def log_perfect_matchings(m: int) -> float:
    """ln of (m-1)!!, the number of perfect matchings on m points (m even)."""
    if m < 0 or m % 2:
        raise ValueError("perfect matchings need an even nonnegative count")
    # (m-1)!! = m! / (2^(m/2) (m/2)!)
    return log_factorial(m) - (m // 2) * math.log(2.0) - log_factorial(m // 2)


def configuration_probability(n: int, delta: int, cv: ConfigurationVector) -> float:
    """Probability that a fixed S with |S| = k has configuration vector ``cv``.

    Counts configurations: assign cross-degrees to the vertices of each
    side, choose which half-edges cross, match the c crossing half-edges
    across the cut and the rest within each side.
    """
    k, c = cv.k, cv.c
    inner, outer = delta * k - c, delta * (n - k) - c
    if inner < 0 or outer < 0 or inner % 2 or outer % 2:
        return 0.0
    log_p = (log_factorial(k) + log_factorial(n - k) + log_factorial(c)
             + log_perfect_matchings(inner) + log_perfect_matchings(outer)
             - log_perfect_matchings(delta * n))
    for hist in (cv.s, cv.s_bar):
        for i, cnt in enumerate(hist):
            if cnt:
                log_p += cnt * math.log(comb(delta, i)) - log_factorial(cnt)
    return math.exp(log_p)


def enumerate_profiles(n: int, delta: int, k: int) -> list:
    """All configuration vectors (s, s_bar) with |S| = k, any cut size."""
    def hists(count):
        if count == 0:
            yield (0,) * (delta + 1)
            return
        for combo in _compositions(count, delta + 1):
            yield combo

    out = []
    for s in hists(k):
        c = sum(i * v for i, v in enumerate(s))
        for s_bar in hists(n - k):
            if sum(i * v for i, v in enumerate(s_bar)) == c:
                out.append(ConfigurationVector(k, c, s, s_bar))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def ordering_probability(p: int, q: int) -> float:
    """Chance that p given elements all precede q others in a uniform order."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    return 1.0 / comb(p + q, q)


def lex_bound(n: int, delta: int, cv: ConfigurationVector) -> float:
    """min(1, n^(2 delta) / C(s_h + s_bar_h, s_h)) with h = delta/2."""
    half = delta // 2
    s_h, sb_h = cv.s[half], cv.s_bar[half]
    if s_h <= delta or sb_h <= delta:
        return 1.0
    log_binom = log_factorial(s_h + sb_h) - log_factorial(s_h) - log_factorial(sb_h)
    return math.exp(min(0.0, 2 * delta * math.log(n) - log_binom))


# ---------------------------------------------------------------------------
# edge-list files


def write_edge_list(graph: MultiGraph, path) -> None:
    seed = "none" if graph.seed is None else str(graph.seed)
    lines = [f"{graph.n} {graph.delta} {seed}"]
    lines += [f"{u} {v}" for u, v in graph.edges()]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_edge_list(path) -> MultiGraph:
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip()]
    n, delta, seed = rows[0]
    seed = None if seed == "none" else int(seed)
    edges = [(int(u), int(v)) for u, v in rows[1:]]
    return MultiGraph.from_edges(int(n), int(delta), edges, seed)
