"""Edge expansion, diameter, max-cut, the max-cut reduction, and flow-based bounds."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import LimitExceeded
from .graph import Graph

BRUTE_FORCE_LIMIT = 24
_CHUNK = 1 << 20


@dataclass(frozen=True)
class CutCertificate:
    subset: tuple[int, ...]
    cut_size: int
    ratio: Fraction

    def check(self, G: Graph) -> bool:
        S = set(self.subset)
        if not S or len(S) >= G.n:
            return False
        k = min(len(S), G.n - len(S))
        c = cut_size(G, S)
        return c == self.cut_size and Fraction(c, k) == self.ratio


@dataclass(frozen=True)
class ReductionOutput:
    g_prime: Graph
    original_n: int


class FlowField(dict):
    """Arc flows ``{(u, v): Fraction}`` on the bidirected network of a graph."""

    def add(self, u: int, v: int, amount) -> None:
        if amount:
            self[(u, v)] = self.get((u, v), Fraction(0)) + amount

    def merge(self, other: Mapping) -> None:
        for (u, v), x in other.items():
            self.add(u, v, x)

    def phi_max(self) -> Fraction:
        return max(self.values(), default=Fraction(0))

    def divergence(self, n: int) -> list[Fraction]:
        """Inflow minus outflow at every node."""
        div = [Fraction(0)] * n
        for (u, v), x in self.items():
            div[u] -= x
            div[v] += x
        return div

    def sorted_items(self):
        return sorted(self.items())

    def dump(self) -> str:
        """One ``u v num/den`` line per arc, arcs in sorted order."""
        out = []
        for (u, v), x in self.sorted_items():
            x = Fraction(x)
            out.append(f"{u} {v} {x.numerator}/{x.denominator}")
        return "\n".join(out) + ("\n" if out else "")


def cut_size(G: Graph, S: Iterable[int]) -> int:
    S = set(S)
    if not S or len(S) >= G.n:
        raise ValueError("improper cut")
    return sum((u in S) != (v in S) for u, v in G.edges)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


def _iter_chunks(total: int):
    start = 1
    while start < total:
        stop = min(total, start + _CHUNK)
        yield np.arange(start, stop, dtype=np.int64)
        start = stop


def _cut_sizes(G: Graph, masks: np.ndarray) -> np.ndarray:
    cuts = np.zeros(masks.shape, dtype=np.int64)
    for u, v in G.edges:
        cuts += ((masks >> u) ^ (masks >> v)) & 1
    return cuts


def _lex_least(masks: np.ndarray, n: int) -> tuple[int, ...]:
    # among equal-size sets the lexicographically least sorted tuple owns the
    # smallest element of any symmetric difference: maximise the bit-reversed key
    key = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        key |= ((masks >> i) & 1) << (n - 1 - i)
    best = int(masks[int(np.argmax(key))])
    return tuple(i for i in range(n) if best >> i & 1)


def edge_expansion_exact(G: Graph, limit: int = BRUTE_FORCE_LIMIT) -> tuple[Fraction, CutCertificate]:
    """Exact edge expansion by enumerating every subset with at most n/2 nodes.

    Ties are broken by smallest |S|, then lexicographically smallest S.
    A disconnected graph has expansion 0, witnessed by its smallest component.
    """
    n = G.n
    if n < 2:
        raise ValueError("expansion undefined")
    comps = G.components()
    if len(comps) > 1:
        comp = min(comps, key=lambda c: (len(c), c))
        return Fraction(0), CutCertificate(comp, 0, Fraction(0))
    if n > limit:
        raise LimitExceeded(f"instance too large: {n} nodes exceeds brute-force limit {limit}")

    half = n // 2
    best_cut = [None] * (half + 1)
    for masks in _iter_chunks(1 << n):
        sizes = _popcount(masks)
        keep = sizes <= half
        masks, sizes = masks[keep], sizes[keep]
        cuts = _cut_sizes(G, masks)
        for k in range(1, half + 1):
            sel = cuts[sizes == k]
            if sel.size:
                c = int(sel.min())
                if best_cut[k] is None or c < best_cut[k]:
                    best_cut[k] = c
    ratio, k = min((Fraction(best_cut[k], k), k) for k in range(1, half + 1))
    target = best_cut[k]

    witness = None
    for masks in _iter_chunks(1 << n):
        sizes = _popcount(masks)
        masks = masks[sizes == k]
        masks = masks[_cut_sizes(G, masks) == target]
        if masks.size:
            cand = _lex_least(masks, n)
            if witness is None or cand < witness:
                witness = cand
    return ratio, CutCertificate(witness, target, ratio)


def diameter(G: Graph) -> int:
    if G.n == 0:
        raise ValueError("empty graph")
    best = 0
    for s in range(G.n):
        dist = G.bfs_distances(s)
        if min(dist) < 0:
            raise ValueError("infinite diameter")
        best = max(best, max(dist))
    return best


def maxcut_bruteforce(G: Graph, limit: int = BRUTE_FORCE_LIMIT) -> tuple[int, frozenset[int]]:
    """Maximum cut by Gray-code enumeration with O(deg) incremental updates."""
    n = G.n
    if n > limit:
        raise LimitExceeded(f"instance too large: {n} nodes exceeds brute-force limit {limit}")
    if n <= 1:
        return 0, frozenset()
    adj = G.adjacency
    side = [False] * n
    cut = 0
    best, best_set = 0, frozenset()
    # node n-1 stays outside: S and its complement have the same cut
    for step in range(1, 1 << (n - 1)):
        j = (step & -step).bit_length() - 1
        inside = sum(side[w] for w in adj[j])
        delta = len(adj[j]) - 2 * inside
        cut += -delta if side[j] else delta
        side[j] = not side[j]
        if cut > best:
            best = cut
            best_set = frozenset(i for i in range(n) if side[i])
    return best, best_set


def np_reduction(G: Graph) -> ReductionOutput:
    """Graph on V + W (|W| = n) holding every pair except the edges of G."""
    n = G.n
    if n < 1:
        raise ValueError("reduction needs at least one node")
    edges = [e for e in combinations(range(2 * n), 2) if not (e[1] < n and G.has_edge(*e))]
    return ReductionOutput(Graph(2 * n, tuple(edges)), n)


def certified_bound(n: int, phi_max) -> Fraction:
    """Lower bound n / (2 phi_max) on the expansion, given all-pairs unit flows with max load phi_max."""
    phi_max = Fraction(phi_max)
    if phi_max <= 0:
        raise ValueError("phi_max must be positive")
    return Fraction(n) / (2 * phi_max)


def validate_target_flow(G: Graph, f: Mapping, t: int) -> bool:
    """True iff ``f`` moves one unit from every other node into ``t``."""
    for (u, v), x in f.items():
        if x < 0 or not G.has_edge(u, v):
            return False
    div = FlowField(f).divergence(G.n)
    return all(div[v] == (G.n - 1 if v == t else -1) for v in range(G.n))
