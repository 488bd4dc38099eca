"""Walls of 0/1-polytopes, fractional wall-matchings and the flag flow construction.

A wall is the intersection of the polytope with a face of the unit cube,
encoded by a pattern ``sigma`` over ``"01*"``.  Coordinates are 0-based, so
``mu`` is the smallest 0-based index carrying a star.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Sequence

from .core import ZeroOnePolytope, skeleton
from .errors import LimitExceeded
from .expansion import FlowField, certified_bound
from .graph import Graph

WALL_LIMIT = 12
STAR = "*"


@dataclass(frozen=True)
class Wall:
    sigma: str
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def stars(self) -> tuple[int, ...]:
        return tuple(i for i, ch in enumerate(self.sigma) if ch == STAR)

    @property
    def mu(self) -> int | None:
        return next((i for i, ch in enumerate(self.sigma) if ch == STAR), None)

    def is_initial(self) -> bool:
        fixed = self.sigma.rstrip(STAR)
        return STAR not in fixed


@dataclass(frozen=True)
class WallBipartite:
    wall: Wall
    mu: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # (left node, right node)


@dataclass(frozen=True)
class FractionalMatching:
    weights: dict
    left_degree: Fraction
    right_degree: Fraction

    def check(self, B: WallBipartite) -> bool:
        deg = {v: Fraction(0) for v in B.left + B.right}
        for (u, v), w in self.weights.items():
            if w < 0 or (u, v) not in set(B.edges):
                return False
            deg[u] += w
            deg[v] += w
        return (all(deg[u] == self.left_degree for u in B.left)
                and all(deg[v] == self.right_degree for v in B.right)
                and self.left_degree == len(B.right) and self.right_degree == len(B.left))


class MatchingCheck(NamedTuple):
    ok: bool
    failing: list
    matchings: dict


def _normalize_sigma(sigma) -> str:
    s = "".join(sigma) if not isinstance(sigma, str) else sigma
    s = s.replace("⋆", STAR)
    if any(ch not in "01*" for ch in s):
        raise ValueError(f"invalid wall pattern {sigma!r}")
    return s


@lru_cache(maxsize=256)
def _coordinate_sets(P: ZeroOnePolytope) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Per coordinate, the bitsets of vertex indices with value 1 and with value 0."""
    ones = [0] * P.d
    for k, v in enumerate(P.vertices):
        for i, b in enumerate(v):
            if b:
                ones[i] |= 1 << k
    full = (1 << P.n) - 1
    return tuple(ones), tuple(full & ~o for o in ones), full


def _members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _wall_of_mask(P: ZeroOnePolytope, mask: int) -> tuple[str, int]:
    ones, zeros, full = _coordinate_sets(P)
    sigma = []
    wall = full
    for i in range(P.d):
        if mask & zeros[i] == 0:
            sigma.append("1")
            wall &= ones[i]
        elif mask & ones[i] == 0:
            sigma.append("0")
            wall &= zeros[i]
        else:
            sigma.append(STAR)
    return "".join(sigma), wall


def wall_of_members(P: ZeroOnePolytope, members: Sequence[int]) -> Wall:
    """The wall spanned by ``members``: fix every coordinate on which they agree."""
    mask = 0
    for m in members:
        mask |= 1 << m
    if not mask:
        raise ValueError("empty vertex set spans no wall")
    sigma, wall = _wall_of_mask(P, mask)
    return Wall(sigma, _members(wall))


def wall_from_sigma(P: ZeroOnePolytope, sigma_raw) -> Wall | None:
    sigma = _normalize_sigma(sigma_raw)
    if len(sigma) != P.d:
        raise ValueError(f"pattern length {len(sigma)} differs from dimension {P.d}")
    ones, zeros, mask = _coordinate_sets(P)
    for i, ch in enumerate(sigma):
        if ch != STAR:
            mask &= ones[i] if ch == "1" else zeros[i]
    if not mask:
        return None
    sigma, wall = _wall_of_mask(P, mask)
    return Wall(sigma, _members(wall))


def enumerate_walls(P: ZeroOnePolytope, limit: int = WALL_LIMIT) -> list[Wall]:
    """All distinct nonempty walls, sorted by pattern.

    Walls are reached from the whole polytope by fixing star coordinates one
    at a time; every wall arises this way since fixing its coordinates in any
    order passes only through nonempty walls.
    """
    if P.d > limit:
        raise LimitExceeded(f"wall enumeration limit exceeded: d={P.d} > {limit}")
    return list(_all_walls(P))


@lru_cache(maxsize=64)
def _all_walls(P: ZeroOnePolytope) -> tuple[Wall, ...]:
    if P.n == 0:
        return ()
    ones, zeros, full = _coordinate_sets(P)
    start = _wall_of_mask(P, full)
    seen = {start[0]: start[1]}
    queue = deque([start])
    while queue:
        sigma, mask = queue.popleft()
        for i, ch in enumerate(sigma):
            if ch != STAR:
                continue
            for side in (ones[i], zeros[i]):
                child = _wall_of_mask(P, mask & side)
                if child[0] not in seen:
                    seen[child[0]] = child[1]
                    queue.append(child)
    return tuple(Wall(s, _members(seen[s])) for s in sorted(seen))


def bipartite(P: ZeroOnePolytope, W: Wall, G: Graph | None = None) -> WallBipartite | None:
    """B(W): skeleton edges between the two shores of W across mu(W); None for a point wall."""
    mu = W.mu
    if mu is None:
        return None
    G = G or skeleton(P)
    left = tuple(m for m in W.members if P.vertices[m][mu] == 0)
    right = tuple(m for m in W.members if P.vertices[m][mu] == 1)
    rset = set(right)
    edges = tuple((u, v) for u in left for v in G.adjacency[u] if v in rset)
    return WallBipartite(W, mu, left, right, edges)


def _max_flow(n: int, arcs: list[tuple[int, int, int]], s: int, t: int) -> tuple[int, dict]:
    """Edmonds-Karp on integer capacities; returns value and flow per arc index."""
    graph: list[list[int]] = [[] for _ in range(n)]
    head, cap = [], []
    for u, v, c in arcs:
        graph[u].append(len(head)); head.append(v); cap.append(c)
        graph[v].append(len(head)); head.append(u); cap.append(0)
    flow = [0] * len(head)
    total = 0
    while True:
        parent = [-1] * n
        parent[s] = -2
        queue = deque([s])
        while queue and parent[t] == -1:
            x = queue.popleft()
            for a in graph[x]:
                y = head[a]
                if parent[y] == -1 and cap[a] - flow[a] > 0:
                    parent[y] = a
                    queue.append(y)
        if parent[t] == -1:
            break
        push = None
        y = t
        while y != s:
            a = parent[y]
            push = cap[a] - flow[a] if push is None else min(push, cap[a] - flow[a])
            y = head[a ^ 1]
        y = t
        while y != s:
            a = parent[y]
            flow[a] += push
            flow[a ^ 1] -= push
            y = head[a ^ 1]
        total += push
    return total, {i: flow[2 * i] for i in range(len(arcs))}


def fractional_matching(B: WallBipartite) -> FractionalMatching | None:
    """Saturating max-flow: source->L capacity |R|, L->R unbounded, R->sink capacity |L|."""
    L, R = B.left, B.right
    if not L or not R:
        return None
    pos = {v: i + 1 for i, v in enumerate(L + R)}
    src, snk = 0, len(pos) + 1
    big = len(L) * len(R)
    arcs = [(src, pos[u], len(R)) for u in L]
    arcs += [(pos[u], pos[v], big) for u, v in B.edges]
    arcs += [(pos[v], snk, len(L)) for v in R]
    value, flow = _max_flow(len(pos) + 2, arcs, src, snk)
    if value != big:
        return None
    weights = {e: Fraction(flow[len(L) + k]) for k, e in enumerate(B.edges) if flow[len(L) + k]}
    return FractionalMatching(weights, Fraction(len(R)), Fraction(len(L)))


def uniform_matching(B: WallBipartite) -> FractionalMatching | None:
    """Equal weights on every edge, valid when both shores are degree-regular in B."""
    degs = {v: 0 for v in B.left + B.right}
    for u, v in B.edges:
        degs[u] += 1
        degs[v] += 1
    dl = {degs[u] for u in B.left}
    dr = {degs[v] for v in B.right}
    if len(dl) != 1 or len(dr) != 1 or 0 in dl or 0 in dr:
        return None
    w = Fraction(len(B.right), dl.pop())
    return FractionalMatching({e: w for e in B.edges}, Fraction(len(B.right)), Fraction(len(B.left)))


def has_fractional_wall_matchings(P: ZeroOnePolytope, limit: int = WALL_LIMIT) -> MatchingCheck:
    """Check every wall with a star coordinate; returns (ok, failing walls, matchings by sigma)."""
    G = skeleton(P)
    failing, found = [], {}
    for W in enumerate_walls(P, limit):
        B = bipartite(P, W, G)
        if B is None:
            continue
        fm = fractional_matching(B)
        if fm is None:
            failing.append(W)
        else:
            found[W.sigma] = (B, fm)
    return MatchingCheck(not failing, failing, found)


def initial_wall_of_edge(P: ZeroOnePolytope, e: tuple[int, int]) -> Wall:
    u, v = e
    if u == v or not skeleton(P).has_edge(u, v):
        raise ValueError(f"{e} is not an edge of the skeleton")
    a, b = P.vertices[u], P.vertices[v]
    i = next(k for k in range(P.d) if a[k] != b[k])
    W = wall_from_sigma(P, "".join(map(str, a[:i])) + STAR * (P.d - i))
    assert W is not None and W.mu == i
    return W


def flag(P: ZeroOnePolytope, t: int) -> list[Wall]:
    """W^0(t) >= W^1(t) >= ... >= W^d(t) = {t}; W^i fixes the first i coordinates of t."""
    tv = P.vertices[t]
    out = []
    for i in range(P.d + 1):
        W = wall_from_sigma(P, "".join(map(str, tv[:i])) + STAR * (P.d - i))
        out.append(W)
    return out


def build_wall_flow(P: ZeroOnePolytope, t: int, check: MatchingCheck | None = None) -> FlowField:
    """Aggregate flow moving one unit from every vertex into ``t`` along the flag of ``t``."""
    G = skeleton(P)
    matchings = check.matchings if check is not None else {}
    n = P.n
    f = FlowField()
    chain = flag(P, t)
    for i in range(1, P.d + 1):
        prev, cur = chain[i - 1], chain[i]
        if cur.size == prev.size:
            continue
        if prev.sigma in matchings:
            B, fm = matchings[prev.sigma]
        else:
            B = bipartite(P, prev, G)
            fm = fractional_matching(B)
            if fm is None:
                raise ValueError(f"wall {prev.sigma} has no fractional matching")
        assert B.mu == i - 1
        amount = Fraction(n, prev.size)
        keep = set(cur.members)
        senders_left = not (set(B.left) & keep)
        sender_degree = fm.left_degree if senders_left else fm.right_degree
        for (u, v), w in fm.weights.items():
            if senders_left:
                f.add(u, v, amount * w / sender_degree)
            else:
                f.add(v, u, amount * w / sender_degree)
    return f


def total_wall_flow(P: ZeroOnePolytope, limit: int = WALL_LIMIT) -> tuple[FlowField, Fraction]:
    check = has_fractional_wall_matchings(P, limit)
    if not check.ok:
        raise ValueError("walls without fractional matching: "
                         + ", ".join(W.sigma for W in check.failing))
    phi = FlowField()
    for t in range(P.n):
        phi.merge(build_wall_flow(P, t, check))
    return phi, phi.phi_max()


def wall_flow_bound(P: ZeroOnePolytope) -> Fraction:
    _, phi_max = total_wall_flow(P)
    return certified_bound(P.n, phi_max)


def regular_walls(P: ZeroOnePolytope, limit: int = WALL_LIMIT) -> bool:
    G = skeleton(P)
    for W in enumerate_walls(P, limit):
        if not G.induced(W.members).is_regular():
            return False
    return True


def is_balanced(P: ZeroOnePolytope, limit: int = WALL_LIMIT):
    """Counting balance |W00| |W11| <= |W10| |W01| over all walls and star pairs.

    Returns ``(True, None)`` or ``(False, (wall, i, j))`` for the first violation.
    """
    for W in enumerate_walls(P, limit):
        for i, j in combinations(W.stars, 2):
            count = {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0}
            for m in W.members:
                v = P.vertices[m]
                count[(v[i], v[j])] += 1
            if count[(0, 0)] * count[(1, 1)] > count[(1, 0)] * count[(0, 1)]:
                return False, (W, i, j)
    return True, None


def wall_report(P: ZeroOnePolytope, W: Wall, G: Graph | None = None) -> dict:
    B = bipartite(P, W, G)
    return {
        "sigma": W.sigma,
        "size": W.size,
        "mu": W.mu,
        "shores": [len(B.left), len(B.right)] if B else None,
        "has_fractional_matching": (fractional_matching(B) is not None) if B else True,
    }


def walls_json(P: ZeroOnePolytope, limit: int = WALL_LIMIT) -> str:
    G = skeleton(P)
    return json.dumps([wall_report(P, W, G) for W in enumerate_walls(P, limit)], indent=1)
