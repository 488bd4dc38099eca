"""Affine edge-cubes, mirror images and the cube-spanned wall flow certificate."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .core import Bits, ZeroOnePolytope, skeleton, xor
from .errors import LimitExceeded
from .expansion import FlowField, certified_bound
from .graph import Graph
from .walls import STAR, Wall, enumerate_walls, wall_of_members

SUPPORT_LIMIT = 16
UNIQUE_LIMIT = 32
CUBE_FLOW_LIMIT = 16


@dataclass(frozen=True)
class AffineEdgeCube:
    """Points ``base xor (sum of eps_i * generators[i])``; point ``eps`` is indexed by the integer with bit i = eps_i."""

    base: Bits
    generators: tuple[Bits, ...]

    @property
    def k(self) -> int:
        return len(self.generators)

    def point(self, eps: int) -> Bits:
        x = self.base
        for i, z in enumerate(self.generators):
            if eps >> i & 1:
                x = xor(x, z)
        return x

    def points(self) -> list[Bits]:
        return [self.point(e) for e in range(1 << self.k)]

    def antipode(self) -> Bits:
        return self.point((1 << self.k) - 1)


def mirror_image(W: Wall, x: Sequence[int]) -> Bits:
    """x xor t(W), where t(W) is 1 exactly on the star positions of the wall pattern."""
    if len(x) != len(W.sigma):
        raise ValueError("length mismatch")
    return tuple(b ^ (ch == STAR) for b, ch in zip(x, W.sigma))


def spanned_wall(P: ZeroOnePolytope, A: Sequence[int]) -> Wall:
    return wall_of_members(P, A)


def is_edge_cube(P: ZeroOnePolytope, C: AffineEdgeCube, G: Graph | None = None) -> bool:
    gens = C.generators
    if any(not any(z) for z in gens):
        return False
    for z1, z2 in combinations(gens, 2):
        if any(a & b for a, b in zip(z1, z2)):
            return False
    pts = C.points()
    if any(p not in P.index for p in pts):
        return False
    G = G or skeleton(P)
    idx = [P.index[p] for p in pts]
    for e1, e2 in combinations(range(len(pts)), 2):
        cube_edge = bin(e1 ^ e2).count("1") == 1
        if G.has_edge(idx[e1], idx[e2]) != cube_edge:
            return False
    return True


def _exact_covers(target: int, blocks: list[int]) -> Iterator[list[int]]:
    """All sets of pairwise-disjoint blocks whose union is ``target`` (bitmasks), in block order."""
    if target == 0:
        yield []
        return
    low = target & -target
    for i, b in enumerate(blocks):
        if b & low and b & target == b:
            rest = [c for c in blocks[i + 1:] if not c & b]
            for cover in _exact_covers(target & ~b, rest):
                yield [b] + cover


def _mask(v: Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(v) if b)


def _unmask(m: int, d: int) -> Bits:
    return tuple((m >> i) & 1 for i in range(d))


def iter_antipodal_edge_cubes(P: ZeroOnePolytope, s: int, t: int,
                              limit: int = SUPPORT_LIMIT) -> Iterator[AffineEdgeCube]:
    """Every affine edge-cube with ``s`` as base and ``t`` as its antipode."""
    if s == t:
        raise ValueError("s and t must differ")
    a, b = P.vertices[s], P.vertices[t]
    target = _mask(xor(a, b))
    if bin(target).count("1") > limit:
        raise LimitExceeded(f"support of s xor t exceeds {limit}")
    G = skeleton(P)
    blocks = []
    for w in G.adjacency[s]:
        z = _mask(xor(a, P.vertices[w]))
        if z & target == z:
            blocks.append(z)
    # blocks ordered by their lowest coordinate, then by mask, for a deterministic search
    blocks.sort(key=lambda z: ((z & -z).bit_length(), z))
    for cover in _exact_covers(target, blocks):
        C = AffineEdgeCube(a, tuple(_unmask(z, P.d) for z in cover))
        if is_edge_cube(P, C, G):
            yield C


def find_antipodal_edge_cube(P: ZeroOnePolytope, s: int, t: int,
                             limit: int = SUPPORT_LIMIT) -> AffineEdgeCube | None:
    return next(iter_antipodal_edge_cubes(P, s, t, limit), None)


def spanning_edge_cubes(P: ZeroOnePolytope, W: Wall, limit: int = UNIQUE_LIMIT) -> list[frozenset[int]]:
    """Vertex sets of all affine edge-cubes spanning W (k >= 1).

    A cube spans W exactly when its antipodal pairs are mirror pairs of W, so
    it suffices to search from every mirror pair inside W.
    """
    if W.size > limit:
        raise LimitExceeded(f"wall of size {W.size} exceeds unique-spanning limit {limit}")
    members = set(W.members)
    found = []
    for x in W.members:
        y = P.index.get(mirror_image(W, P.vertices[x]))
        if y is None or y not in members or y <= x:
            continue
        for C in iter_antipodal_edge_cubes(P, x, y):
            vs = frozenset(P.index[p] for p in C.points())
            if vs not in found:
                found.append(vs)
    return found


def is_uniquely_spanned(P: ZeroOnePolytope, W: Wall, C: AffineEdgeCube,
                        limit: int = UNIQUE_LIMIT) -> bool:
    vs = frozenset(P.index[p] for p in C.points())
    if spanned_wall(P, sorted(vs)).members != W.members:
        raise ValueError("cube does not span the wall")
    return spanning_edge_cubes(P, W, limit) == [vs]


def cube_antipodal_flow(k: int) -> FlowField:
    """Sum over antipodal pairs of Q_k of the flow splitting evenly over all flip orders.

    Nodes are integers 0..2^k-1, arcs flip a single bit.  At a node where i
    directions are already flipped the remaining amount divides equally among
    the other k - i directions.
    """
    if not 1 <= k <= CUBE_FLOW_LIMIT:
        raise ValueError(f"k must be in 1..{CUBE_FLOW_LIMIT}")
    N = 1 << k
    # flow from source 0 to N-1; every other pair is an xor translate
    base: dict[tuple[int, int], Fraction] = {}
    amount = [Fraction(0)] * N
    amount[0] = Fraction(1)
    for x in sorted(range(N), key=lambda m: bin(m).count("1")):
        if amount[x] == 0 or x == N - 1:
            continue
        free = [j for j in range(k) if not x >> j & 1]
        share = amount[x] / len(free)
        for j in free:
            y = x | (1 << j)
            base[(x, y)] = share
            amount[y] += share
    psi = FlowField()
    for s in range(N):
        for (x, y), val in base.items():
            psi.add(x ^ s, y ^ s, val)
    return psi


def count_mirror_walls(P: ZeroOnePolytope, u: int, v: int, walls: list[Wall] | None = None) -> int:
    if u == v:
        raise ValueError("u and v must differ")
    walls = walls if walls is not None else enumerate_walls(P)
    a, b = P.vertices[u], P.vertices[v]
    count = 0
    for W in walls:
        mem = set(W.members)
        if u not in mem or v not in mem:
            continue
        ma = P.index.get(mirror_image(W, a))
        mb = P.index.get(mirror_image(W, b))
        if ma in mem and mb in mem:
            count += 1
    return count


def mirror_wall_counts(P: ZeroOnePolytope, walls: list[Wall] | None = None) -> np.ndarray:
    """Matrix of count_mirror_walls over all pairs at once (diagonal entries are meaningless)."""
    walls = walls if walls is not None else enumerate_walls(P)
    counts = np.zeros((P.n, P.n), dtype=np.int64)
    for W in walls:
        mem = set(W.members)
        closed = [m for m in W.members if P.index.get(mirror_image(W, P.vertices[m])) in mem]
        if len(closed) > 1:
            counts[np.ix_(closed, closed)] += 1
    return counts


@dataclass
class CubeSpanResult:
    n: int
    flow: FlowField
    phi_max: Fraction
    coverage: dict = field(default_factory=dict)  # (s, t) -> multiplicity
    walls: list = field(default_factory=list)  # (Wall, AffineEdgeCube)

    @property
    def complete(self) -> bool:
        return all(self.coverage.get((s, t), 0) >= 1
                   for s in range(self.n) for t in range(self.n) if s != t)

    @property
    def bound(self) -> Fraction | None:
        return certified_bound(self.n, self.phi_max) if self.phi_max > 0 else None

    def to_json(self) -> str:
        pairs = [{"s": s, "t": t, "multiplicity": self.coverage.get((s, t), 0)}
                 for s in range(self.n) for t in range(self.n) if s != t]
        bound = self.bound
        return json.dumps({
            "pairs": pairs,
            "summary": {
                "n": self.n,
                "complete": self.complete,
                "phi_max": str(self.phi_max),
                "bound": str(bound) if bound is not None else None,
            },
        }, indent=1)


def cswalls_total_flow(P: ZeroOnePolytope, unique_limit: int = UNIQUE_LIMIT,
                       support_limit: int = SUPPORT_LIMIT) -> CubeSpanResult:
    """Sum cube flows over all uniquely edge-cube spanned walls and record pair coverage.

    An edge-cube spanned wall is spanned by each antipodal pair of its cube,
    so scanning the walls spanned by vertex pairs reaches all of them.
    """
    phi = FlowField()
    coverage: dict[tuple[int, int], int] = {}
    used = []
    done: set[str] = set()
    for s, t in combinations(range(P.n), 2):
        W = spanned_wall(P, [s, t])
        if W.sigma in done:
            continue
        done.add(W.sigma)
        cubes = spanning_edge_cubes(P, W, unique_limit)
        if len(cubes) != 1:
            continue
        verts = sorted(cubes[0])
        x = verts[0]
        y = P.index[mirror_image(W, P.vertices[x])]
        C = find_antipodal_edge_cube(P, x, y, support_limit)
        used.append((W, C))
        idx = [P.index[p] for p in C.points()]
        for (e1, e2), val in cube_antipodal_flow(C.k).items():
            phi.add(idx[e1], idx[e2], val)
        for e in range(1 << C.k):
            a, b = idx[e], idx[e ^ ((1 << C.k) - 1)]
            coverage[(a, b)] = coverage.get((a, b), 0) + 1
    return CubeSpanResult(P.n, phi, phi.phi_max(), coverage, used)


def stable_set_cube(G: Graph, s: Sequence[int], t: Sequence[int]) -> AffineEdgeCube:
    """Edge-cube through the stable sets s and t: one generator per component of G[s xor t]."""
    s, t = frozenset(s), frozenset(t)
    for S in (s, t):
        if any(G.has_edge(u, v) for u, v in combinations(sorted(S), 2)):
            raise ValueError(f"{sorted(S)} is not stable")
    sym = sorted(s ^ t)
    comps = G.induced(sym).components()
    gens = tuple(tuple(int(any(sym[c] == v for c in comp)) for v in range(G.n)) for comp in comps)
    base = tuple(int(v in s) for v in range(G.n))
    return AffineEdgeCube(base, gens)

