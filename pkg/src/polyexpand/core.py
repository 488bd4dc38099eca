"""0/1-polytopes: representation, exact adjacency, skeletons, cube-symmetry canonical forms.

A 0/1-polytope is given by a set of distinct points of {0,1}^d; every such
point is automatically a vertex of the convex hull, so no redundancy removal
is ever needed.  Vertex indices always refer to the order of ``vertices``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product
from math import factorial
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import FormatError, LimitExceeded
from .graph import Graph
from .lp import OPTIMAL, maximize

Bits = tuple[int, ...]

CANONICAL_LIMIT = 6


@dataclass(frozen=True)
class ZeroOnePolytope:
    d: int
    vertices: tuple[Bits, ...]

    def __post_init__(self):
        verts = tuple(tuple(int(b) for b in v) for v in self.vertices)
        if self.d < 0:
            raise ValueError("negative dimension")
        for v in verts:
            if len(v) != self.d:
                raise ValueError(f"vertex {v} has length {len(v)}, expected {self.d}")
            if any(b not in (0, 1) for b in v):
                raise ValueError(f"vertex {v} is not a 0/1 vector")
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertices")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_strings(cls, rows: Iterable[str], d: int | None = None) -> "ZeroOnePolytope":
        rows = list(rows)
        if d is None:
            if not rows:
                raise ValueError("cannot infer dimension of an empty polytope")
            d = len(rows[0])
        return cls(d, tuple(tuple(int(ch) for ch in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict[Bits, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def labels(self) -> tuple[str, ...]:
        return tuple(bits_to_str(v) for v in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


def bits_to_str(v: Sequence[int]) -> str:
    return "".join(map(str, v))


def xor(a: Sequence[int], b: Sequence[int]) -> Bits:
    return tuple(x ^ y for x, y in zip(a, b))


# --- .pol files -------------------------------------------------------------

def parse_pol(text: str) -> ZeroOnePolytope:
    """Parse the ``.pol`` format: ``d n`` header then n rows of d bits; ``#`` comments."""
    header = None
    rows: list[Bits] = []
    seen: dict[Bits, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise FormatError("header must be 'd n'", lineno)
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise FormatError("header must contain two integers", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise FormatError("negative size in header", lineno)
            continue
        d = header[0]
        if len(line) != d or any(ch not in "01" for ch in line):
            raise FormatError(f"expected {d} characters from {{0,1}}, got {line!r}", lineno)
        v = tuple(int(ch) for ch in line)
        if v in seen:
            raise FormatError(f"duplicate vertex {line} (first at line {seen[v]})", lineno)
        seen[v] = lineno
        rows.append(v)
    if header is None:
        raise FormatError("missing header")
    if len(rows) != header[1]:
        raise FormatError(f"header declares {header[1]} vertices, found {len(rows)}")
    return ZeroOnePolytope(header[0], tuple(rows))


def format_pol(P: ZeroOnePolytope, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"# {c}" for c in comment.splitlines()]
    lines.append(f"{P.d} {P.n}")
    lines += [bits_to_str(v) for v in P.vertices]
    return "\n".join(lines) + "\n"


def read_pol(path: str | Path) -> ZeroOnePolytope:
    return parse_pol(Path(path).read_text())


def write_pol(P: ZeroOnePolytope, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_pol(P, comment))


# --- structure ---------------------------------------------------------------

def _rank(rows: list[list[Fraction]]) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / p[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], p)]
        rank += 1
    return rank


def dimension(P: ZeroOnePolytope) -> int:
    """Affine dimension: rank of the differences to the first vertex."""
    if P.n == 0:
        raise ValueError("empty polytope")
    v0 = P.vertices[0]
    diffs = [[Fraction(a - b) for a, b in zip(v, v0)] for v in P.vertices[1:]]
    return _rank(diffs) if diffs else 0


def adjacent(P: ZeroOnePolytope, u: int, v: int, shortcuts: bool = True) -> bool:
    """Whether the segment between vertices ``u`` and ``v`` is an edge of conv(P).

    LP: maximise the weight on vertices other than u, v over all convex
    combinations equal to the midpoint; the pair is adjacent iff that optimum
    is zero.  Only points agreeing with u and v where those agree can carry
    weight, so the LP runs on that sub-face; a mirror pair inside it is
    already a positive feasible solution.  ``shortcuts=False`` solves the
    LP over every vertex with no pruning.
    """
    if u == v:
        raise ValueError("identical vertices")
    a, b = P.vertices[u], P.vertices[v]
    diff = [i for i in range(P.d) if a[i] != b[i]]
    same = [i for i in range(P.d) if a[i] == b[i]]
    if not shortcuts:
        diff = list(range(P.d))
        same = []
    others = [w for k, w in enumerate(P.vertices)
              if k != u and k != v and all(w[i] == a[i] for i in same)]
    if not others:
        return True
    present = set(others) if shortcuts else set()
    for w in others if shortcuts else ():
        mirror = list(w)
        for i in diff:
            mirror[i] ^= 1
        if tuple(mirror) in present:
            return False
    cols = [a, b] + others
    A = [[2 * w[i] for w in cols] for i in diff]
    A.append([1] * len(cols))
    rhs = [a[i] + b[i] for i in diff] + [1]
    c = [0, 0] + [1] * len(others)
    res = maximize(c, A, rhs)
    if res.status != OPTIMAL:
        raise RuntimeError(f"adjacency LP ended with status {res.status}")
    return res.value == 0


AdjacencyRule = Callable[[Bits, Bits], bool]


def _build_skeleton(P: ZeroOnePolytope, rule: AdjacencyRule | None) -> Graph:
    edges = []
    for u, v in combinations(range(P.n), 2):
        if rule is None:
            ok = adjacent(P, u, v)
        else:
            ok = rule(P.vertices[u], P.vertices[v])
        if ok:
            edges.append((u, v))
    return Graph(P.n, tuple(edges), P.labels())


@lru_cache(maxsize=512)
def _cached_skeleton(P: ZeroOnePolytope) -> Graph:
    return _build_skeleton(P, None)


def skeleton(P: ZeroOnePolytope, rule: AdjacencyRule | None = None) -> Graph:
    """Graph of the polytope. ``rule`` swaps in a combinatorial adjacency test."""
    if P.n == 0:
        raise ValueError("empty polytope")
    if rule is None:
        return _cached_skeleton(P)
    return _build_skeleton(P, rule)


def is_simple(P: ZeroOnePolytope) -> bool:
    k = dimension(P)
    return all(deg == k for deg in skeleton(P).degrees)


def is_uniform(P: ZeroOnePolytope) -> int | None:
    sums = {sum(v) for v in P.vertices}
    return sums.pop() if len(sums) == 1 else None


# --- cube symmetries ------------------------------------------------------------

def point_index(v: Sequence[int]) -> int:
    """Position of a cube point in binary order (coordinate 0 most significant)."""
    p = 0
    for b in v:
        p = (p << 1) | b
    return p


def point_bits(p: int, d: int) -> Bits:
    return tuple((p >> (d - 1 - i)) & 1 for i in range(d))


def isometries(d: int) -> Iterable[tuple[tuple[int, ...], Bits]]:
    """All (perm, flips) pairs; the image of x has coordinate i equal to x[perm[i]] ^ flips[i]."""
    for perm in permutations(range(d)):
        for flips in product((0, 1), repeat=d):
            yield perm, flips


def apply_isometry(P: ZeroOnePolytope, perm: Sequence[int], flips: Sequence[int]) -> ZeroOnePolytope:
    verts = tuple(tuple(v[perm[i]] ^ flips[i] for i in range(P.d)) for v in P.vertices)
    return ZeroOnePolytope(P.d, verts)


@lru_cache(maxsize=None)
def group_point_images(d: int) -> np.ndarray:
    """Array of shape (|G|, 2^d): image point index of every cube point under every isometry."""
    N = 1 << d
    pts = [point_bits(p, d) for p in range(N)]
    out = np.empty((factorial(d) * N, N), dtype=np.int64)
    for g, (perm, flips) in enumerate(isometries(d)):
        out[g] = [point_index([x[perm[i]] ^ flips[i] for i in range(d)]) for x in pts]
    return out


@lru_cache(maxsize=None)
def _group_weights(d: int) -> np.ndarray:
    # bit N-1-p of the signature integer marks point p, so integer order == lexicographic order
    N = 1 << d
    imgs = group_point_images(d)
    return np.left_shift(np.uint64(1), (N - 1 - imgs).astype(np.uint64))


def canonical_mask(d: int, points: Iterable[int]) -> int:
    idx = np.fromiter(points, dtype=np.int64)
    if idx.size == 0:
        return 0
    w = _group_weights(d)[:, idx]
    return int(np.bitwise_or.reduce(w, axis=1).min())


def signature_string(mask: int, d: int) -> str:
    return format(mask, f"0{1 << d}b")


def canonical_form(P: ZeroOnePolytope, limit: int = CANONICAL_LIMIT) -> str:
    """Lexicographically least characteristic vector over the 2^d * d! cube isometries."""
    if P.d > limit or P.d > 6:
        raise LimitExceeded("canonicalization limit exceeded")
    return signature_string(canonical_mask(P.d, (point_index(v) for v in P.vertices)), P.d)


def polytope_from_signature(signature: str) -> ZeroOnePolytope:
    N = len(signature)
    d = N.bit_length() - 1
    if N != 1 << d:
        raise ValueError("signature length must be a power of two")
    return ZeroOnePolytope(d, tuple(point_bits(p, d) for p in range(N) if signature[p] == "1"))
