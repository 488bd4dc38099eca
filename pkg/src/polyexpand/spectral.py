"""The canonical lazy random walk on a graph and its second eigenvalue."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NoConvergence
from .graph import Graph

DEFAULT_TOL = 1e-9
MAX_ITERATIONS = 10**6
DENSE_LIMIT = 64


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple[tuple[Fraction, ...], ...]
    delta_max: int

    @property
    def n(self) -> int:
        return len(self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])


@dataclass(frozen=True)
class SpectralReport:
    n: int
    delta_max: int
    lambda2: float
    lower_bound: float
    upper_bound: float
    tol: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def build_walk_matrix(G: Graph) -> TransitionMatrix:
    """Off-diagonal 1/(2 Dmax) on edges; diagonal 1/2 + (Dmax - deg v)/(2 Dmax)."""
    if G.n < 2 or G.m == 0:
        raise ValueError("walk undefined")
    dmax = G.max_degree
    tau = Fraction(1, 2 * dmax)
    rows = []
    for v in range(G.n):
        row = [Fraction(0)] * G.n
        for w in G.adjacency[v]:
            row[w] = tau
        row[v] = Fraction(1, 2) + (dmax - G.degree(v)) * tau
        rows.append(tuple(row))
    return TransitionMatrix(tuple(rows), dmax)


def _dense_lambda2(P: np.ndarray) -> float:
    # eigvalsh returns ascending eigenvalues; the top one is 1 with the uniform vector
    return float(np.linalg.eigvalsh(P)[-2])


def _power_lambda2(P: np.ndarray, tol: float, max_iter: int) -> float:
    n = P.shape[0]
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    rho = 0.0
    for _ in range(max_iter):
        y = P @ x
        y -= y.mean()
        rho = float(x @ y)
        norm = np.linalg.norm(y)
        if norm < 1e-300:
            return 0.0
        if np.linalg.norm(y - rho * x) <= tol:
            return rho
        x = y / norm
    raise NoConvergence("power iteration did not converge", rho)


def second_eigenvalue(M: TransitionMatrix, tol: float = DEFAULT_TOL, method: str = "auto",
                      max_iter: int = MAX_ITERATIONS) -> float:
    """Second largest eigenvalue of the walk matrix.

    ``method`` is ``"dense"`` (full symmetric eigensolve), ``"power"``
    (power iteration deflated against the uniform eigenvector) or ``"auto"``,
    which picks dense for n <= 64.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    P = M.to_numpy()
    if method == "auto":
        method = "dense" if M.n <= DENSE_LIMIT else "power"
    if method == "dense":
        return _dense_lambda2(P)
    if method == "power":
        return _power_lambda2(P, tol, max_iter)
    raise ValueError(f"unknown method {method!r}")


def expansion_bounds(lambda2: float, delta_max: int, n: int = 0, tol: float = DEFAULT_TOL) -> SpectralReport:
    """(1 - l2) Dmax <= h(G) <= sqrt(8 (1 - l2)) Dmax."""
    if lambda2 >= 1:
        raise ValueError("graph disconnected or numerically degenerate")
    if lambda2 < 0:
        raise ValueError("lambda2 must be nonnegative")
    gap = 1 - lambda2
    return SpectralReport(n, delta_max, lambda2, gap * delta_max,
                          math.sqrt(8 * gap) * delta_max, tol)


def spectral_report(G: Graph, tol: float = DEFAULT_TOL) -> SpectralReport:
    """Report for a graph; disconnected graphs get lambda2 = 1 and zero bounds."""
    M = build_walk_matrix(G)
    if not G.is_connected():
        return SpectralReport(G.n, M.delta_max, 1.0, 0.0, 0.0, tol)
    lam = second_eigenvalue(M, tol)
    # rounding can push an exactly-zero eigenvalue slightly negative
    lam = max(lam, 0.0)
    return expansion_bounds(lam, M.delta_max, G.n, tol)


def walk_distribution(M: TransitionMatrix, pi0: Sequence, steps: int) -> tuple[Fraction, ...]:
    """pi0 P^steps by exact row-vector iteration."""
    pi = [Fraction(x) for x in pi0]
    if len(pi) != M.n:
        raise ValueError("distribution length differs from matrix size")
    if any(x < 0 for x in pi) or sum(pi) != 1:
        raise ValueError("pi0 must be a probability vector")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    cols = [[(i, row[j]) for i, row in enumerate(M.entries) if row[j]] for j in range(M.n)]
    for _ in range(steps):
        pi = [sum((pi[i] * p for i, p in col), Fraction(0)) for col in cols]
    return tuple(pi)
