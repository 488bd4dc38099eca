"""Classification of d-dimensional 0/1-polytopes up to cube isometry, and the eigenvalue survey."""
from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .core import (ZeroOnePolytope, canonical_mask, dimension, group_point_images,
                   polytope_from_signature, signature_string, skeleton)
from .errors import LimitExceeded
from .expansion import BRUTE_FORCE_LIMIT, diameter, edge_expansion_exact
from .spectral import DEFAULT_TOL, spectral_report

log = logging.getLogger(__name__)

WORKERS_ENV = "POLYEXPAND_WORKERS"
DEFAULT_BIN_WIDTH = 0.1


@dataclass(frozen=True)
class ClassRecord:
    signature: str
    n_vertices: int
    dimension: int
    representative: ZeroOnePolytope


@dataclass(frozen=True)
class SurveyRow:
    signature: str
    n: int
    m: int
    diameter: int
    lambda2: float
    delta_max: int
    lower_bound: float
    upper_bound: float
    expansion: Fraction
    certificate: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "signature": self.signature,
            "n": self.n,
            "m": self.m,
            "diameter": self.diameter,
            "lambda2": self.lambda2,
            "delta_max": self.delta_max,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "expansion": str(self.expansion),
            "certificate": list(self.certificate),
        }


def default_workers() -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _byte_tables(d: int) -> np.ndarray:
    """tables[g, c, byte] = image of the points encoded by ``byte`` in chunk c of a subset mask."""
    N = 1 << d
    imgs = group_point_images(d)
    nchunks = (N + 7) // 8
    bits = (np.arange(256)[:, None] >> np.arange(8)[None, :]) & 1  # (256, 8)
    tables = np.zeros((imgs.shape[0], nchunks, 256), dtype=np.int64)
    for c in range(nchunks):
        for j in range(8):
            b = 8 * c + j
            if b >= N:
                break
            p = N - 1 - b  # mask bit b marks point p
            img_bit = np.left_shift(np.int64(1), (N - 1 - imgs[:, p]).astype(np.int64))
            tables[:, c, :] |= bits[None, :, j] * img_bit[:, None]
    return tables


def _canonical_all(d: int) -> np.ndarray:
    """Canonical mask of every subset of {0,1}^d (feasible for d <= 4)."""
    N = 1 << d
    masks = np.arange(1 << N, dtype=np.int64)
    tables = _byte_tables(d)
    chunks = [(masks >> (8 * c)) & 0xFF for c in range(tables.shape[1])]
    best = masks.copy()
    for g in range(tables.shape[0]):
        img = np.zeros_like(masks)
        for c, ch in enumerate(chunks):
            img |= tables[g, c][ch]
        np.minimum(best, img, out=best)
    return best


def _record(sig_mask: int, d: int) -> ClassRecord | None:
    P = polytope_from_signature(signature_string(sig_mask, d))
    if P.n == 0 or dimension(P) != d:
        return None
    return ClassRecord(signature_string(sig_mask, d), P.n, d, P)


def _mask_points(mask: int, d: int) -> list[int]:
    N = 1 << d
    return [N - 1 - b for b in range(N) if mask >> b & 1]


def classify_by_augmentation(d: int) -> list[ClassRecord]:
    """Orbit representatives grown one point at a time; dedupe by canonical mask per level."""
    N = 1 << d
    level = {canonical_mask(d, [0])}
    reps = set(level)
    for size in range(1, N):
        nxt = set()
        for mask in level:
            pts = _mask_points(mask, d)
            present = set(pts)
            for p in range(N):
                if p not in present:
                    nxt.add(canonical_mask(d, pts + [p]))
        log.info("d=%d: %d classes with %d points", d, len(nxt), size + 1)
        reps |= nxt
        level = nxt
    records = [_record(m, d) for m in sorted(reps)]
    return [r for r in records if r is not None]


def classify(d: int, stretch: bool = False) -> list[ClassRecord]:
    """One record per isometry class of full-dimensional 0/1-polytopes in {0,1}^d, sorted by signature."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    if d > 5:
        raise LimitExceeded("classification is limited to d <= 5")
    if d == 5:
        if not stretch:
            raise LimitExceeded("d = 5 needs the explicit stretch flag (very long running)")
        return classify_by_augmentation(d)
    canon = np.unique(_canonical_all(d))
    records = [_record(int(m), d) for m in canon if m]
    return [r for r in records if r is not None]


def survey_row(signature: str, tol: float = DEFAULT_TOL, limit: int = BRUTE_FORCE_LIMIT) -> SurveyRow:
    P = polytope_from_signature(signature)
    G = skeleton(P)
    rep = spectral_report(G, tol)
    h, cert = edge_expansion_exact(G, limit)
    return SurveyRow(signature, G.n, G.m, diameter(G), rep.lambda2, rep.delta_max,
                     rep.lower_bound, rep.upper_bound, h, cert.subset)


def _row_worker(args):
    return survey_row(*args)


def survey(d: int, tol: float = DEFAULT_TOL, workers: int | None = None,
           stretch: bool = False) -> list[SurveyRow]:
    records = classify(d, stretch=stretch)
    jobs = [(r.signature, tol) for r in records]
    workers = workers or default_workers()
    if workers <= 1 or len(jobs) < 2:
        return [survey_row(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_row_worker, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def histogram(values, bin_width: float = DEFAULT_BIN_WIDTH) -> list[tuple[float, float, int]]:
    """Equal-width bins covering [min, max]; bin k is [k w, (k+1) w)."""
    if bin_width <= 0:
        raise ValueError("bin width must be positive")
    if not values:
        return []
    w = Fraction(str(bin_width))
    idx = [math.floor(Fraction(round(v, 9)) / w) for v in values]
    lo, hi = min(idx), max(idx)
    counts = [0] * (hi - lo + 1)
    for k in idx:
        counts[k - lo] += 1
    return [(float(k * w), float((k + 1) * w), c) for k, c in zip(range(lo, hi + 1), counts)]


def histogram_csv(rows: list[SurveyRow], bin_width: float = DEFAULT_BIN_WIDTH) -> str:
    lines = [f"# eigenvalue lower bounds (1-lambda2)*delta_max, bin_width={bin_width}",
             "bin_lo,bin_hi,count"]
    for lo, hi, c in histogram([r.lower_bound for r in rows], bin_width):
        lines.append(f"{lo!r},{hi!r},{c}")
    return "\n".join(lines) + "\n"


def summary(rows: list[SurveyRow]) -> dict:
    lows = [r.lower_bound for r in rows]
    exp = [r.expansion for r in rows]
    return {
        "classes": len(rows),
        "lower_bound_min": min(lows, default=None),
        "lower_bound_max": max(lows, default=None),
        "lower_bound_mean": (sum(lows) / len(lows)) if lows else None,
        "expansion_min": str(min(exp)) if exp else None,
        "expansion_max": str(max(exp)) if exp else None,
        "all_expansion_at_least_one": all(h >= 1 for h in exp),
    }


def write_survey(rows: list[SurveyRow], out: str | Path, bin_width: float = DEFAULT_BIN_WIDTH) -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(len(rows))))
    for i, r in enumerate(rows):
        (out / f"class_{i:0{width}d}.json").write_text(json.dumps(r.to_dict(), sort_keys=True) + "\n")
    (out / "summary.json").write_text(json.dumps(summary(rows), sort_keys=True, indent=1) + "\n")
    (out / "histogram.csv").write_text(histogram_csv(rows, bin_width))
    return out
