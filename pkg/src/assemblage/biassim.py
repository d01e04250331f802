"""Biased decision-tree model of formation probability.

Level ``d`` of the tree offers one choice per integer whose minimal addition
chain has length ``d``.  Each choice gets a weight (uniform, or ``10**x`` with
``x ~ U(0, h)`` when biased), weights are normalised per level, and the most
likely pathway takes the heaviest choice at every level.

The chain census is only complete up to ``floor(log2(limit))``; deeper levels
reuse the last complete count.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .chains import DEFAULT_TABLE_LIMIT, min_chain_lengths_upto
from .errors import DomainError


@dataclass(frozen=True)
class BiasTree:
    depth: int
    h: float
    seed: int | None
    branching: tuple[int, ...]
    probabilities: tuple[np.ndarray, ...]

    def log10_max(self) -> np.ndarray:
        """log10 of each level's largest probability."""
        return np.array([math.log10(float(p.max())) for p in self.probabilities])


def level_branching(depth: int, limit: int = DEFAULT_TABLE_LIMIT) -> tuple[int, ...]:
    """Choices at levels ``1..depth``: census counts, carried forward past the complete range."""
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")
    table = min_chain_lengths_upto(limit)
    counts = table.counts
    complete = table.complete_levels()
    out = []
    last = 1
    for d in range(1, depth + 1):
        if d <= complete and counts.get(d, 0) > 0:
            last = counts[d]
        out.append(last)
    return tuple(out)


def _level_weights(rng: np.random.Generator, b: int, h: float) -> np.ndarray:
    if h == 0:
        w = rng.uniform(0.0, 1.0, b)
        # uniform draws of exactly zero would break the positivity invariant
        w[w == 0.0] = np.finfo(float).tiny
    else:
        w = 10.0 ** rng.uniform(0.0, h, b)
    return w / w.sum()


def build_bias_tree(
    depth: int,
    h: float,
    seed: int | np.random.SeedSequence | None = None,
    branching=None,
    limit: int = DEFAULT_TABLE_LIMIT,
) -> BiasTree:
    """Draw per-level choice probabilities.

    ``branching`` overrides the census-derived choice counts (one entry per
    level).
    """
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")
    if h < 0 or not math.isfinite(h):
        raise DomainError(f"bias must be a finite h >= 0, got {h}")
    if branching is None:
        branching = level_branching(depth, limit)
    branching = tuple(int(b) for b in branching)
    if len(branching) != depth or any(b < 1 for b in branching):
        raise DomainError("branching needs one positive count per level")
    rng = np.random.default_rng(seed)
    probs = tuple(_level_weights(rng, b, h) for b in branching)
    plain_seed = seed if isinstance(seed, int) or seed is None else None
    return BiasTree(depth, float(h), plain_seed, branching, probs)


def most_likely_path_probability(tree: BiasTree) -> float:
    """Product of the per-level maxima, accumulated in log space."""
    return float(10.0 ** tree.log10_max().sum())


def trial_probabilities(h: float, depth: int, trials: int, seed: int, branching=None, limit: int = DEFAULT_TABLE_LIMIT) -> np.ndarray:
    """One most-likely-path probability per trial; trial ``i`` uses child seed ``i`` of ``seed``."""
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")
    if branching is None:
        branching = level_branching(depth, limit)
    children = np.random.SeedSequence(seed).spawn(trials)
    return np.array(
        [most_likely_path_probability(build_bias_tree(depth, h, child, branching)) for child in children]
    )


@dataclass(frozen=True)
class SweepRow:
    h: float
    depth: int
    p_median: float
    p_q25: float
    p_q75: float


def sweep(h_values, depth: int, trials: int, seed: int = 0, branching=None, limit: int = DEFAULT_TABLE_LIMIT) -> list[SweepRow]:
    """Median and quartiles of the most-likely-path probability for each ``h``.

    Every ``h`` reuses the same seed, so rows differ only through the bias.
    """
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")
    h_values = [float(h) for h in h_values]
    if any(h < 0 or not math.isfinite(h) for h in h_values):
        raise DomainError(f"bias must be a finite h >= 0, got {h_values}")
    if branching is None:
        branching = level_branching(depth, limit)
    rows = []
    for h in h_values:
        p = trial_probabilities(float(h), depth, trials, seed, branching)
        q25, med, q75 = np.quantile(p, [0.25, 0.5, 0.75])
        rows.append(SweepRow(float(h), depth, float(med), float(q25), float(q75)))
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["h", "depth", "p_median", "p_q25", "p_q75"])
    for r in rows:
        w.writerow([f"{r.h:g}", r.depth, f"{r.p_median:.6e}", f"{r.p_q25:.6e}", f"{r.p_q75:.6e}"])
    return buf.getvalue()
