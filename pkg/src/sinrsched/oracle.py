"""Exhaustive and iterative ground truth for small instances.

Nothing here is fast; everything here is simple enough to trust.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .model import Instance, InputError, admissible

CAPACITY_LIMIT = 12
SCHEDULE_LIMIT = 10
DIVERGENCE_GUARD = 1e150


@dataclass
class OracleResult:
    optimum: int
    witness: list[list[int]]
    admissible_sets_enumerated: int


def admissible_masks(instance: Instance, links: Sequence[int]) -> np.ndarray:
    """``ok[mask]`` for every subset of ``links`` (bit b = ``links[b]``); the empty set counts as admissible.

    A set is only tested when all its one-smaller subsets passed.
    """
    n = len(links)
    ok = np.zeros(1 << n, dtype=bool)
    ok[0] = True
    for mask in range(1, 1 << n):
        bits = [b for b in range(n) if mask >> b & 1]
        if all(ok[mask ^ (1 << b)] for b in bits):
            ok[mask] = admissible(instance, [links[b] for b in bits]).admissible
    return ok


def _members(mask: int, links: Sequence[int]) -> list[int]:
    return [links[b] for b in range(len(links)) if mask >> b & 1]


def brute_force_capacity(instance: Instance, k: int, links: Sequence[int] | None = None) -> OracleResult:
    """Largest joint size of ``k`` disjoint admissible sets."""
    links = list(range(len(instance))) if links is None else list(links)
    if len(links) > CAPACITY_LIMIT:
        raise InputError(f"brute force capacity is limited to {CAPACITY_LIMIT} links")
    if k < 1:
        raise InputError("k must be >= 1")
    ok = admissible_masks(instance, links)
    full = (1 << len(links)) - 1

    @lru_cache(maxsize=None)
    def best(channels: int, avail: int) -> tuple[int, tuple[int, ...]]:
        if channels == 0 or avail == 0:
            return 0, ()
        top, pick = best(channels - 1, avail)
        top_sets = pick
        sub = avail
        while sub:
            if ok[sub]:
                size, rest = best(channels - 1, avail & ~sub)
                size += bin(sub).count("1")
                if size > top:
                    top, top_sets = size, (sub,) + rest
            sub = (sub - 1) & avail
        return top, top_sets

    optimum, masks = best(k, full)
    witness = [_members(m, links) for m in masks]
    return OracleResult(optimum, witness, int(ok.sum()) - 1)


def brute_force_schedule(instance: Instance, links: Sequence[int] | None = None) -> OracleResult:
    """Fewest admissible groups partitioning the links."""
    links = list(range(len(instance))) if links is None else list(links)
    if len(links) > SCHEDULE_LIMIT:
        raise InputError(f"brute force scheduling is limited to {SCHEDULE_LIMIT} links")
    ok = admissible_masks(instance, links)

    @lru_cache(maxsize=None)
    def fewest(avail: int) -> tuple[int, tuple[int, ...]]:
        if avail == 0:
            return 0, ()
        low = avail & -avail
        rest_bits = avail ^ low
        result = None
        sub = rest_bits
        while True:
            group = sub | low
            if ok[group]:
                count, groups = fewest(avail & ~group)
                if result is None or count + 1 < result[0]:
                    result = (count + 1, (group,) + groups)
            if sub == 0:
                break
            sub = (sub - 1) & rest_bits
        return result

    count, masks = fewest((1 << len(links)) - 1)
    return OracleResult(count, [_members(m, links) for m in masks], int(ok.sum()) - 1)


@dataclass
class FixedPointResult:
    converged: bool
    powers: dict[int, float] | None
    iterations: int


def _gain_matrix(instance: Instance, links: Sequence[int]) -> np.ndarray:
    # built pairwise from the metric, independent of the model module's vectorized version
    metric, a = instance.metric, instance.params.alpha
    reqs = [instance.requests[l] for l in links]
    m = np.zeros((len(reqs), len(reqs)))
    for i, li in enumerate(reqs):
        for j, lj in enumerate(reqs):
            if i != j:
                d = metric.distance(lj.sender, li.receiver)
                m[i, j] = np.inf if d == 0 else (li.length / d) ** a
    return m


def fixed_point_powers(instance: Instance, links: Sequence[int], max_iter: int = 100_000,
                       rtol: float = 1e-12) -> FixedPointResult:
    """Iterate ``p <- beta M p + b`` from ``p = b``.

    ``b`` is ``N d^a``, or ``d^a`` without noise. Converges exactly when the
    Perron root of ``beta M`` is below one; divergence is detected by the
    magnitude guard or the iteration cap.
    """
    links = instance.check_links(links)
    if not links:
        raise InputError("fixed point iteration needs a nonempty set")
    beta, noise, a = instance.params.beta, instance.params.noise, instance.params.alpha
    bm = beta * _gain_matrix(instance, links)
    if not np.all(np.isfinite(bm)):
        return FixedPointResult(False, None, 0)
    d_a = np.array([instance.requests[l].length ** a for l in links])
    b = noise * d_a if noise > 0 else d_a
    p = b.copy()
    for it in range(1, max_iter + 1):
        nxt = bm @ p + b
        if nxt.max() > DIVERGENCE_GUARD:
            return FixedPointResult(False, None, it)
        change = np.max(np.abs(nxt - p)) / np.max(np.abs(nxt))
        p = nxt
        if change < rtol:
            return FixedPointResult(True, {l: float(v) for l, v in zip(links, p)}, it)
    return FixedPointResult(False, None, max_iter)


def spectral_radius(matrix, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Perron root of a nonnegative square matrix by shifted power iteration.

    The Perron root of a reducible matrix is the largest one among its strongly
    connected diagonal blocks, so each block is handled separately. On an
    irreducible block, ``A + I`` is primitive and the Collatz-Wielandt bounds
    ``min(Ax/x) <= rho <= max(Ax/x)`` close in on ``rho``.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if np.any(a < 0):
        raise ValueError("matrix must be nonnegative")
    if a.shape[0] == 0 or not a.any():
        return 0.0
    if not np.all(np.isfinite(a)):
        return float("inf")
    count, labels = connected_components(a > 0, directed=True, connection="strong")
    best = 0.0
    for c in range(count):
        idx = np.flatnonzero(labels == c)
        block = a[np.ix_(idx, idx)]
        if len(idx) == 1:
            best = max(best, float(block[0, 0]))
        else:
            best = max(best, _irreducible_radius(block, tol, max_iter))
    return best


def _irreducible_radius(a: np.ndarray, tol: float, max_iter: int) -> float:
    n = a.shape[0]
    shifted = a + np.eye(n)
    x = np.ones(n)
    lo, hi = 0.0, float("inf")
    for _ in range(max_iter):
        y = shifted @ x
        ratio = y / x - 1.0
        lo, hi = max(lo, ratio.min()), min(hi, ratio.max())
        if hi - lo <= tol * max(1.0, hi):
            break
        x = y / y.max()
    return float(0.5 * (lo + hi))
