"""Interference weights between links and the greedy acceptance threshold.

``w(l, l')`` is nonzero only when ``l`` is strictly shorter than ``l'`` in
the tie-broken length order; it then measures how strongly the shorter link
``l`` constrains the longer ``l'``:

    w(l, l') = min(1, (d(l) / d(s_l, r_l'))^a) + min(1, (d(l) / d(s_l', r_l))^a)
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .model import Instance, InstanceParams

DENSE_LIMIT = 4096


def tau(params: InstanceParams) -> float:
    return 1.0 / (2.0 * 3.0**params.alpha * (4.0 * params.beta + 2.0))


def _capped(ratio: np.ndarray, alpha: float) -> np.ndarray:
    # ratio is inf where a denominator distance is 0
    with np.errstate(over="ignore"):
        return np.minimum(1.0, ratio) ** alpha


class WeightGraph:
    """Weights of one instance, dense when small enough, row-on-demand otherwise."""

    def __init__(self, instance: Instance, dense: bool | None = None):
        self.instance = instance
        self.order = instance.order
        self.rank = instance.rank
        n = len(instance)
        if dense is None:
            dense = n <= DENSE_LIMIT
        self.table = self._rows(np.arange(n), np.arange(n)) if dense else None

    def __len__(self) -> int:
        return len(self.instance)

    def _rows(self, shorter: np.ndarray, longer: np.ndarray) -> np.ndarray:
        """Weight block ``out[a, b] = w(shorter[a], longer[b])``."""
        inst = self.instance
        shorter = np.asarray(shorter, dtype=int)
        longer = np.asarray(longer, dtype=int)
        if shorter.size == 0 or longer.size == 0:
            return np.zeros((shorter.size, longer.size))
        a = inst.params.alpha
        d = inst.lengths[shorter][:, None]
        to_far_receiver = inst.sender_to_receiver(shorter, longer)           # d(s_l, r_l')
        from_far_sender = inst.sender_to_receiver(longer, shorter).T         # d(s_l', r_l)
        with np.errstate(divide="ignore"):
            w = _capped(d / to_far_receiver, a) + _capped(d / from_far_sender, a)
        w[~(self.rank[shorter][:, None] < self.rank[longer][None, :])] = 0.0
        return w

    def block(self, rows, cols) -> np.ndarray:
        rows = np.asarray(list(rows), dtype=int)
        cols = np.asarray(list(cols), dtype=int)
        if self.table is not None:
            return self.table[np.ix_(rows, cols)]
        return self._rows(rows, cols)

    def weight(self, l: int, other: int) -> float:
        if self.table is not None:
            return float(self.table[l, other])
        return float(self._rows(np.array([l]), np.array([other]))[0, 0])

    def column(self, target: int, rows=None) -> np.ndarray:
        """Weights ``w(l, target)`` for every ``l`` in ``rows`` (default: all links)."""
        rows = np.arange(len(self)) if rows is None else np.asarray(list(rows), dtype=int)
        if self.table is not None:
            return self.table[rows, target]
        return self._rows(rows, np.array([target]))[:, 0]

    def out_weight(self, l: int, links: Iterable[int]) -> float:
        cols = list(links)
        if not cols:
            return 0.0
        return float(self.block([l], cols).sum())

    def out_weights(self, links: Iterable[int], probes=None) -> np.ndarray:
        """``W_l(links)`` for every probe ``l`` (default: every request)."""
        cols = list(links)
        probes = np.arange(len(self)) if probes is None else np.asarray(list(probes), dtype=int)
        if not cols or probes.size == 0:
            return np.zeros(probes.size)
        return self.block(probes, cols).sum(axis=1)

    def max_weight(self, links: Iterable[int], probes=None) -> float:
        w = self.out_weights(links, probes)
        return float(w.max()) if w.size else 0.0

    def load(self, slot: Iterable[int], candidate: int) -> float:
        slot = list(slot)
        if not slot:
            return 0.0
        return float(self.column(candidate, slot).sum())

    def condition_holds(self, slot: Iterable[int], candidate: int, threshold: float) -> bool:
        return self.load(slot, candidate) <= threshold


def link_weight(instance: Instance, l: int, other: int) -> float:
    return WeightGraph(instance, dense=False).weight(l, other)


def out_weight(instance: Instance, l: int, links: Iterable[int]) -> float:
    return WeightGraph(instance, dense=False).out_weight(l, links)


def max_weight(instance: Instance, links: Iterable[int]) -> float:
    """``W(L)``: the largest out-weight into ``links`` over all requests as probes."""
    return WeightGraph(instance).max_weight(links)


def condition_holds(instance: Instance, slot: Iterable[int], candidate: int, threshold: float) -> bool:
    return WeightGraph(instance, dense=False).condition_holds(slot, candidate, threshold)
