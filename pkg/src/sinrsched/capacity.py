"""Greedy k-channel capacity maximization with recursive power assignment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .model import FeasibilityReport, Instance, PowerAssignment, check_feasible
from .weights import WeightGraph, tau as default_tau


class FeasibilityViolation(RuntimeError):
    """A channel built by the greedy algorithm failed re-verification.

    This means a bug in this package, never bad input.
    """

    def __init__(self, channel: int, report: FeasibilityReport):
        self.channel = channel
        self.report = report
        bad = {l: report.margins[l] for l in report.violations}
        super().__init__(f"channel {channel} violates the SINR constraint at links {bad}")


@dataclass
class ChannelAssignment:
    channels: list[list[int]]
    discarded: list[int]
    powers: list[PowerAssignment] = field(default_factory=list)
    reports: list[FeasibilityReport] = field(default_factory=list)

    @property
    def accepted(self) -> list[int]:
        return [l for ch in self.channels for l in ch]

    def __len__(self) -> int:
        return sum(len(ch) for ch in self.channels)


def first_fit(graph: WeightGraph, threshold: float, links: Sequence[int] | None = None,
              max_channels: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Place links, shortest first, into the lowest-indexed slot whose load stays within ``threshold``.

    With ``max_channels=None`` new slots are opened on demand, so nothing is discarded.
    Each slot lists its links in insertion (increasing length) order.
    """
    inst = graph.instance
    pool = np.arange(len(inst)) if links is None else np.asarray(list(links), dtype=int)
    pool = pool[np.argsort(inst.rank[pool], kind="stable")]
    slots: list[list[int]] = []
    # loads[t][j] = sum over l in slot t of w(l, pool[j])
    loads: list[np.ndarray] = []
    discarded = []
    for j, cand in enumerate(pool):
        cand = int(cand)
        target = next((t for t, load in enumerate(loads) if load[j] <= threshold), None)
        if target is None:
            if max_channels is not None and len(slots) >= max_channels:
                discarded.append(cand)
                continue
            slots.append([])
            loads.append(np.zeros(len(pool)))
            target = len(slots) - 1
        slots[target].append(cand)
        if j + 1 < len(pool):
            rest = pool[j + 1:]
            loads[target][j + 1:] += graph.block([cand], rest)[0]
    if max_channels is not None:
        slots.extend([] for _ in range(max_channels - len(slots)))
    return slots, discarded


def greedy_select(instance: Instance, k: int, threshold: float | None = None,
                  graph: WeightGraph | None = None) -> ChannelAssignment:
    if k < 1:
        raise ValueError("k must be >= 1")
    if threshold is None:
        threshold = default_tau(instance.params)
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    graph = graph or WeightGraph(instance)
    channels, discarded = first_fit(graph, threshold, max_channels=k)
    return ChannelAssignment(channels, sorted(discarded))


def assign_powers(instance: Instance, channel: Iterable[int]) -> PowerAssignment:
    """Powers for one channel, assigned from the longest link down.

    The longest link gets power 1. Every shorter link gets ``4 beta`` times the
    power it would need to just overcome the longer links' interference. Then
    all powers are scaled by one common factor so that each signal is at least
    ``2 * max(beta, 1) * noise``. Interference then takes at most half of each
    signal and noise at most the other half.
    """
    links = instance.check_links(channel)
    if not links:
        return {}
    a, beta, noise = instance.params.alpha, instance.params.beta, instance.params.noise
    links.sort(key=lambda l: instance.rank[l], reverse=True)
    lengths = instance.lengths[links]
    # cross[j, i] = d(s_j, r_i) for links in decreasing length order
    cross = instance.sender_to_receiver(links, links)
    p = np.zeros(len(links))
    p[0] = 1.0
    for i in range(1, len(links)):
        with np.errstate(divide="ignore"):
            needed = np.sum(p[:i] * (lengths[i] / cross[:i, i]) ** a)
        p[i] = 4.0 * beta * needed if needed > 0 else 1.0
    if noise > 0:
        floor = 2.0 * max(beta, 1.0) * noise * lengths**a
        scale = np.max(floor / p)
        if scale > 1.0:
            p *= scale
    return {l: float(v) for l, v in zip(links, p)}


def maximize_capacity(instance: Instance, k: int, threshold: float | None = None) -> ChannelAssignment:
    """Select up to ``k`` channels greedily, assign powers, and verify every channel."""
    result = greedy_select(instance, k, threshold)
    for t, ch in enumerate(result.channels):
        powers = assign_powers(instance, ch)
        report = check_feasible(instance, ch, powers)
        if not report.feasible:
            raise FeasibilityViolation(t, report)
        result.powers.append(powers)
        result.reports.append(report)
    return result


@dataclass
class AuditFinding:
    link: int
    channel: int | None
    load: float
    kind: str  # accepted-over-threshold | skipped-fitting-channel | discarded-but-fits | order


def audit_greedy(instance: Instance, channels: Sequence[Sequence[int]], discarded: Sequence[int],
                 threshold: float | None = None, graph: WeightGraph | None = None) -> list[AuditFinding]:
    """Replay a channel assignment and list every step the greedy rule would not have taken.

    Accepted links are checked against the links of their channel that were
    already present when they arrived; discarded links must have failed every
    channel at their own arrival time.
    """
    if threshold is None:
        threshold = default_tau(instance.params)
    graph = graph or WeightGraph(instance)
    rank = instance.rank
    findings = []
    for t, ch in enumerate(channels):
        for pos, l in enumerate(ch):
            before = list(ch[:pos])
            if any(rank[b] > rank[l] for b in before):
                findings.append(AuditFinding(int(l), t, float("nan"), "order"))
            load = graph.load(before, l)
            if not load <= threshold:
                findings.append(AuditFinding(int(l), t, load, "accepted-over-threshold"))
            # first fit: every lower channel must have rejected l at its arrival
            for lower in range(t):
                earlier = [b for b in channels[lower] if rank[b] < rank[l]]
                load = graph.load(earlier, l)
                if load <= threshold:
                    findings.append(AuditFinding(int(l), lower, load, "skipped-fitting-channel"))
    for l in discarded:
        for t, ch in enumerate(channels):
            earlier = [b for b in ch if rank[b] < rank[l]]
            load = graph.load(earlier, l)
            if load <= threshold:
                findings.append(AuditFinding(int(l), t, load, "discarded-but-fits"))
    return findings
