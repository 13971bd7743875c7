"""Instances of the physical interference (SINR) model.

Links are referred to by their index into ``Instance.requests`` everywhere in
the package; a "link set" is any iterable of such indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.spatial.distance import cdist

FEASIBILITY_RTOL = 1e-9
SPECTRAL_EPS = 1e-9
TRIANGLE_RTOL = 1e-12


class InputError(ValueError):
    """Malformed or inconsistent input (bad node id, missing power, ...)."""


PowerAssignment = dict  # link index -> strictly positive power


@dataclass(frozen=True)
class MetricSpace:
    kind: str
    points: np.ndarray | None = None
    distances: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "euclidean":
            pts = np.asarray(self.points, dtype=float)
            if pts.ndim == 1:
                pts = pts[:, None]
            if pts.ndim != 2:
                raise InputError("points must be a sequence of coordinate tuples")
            object.__setattr__(self, "points", pts)
        elif self.kind == "matrix":
            d = np.asarray(self.distances, dtype=float)
            _validate_matrix(d)
            object.__setattr__(self, "distances", d)
        else:
            raise InputError(f"unknown metric kind {self.kind!r}")

    @classmethod
    def euclidean(cls, points) -> "MetricSpace":
        return cls("euclidean", points=points)

    @classmethod
    def matrix(cls, distances) -> "MetricSpace":
        return cls("matrix", distances=distances)

    @property
    def size(self) -> int:
        if self.kind == "euclidean":
            return self.points.shape[0]
        return self.distances.shape[0]

    def check_node(self, u) -> int:
        if isinstance(u, (bool, np.bool_)) or not isinstance(u, (int, np.integer)):
            raise InputError(f"node id must be an integer, got {u!r}")
        if not 0 <= u < self.size:
            raise InputError(f"node id {u} out of range [0, {self.size})")
        return int(u)

    def distance(self, u: int, v: int) -> float:
        u, v = self.check_node(u), self.check_node(v)
        if self.kind == "matrix":
            return float(self.distances[u, v])
        if u == v:
            return 0.0
        return float(np.linalg.norm(self.points[u] - self.points[v]))

    def cross(self, us: Sequence[int], vs: Sequence[int]) -> np.ndarray:
        """Distance table ``out[a, b] = d(us[a], vs[b])``."""
        us = np.asarray(us, dtype=int)
        vs = np.asarray(vs, dtype=int)
        if self.kind == "matrix":
            return self.distances[np.ix_(us, vs)]
        out = cdist(self.points[us], self.points[vs])
        out[us[:, None] == vs[None, :]] = 0.0
        return out


def _validate_matrix(d: np.ndarray) -> None:
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InputError("distance matrix must be square")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise InputError("distances must be finite and nonnegative")
    if np.any(np.diag(d) != 0):
        raise InputError("d(u,u) must be 0")
    if not np.array_equal(d, d.T):
        raise InputError("distance matrix must be symmetric")
    off = ~np.eye(d.shape[0], dtype=bool)
    if np.any(d[off] <= 0):
        raise InputError("d(u,v) must be positive for u != v")
    # d[u, w] <= d[u, v] + d[v, w] for all triples, one intermediate v at a time
    scale = d.max() if d.size else 0.0
    for v in range(d.shape[0]):
        via = d[:, v][:, None] + d[v, :][None, :]
        bad = d > via + TRIANGLE_RTOL * scale
        if bad.any():
            u, w = np.argwhere(bad)[0]
            raise InputError(f"triangle inequality violated: d({u},{w}) > d({u},{v}) + d({v},{w})")


@dataclass(frozen=True)
class InstanceParams:
    alpha: float = 3.0
    beta: float = 1.0
    noise: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise InputError("alpha must be > 0")
        if not self.beta > 0:
            raise InputError("beta must be > 0")
        if not self.noise >= 0:
            raise InputError("noise must be >= 0")


@dataclass(frozen=True)
class Link:
    sender: int
    receiver: int
    length: float


@dataclass(frozen=True)
class Instance:
    metric: MetricSpace
    params: InstanceParams
    requests: tuple[Link, ...] = field(default_factory=tuple)

    @classmethod
    def build(cls, metric: MetricSpace, params: InstanceParams, pairs: Iterable[Sequence[int]]) -> "Instance":
        links = []
        for pair in pairs:
            if len(pair) != 2:
                raise InputError(f"link must be a (sender, receiver) pair, got {pair!r}")
            s, r = metric.check_node(pair[0]), metric.check_node(pair[1])
            if s == r:
                raise InputError(f"link ({s},{r}) has identical endpoints")
            length = metric.distance(s, r)
            if not length > 0:
                raise InputError(f"link ({s},{r}) has zero length")
            links.append(Link(s, r, length))
        return cls(metric, params, tuple(links))

    @classmethod
    def on_line(cls, pairs: Iterable[Sequence[float]], alpha=3.0, beta=1.0, noise=0.0) -> "Instance":
        """Links given as coordinate pairs on the real line; each endpoint gets its own node."""
        coords = []
        for a, b in pairs:
            coords.extend([a, b])
        metric = MetricSpace.euclidean(np.array(coords, dtype=float)[:, None])
        idx = [(2 * i, 2 * i + 1) for i in range(len(coords) // 2)]
        return cls.build(metric, InstanceParams(alpha, beta, noise), idx)

    def __len__(self) -> int:
        return len(self.requests)

    @cached_property
    def senders(self) -> np.ndarray:
        return np.array([l.sender for l in self.requests], dtype=int)

    @cached_property
    def receivers(self) -> np.ndarray:
        return np.array([l.receiver for l in self.requests], dtype=int)

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([l.length for l in self.requests], dtype=float)

    @cached_property
    def order(self) -> np.ndarray:
        """Link indices by increasing length, ties broken by index."""
        return np.lexsort((np.arange(len(self)), self.lengths)).astype(int)

    @cached_property
    def rank(self) -> np.ndarray:
        rank = np.empty(len(self), dtype=int)
        rank[self.order] = np.arange(len(self))
        return rank

    def check_links(self, links: Iterable[int]) -> list[int]:
        out = []
        for i in links:
            if isinstance(i, (bool, np.bool_)) or not isinstance(i, (int, np.integer)):
                raise InputError(f"link index must be an integer, got {i!r}")
            if not 0 <= i < len(self):
                raise InputError(f"link index {i} out of range")
            out.append(int(i))
        if len(set(out)) != len(out):
            raise InputError("duplicate link index in link set")
        return out

    def sender_to_receiver(self, senders_of: Sequence[int], receivers_of: Sequence[int]) -> np.ndarray:
        """``out[a, b] = d(s_{senders_of[a]}, r_{receivers_of[b]})``."""
        return self.metric.cross(self.senders[list(senders_of)], self.receivers[list(receivers_of)])

    def subinstance(self, links: Sequence[int]) -> "Instance":
        return Instance(self.metric, self.params, tuple(self.requests[i] for i in links))


def distance(metric: MetricSpace, u: int, v: int) -> float:
    return metric.distance(u, v)


def _powers_vector(links: list[int], powers: Mapping[int, float]) -> np.ndarray:
    try:
        p = np.array([float(powers[i]) for i in links], dtype=float)
    except KeyError as exc:
        raise InputError(f"no power given for link {exc.args[0]}") from None
    if np.any(~(p > 0)) or np.any(~np.isfinite(p)):
        raise InputError("powers must be finite and strictly positive")
    return p


def _signal_and_rhs(instance: Instance, links: list[int], p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = instance.params.alpha
    d = instance.lengths[links]
    # cross[j, i] = d(s_j, r_i)
    cross = instance.sender_to_receiver(links, links)
    with np.errstate(divide="ignore"):
        gain = cross ** (-a)
    np.fill_diagonal(gain, 0.0)
    with np.errstate(invalid="ignore"):
        interference = (p[:, None] * gain).sum(axis=0)
    signal = p / d**a
    rhs = instance.params.beta * interference + instance.params.noise
    return signal, rhs


def sinr_of(instance: Instance, active: Iterable[int], powers: Mapping[int, float], target: int) -> tuple[float, float]:
    """Return ``(signal, beta * interference + noise)`` at the receiver of ``target``.

    Interference sums over the other links of ``active``; the target's own
    signal is never counted against it.
    """
    links = instance.check_links(active)
    if target not in links:
        raise InputError(f"target link {target} is not in the active set")
    p = _powers_vector(links, powers)
    signal, rhs = _signal_and_rhs(instance, links, p)
    k = links.index(target)
    return float(signal[k]), float(rhs[k])


@dataclass
class FeasibilityReport:
    feasible: bool
    margins: dict[int, float]
    signals: dict[int, float]
    violations: list[int]

    def relative_margin(self, link: int) -> float:
        return self.margins[link] / self.signals[link]


def check_feasible(instance: Instance, active: Iterable[int], powers: Mapping[int, float],
                   rtol: float = FEASIBILITY_RTOL) -> FeasibilityReport:
    links = instance.check_links(active)
    if not links:
        return FeasibilityReport(True, {}, {}, [])
    p = _powers_vector(links, powers)
    signal, rhs = _signal_and_rhs(instance, links, p)
    margin = signal - rhs
    ok = margin >= -rtol * signal
    violations = [l for l, good in zip(links, ok) if not good]
    return FeasibilityReport(
        feasible=not violations,
        margins={l: float(m) for l, m in zip(links, margin)},
        signals={l: float(s) for l, s in zip(links, signal)},
        violations=violations,
    )


def normalized_gain_matrix(instance: Instance, links: Sequence[int]) -> np.ndarray:
    """``M[i, j] = d(l_i)^a / d(s_j, r_i)^a`` for i != j, zero diagonal.

    Entries are +inf where a foreign sender sits on a receiver.
    """
    links = list(links)
    a = instance.params.alpha
    cross = instance.sender_to_receiver(links, links)  # [j, i]
    with np.errstate(divide="ignore"):
        m = (instance.lengths[links][:, None] / cross.T) ** a
    np.fill_diagonal(m, 0.0)
    return m


@dataclass
class Admissibility:
    admissible: bool
    powers: PowerAssignment | None
    spectral_radius: float


def spectral_radius(matrix: np.ndarray) -> float:
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return 0.0
    if not np.all(np.isfinite(m)):
        return float("inf")
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def admissible(instance: Instance, links: Iterable[int]) -> Admissibility:
    """Decide whether some positive power assignment makes ``links`` feasible.

    The set is admissible iff the Perron root of ``beta * M`` is below one.
    Witness powers solve ``p = beta M p + b`` with ``b = N d^a`` (or ``d^a``
    when there is no noise).
    """
    links = instance.check_links(links)
    if not links:
        raise InputError("admissibility of the empty set is not defined")
    beta_m = instance.params.beta * normalized_gain_matrix(instance, links)
    rho = spectral_radius(beta_m)
    if not rho < 1 - SPECTRAL_EPS:
        return Admissibility(False, None, rho)
    d_a = instance.lengths[links] ** instance.params.alpha
    rhs = instance.params.noise * d_a if instance.params.noise > 0 else d_a
    try:
        p = np.linalg.solve(np.eye(len(links)) - beta_m, rhs)
    except np.linalg.LinAlgError:
        return Admissibility(False, None, rho)
    if not np.all(p > 0) or not np.all(np.isfinite(p)):
        return Admissibility(False, None, rho)
    powers = {l: float(v) for l, v in zip(links, p)}
    return Admissibility(True, powers, rho)
