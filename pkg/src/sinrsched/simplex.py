"""Two-phase revised primal simplex; Dantzig pricing with a Bland fallback against cycling.

Problems are stated as

    minimize    c @ x
    subject to  A_ub @ x <= b_ub,  A_eq @ x == b_eq,  lower <= x <= upper

with finite lower bounds and possibly infinite upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

PIVOT_TOL = 1e-9
COST_TOL = 1e-11
STALL_LIMIT = 50


class LPError(RuntimeError):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LinearProgram:
    c: np.ndarray
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        self.A_ub, self.b_ub = _rows(self.A_ub, self.b_ub, n, "ub")
        self.A_eq, self.b_eq = _rows(self.A_eq, self.b_eq, n, "eq")
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).ravel()
        if self.lower.size != n or self.upper.size != n:
            raise ValueError("bounds must have one entry per variable")
        if not np.all(np.isfinite(self.lower)):
            raise ValueError("lower bounds must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("inconsistent bounds")

    @property
    def num_vars(self) -> int:
        return self.c.size

    def residuals(self, x: np.ndarray) -> dict[str, float]:
        """Largest violation of each constraint family (0 when satisfied)."""
        x = np.asarray(x, dtype=float)
        out = {"ub": 0.0, "eq": 0.0, "bounds": 0.0}
        if self.A_ub.shape[0]:
            out["ub"] = float(max(0.0, np.max(self.A_ub @ x - self.b_ub)))
        if self.A_eq.shape[0]:
            out["eq"] = float(np.max(np.abs(self.A_eq @ x - self.b_eq)))
        out["bounds"] = float(max(0.0, np.max(self.lower - x, initial=0.0), np.max(x - self.upper, initial=0.0)))
        return out


def _rows(a, b, n, name):
    if a is None:
        return np.zeros((0, n)), np.zeros(0)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    if a.shape[1] != n or a.shape[0] != b.size:
        raise ValueError(f"A_{name}/b_{name} dimensions do not match {n} variables")
    return a, b


@dataclass
class LPSolution:
    x: np.ndarray
    objective: float
    iterations: int


class _Basis:
    """Revised simplex state over ``A x = b, x >= 0``; the basis matrix is refactored every step."""

    def __init__(self, a: np.ndarray, b: np.ndarray, basis: list[int]):
        self.a = a
        self.b = b
        self.basis = list(basis)
        self.iterations = 0

    def values(self, lu=None) -> np.ndarray:
        lu = lu or lu_factor(self.a[:, self.basis])
        return lu_solve(lu, self.b)

    def run(self, cost: np.ndarray, allowed: np.ndarray, max_iter: int = 200_000) -> None:
        """Dantzig pricing; after ``STALL_LIMIT`` degenerate pivots in a row, Bland's rule
        takes over until the objective strictly improves again, which rules out cycling."""
        stalled = 0
        for _ in range(max_iter):
            lu = lu_factor(self.a[:, self.basis])
            xb = np.maximum(lu_solve(lu, self.b), 0.0)
            duals = lu_solve(lu, cost[self.basis], trans=1)
            rc = cost - self.a.T @ duals
            rc[self.basis] = 0.0
            candidates = np.flatnonzero((rc < -COST_TOL) & allowed)
            if candidates.size == 0:
                return
            bland = stalled >= STALL_LIMIT
            col = int(candidates[0] if bland else candidates[np.argmin(rc[candidates])])
            direction = lu_solve(lu, self.a[:, col])
            rows = np.flatnonzero(direction > PIVOT_TOL)
            if rows.size == 0:
                raise Unbounded("objective is unbounded below")
            ratios = xb[rows] / direction[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL * max(1.0, best)]
            if bland:
                row = int(min(ties, key=lambda r: self.basis[r]))
            else:
                row = int(ties[np.argmax(direction[ties])])
            stalled = stalled + 1 if best <= PIVOT_TOL else 0
            self.basis[row] = col
            self.iterations += 1
        raise LPError("iteration limit reached")


def solve_lp(lp: LinearProgram) -> LPSolution:
    n = lp.num_vars
    shift = lp.lower
    # x = lower + x', 0 <= x' <= upper - lower
    rows_a, rows_b = [], []
    for a, b in zip(lp.A_ub, lp.b_ub - lp.A_ub @ shift):
        rows_a.append(a); rows_b.append(b)
    finite = np.flatnonzero(np.isfinite(lp.upper))
    for j in finite:
        a = np.zeros(n); a[j] = 1.0
        rows_a.append(a); rows_b.append(lp.upper[j] - shift[j])
    n_ineq = len(rows_a)
    for a, b in zip(lp.A_eq, lp.b_eq - lp.A_eq @ shift):
        rows_a.append(a); rows_b.append(b)
    m = len(rows_a)
    if m == 0:
        if np.any(lp.c < 0):
            raise Unbounded("objective is unbounded below")
        return LPSolution(shift.copy(), float(lp.c @ shift), 0)

    a = np.zeros((m, n + n_ineq))
    a[:, :n] = np.array(rows_a)
    a[np.arange(n_ineq), n + np.arange(n_ineq)] = 1.0
    b = np.array(rows_b, dtype=float)
    neg = b < 0
    a[neg] *= -1.0
    b[neg] *= -1.0

    # start from slacks where their coefficient stayed +1, artificials elsewhere
    width = a.shape[1]
    art_rows = [i for i in range(m) if i >= n_ineq or neg[i]]
    full = np.hstack([a, np.zeros((m, len(art_rows)))])
    basis = [n + i for i in range(m)] if not art_rows else [n + i if i < n_ineq else -1 for i in range(m)]
    for k, i in enumerate(art_rows):
        full[i, width + k] = 1.0
        basis[i] = width + k
    state = _Basis(full, b, basis)
    iterations = 0

    if art_rows:
        phase1 = np.zeros(full.shape[1])
        phase1[width:] = 1.0
        state.run(phase1, np.ones(full.shape[1], dtype=bool))
        infeas = float(phase1[state.basis] @ state.values())
        if infeas > 1e-9 * max(1.0, np.abs(b).max()):
            raise Infeasible(f"no feasible point (phase one residual {infeas:.3g})")
        iterations = state.iterations
        # swap zero-valued artificials for structural columns; rows where none fits are redundant
        keep = list(range(m))
        for i in range(m):
            if state.basis[i] < width:
                continue
            lu = lu_factor(state.a[:, state.basis])
            row = lu_solve(lu, np.eye(m)[i], trans=1) @ a   # row i of B^-1 A
            row[[c for c in state.basis if c < width]] = 0.0
            j = int(np.argmax(np.abs(row)))
            if abs(row[j]) > PIVOT_TOL:
                state.basis[i] = j
            else:
                keep.remove(i)
        state = _Basis(a[keep], b[keep], [state.basis[i] for i in keep])

    cost = np.zeros(width)
    cost[:n] = lp.c
    state.run(cost, np.ones(width, dtype=bool))

    z = np.zeros(width)
    z[state.basis] = np.maximum(state.values(), 0.0)
    x = shift + z[:n]
    return LPSolution(x, float(lp.c @ x), iterations + state.iterations)
