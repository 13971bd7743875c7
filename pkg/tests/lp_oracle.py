"""Brute-force LP optimum by enumerating basic solutions (tiny problems only)."""

from itertools import combinations

import numpy as np


def vertex_optimum(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, upper=None, tol=1e-9):
    """Minimum of ``c @ x`` over ``x >= 0`` and the constraints, or ``None`` when infeasible.

    Assumes the optimum is attained (bounded problem).
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    rows, rhs = [], []
    if A_ub is not None:
        rows += list(np.atleast_2d(A_ub)); rhs += list(b_ub)
    if upper is not None:
        for j, u in enumerate(upper):
            if np.isfinite(u):
                e = np.zeros(n); e[j] = 1.0
                rows.append(e); rhs.append(u)
    for j in range(n):
        e = np.zeros(n); e[j] = -1.0
        rows.append(e); rhs.append(0.0)
    eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=float))
    beq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)
    ineq, bineq = np.array(rows, dtype=float), np.array(rhs, dtype=float)
    best = None
    for active in combinations(range(len(ineq)), n - eq.shape[0]):
        a = np.vstack([eq, ineq[list(active)]])
        b = np.concatenate([beq, bineq[list(active)]])
        if a.shape[0] != n or abs(np.linalg.det(a)) < 1e-12:
            continue
        x = np.linalg.solve(a, b)
        if np.all(ineq @ x <= bineq + tol) and np.allclose(eq @ x, beq, atol=tol):
            val = float(c @ x)
            if best is None or val < best[0]:
                best = (val, x)
    return best
