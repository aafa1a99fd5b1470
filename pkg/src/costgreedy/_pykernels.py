"""Pure-Python versions of the enumeration kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature, the same enumeration order and therefore the same witnesses.
Set functions are dense arrays indexed by item bitmask.
"""

import numpy as np


def _slack(lhs, rhs, tol):
    return tol * max(1.0, abs(lhs), abs(rhs))


def cs_submodular_witness(g, c, n, tol):
    """Lexicographically first (A, B, x) violating the cost-sensitive ratio.

    Order: A ascending, B ascending over supersets of A, x ascending
    outside B. Returns ``(x, B, A, checked)`` with x == -1 on pass.
    """
    g = np.asarray(g, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    full = 1 << n
    checked = 0
    for A in range(full):
        comp = (full - 1) & ~A
        t = 0
        while True:
            B = A | t
            for x in range(n):
                bit = 1 << x
                if B & bit:
                    continue
                lhs = (g[A | bit] - g[A]) * (c[B | bit] - c[B])
                rhs = (g[B | bit] - g[B]) * (c[A | bit] - c[A])
                checked += 1
                if lhs < rhs - _slack(lhs, rhs, tol):
                    return x, B, A, checked
            if t == comp:
                break
            t = ((t | ~comp) + 1) & comp  # next submask of comp, ascending
    return -1, 0, 0, checked


def submodular_witness(g, n, tol):
    """First second-order violation g(A+x) - g(A) < g(A+x+y) - g(A+y).

    Order: A ascending, then x < y outside A. The local form is
    equivalent to diminishing returns over all A subset B. Returns
    ``(x, A + y, A, checked)`` with x == -1 on pass.
    """
    g = np.asarray(g, dtype=np.float64)
    checked = 0
    for A in range(1 << n):
        for x in range(n):
            bx = 1 << x
            if A & bx:
                continue
            for y in range(x + 1, n):
                by = 1 << y
                if A & by:
                    continue
                lhs = g[A | bx] - g[A]
                rhs = g[A | bx | by] - g[A | by]
                checked += 1
                if lhs < rhs - _slack(lhs, rhs, tol):
                    return x, A | by, A, checked
    return -1, 0, 0, checked


def monotone_witness(g, n, tol):
    """First (A, x) with g(A + x) < g(A). Returns ``(A, x, checked)``, x == -1 on pass."""
    g = np.asarray(g, dtype=np.float64)
    checked = 0
    for A in range(1 << n):
        for x in range(n):
            bit = 1 << x
            if A & bit:
                continue
            checked += 1
            if g[A | bit] < g[A] - _slack(g[A | bit], g[A], tol):
                return A, x, checked
    return 0, -1, checked


def cost_axiom_witness(c, n, tol):
    """Check c(empty)=0, positivity, strict monotonicity and the triangle inequality.

    Returns ``(code, a, b, checked)``: code 0 pass, 1 nonzero empty cost,
    3 non-increasing step (A=a, x=b), 2 non-positive c(a),
    4 triangle violation for the pair (a, b).
    """
    c = np.asarray(c, dtype=np.float64)
    full = 1 << n
    checked = 1
    if abs(c[0]) > tol:
        return 1, 0, 0, checked
    for A in range(full):
        for x in range(n):
            bit = 1 << x
            if A & bit:
                continue
            checked += 1
            if c[A | bit] - c[A] <= tol:
                return 3, A, x, checked
    # implied by the scan above; kept as a guard against tolerance drift
    for S in range(1, full):
        checked += 1
        if c[S] <= tol:
            return 2, S, 0, checked
    for A in range(full):
        for B in range(A, full):
            checked += 1
            lhs = c[A | B]
            rhs = c[A] + c[B]
            if lhs > rhs + _slack(lhs, rhs, tol):
                return 4, A, B, checked
    return 0, 0, 0, checked


def optimal_values(fvals, masks, costs, n, m, budget, tol):
    """Worst-case optimal values over all partial realizations.

    A partial realization is a base-(m+1) code whose digit i is the state
    of item i, or m when item i is unobserved. Selecting an unobserved
    item lowers its digit, so children always have smaller codes and a
    single ascending sweep suffices.

    Returns ``(values, choice)``; ``choice[code]`` is the item to select
    next, or -1 when stopping is optimal.
    """
    fvals = np.asarray(fvals, dtype=np.float64)
    masks = np.asarray(masks, dtype=np.int64)
    costs = np.asarray(costs, dtype=np.float64)
    ncodes = fvals.shape[0]
    values = np.empty(ncodes, dtype=np.float64)
    choice = np.full(ncodes, -1, dtype=np.int64)
    base = m + 1
    powers = [base**i for i in range(n)]
    limit = budget + tol
    for code in range(ncodes):
        best = fvals[code]
        best_item = -1
        mask = int(masks[code])
        for x in range(n):
            bit = 1 << x
            if mask & bit or costs[mask | bit] > limit:
                continue
            start = code - m * powers[x]
            worst = values[start]
            for y in range(1, m):
                v = values[start + y * powers[x]]
                if v < worst:
                    worst = v
            if worst > best + tol:
                best = worst
                best_item = x
        values[code] = best
        choice[code] = best_item
    return values, choice
