# cython: language_level=3
"""Compiled enumeration kernels; mirrors ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline double _slack(double lhs, double rhs, double tol) noexcept nogil:
    cdef double s = 1.0
    if fabs(lhs) > s:
        s = fabs(lhs)
    if fabs(rhs) > s:
        s = fabs(rhs)
    return tol * s


def cs_submodular_witness(g, c, int n, double tol):
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef long full = 1 << n
    cdef long checked = 0
    cdef long x, bit, A, B, t, comp
    cdef double lhs, rhs
    with nogil:
        for A in range(full):
            comp = (full - 1) & ~A
            t = 0
            while True:
                B = A | t
                for x in range(n):
                    bit = 1 << x
                    if B & bit:
                        continue
                    lhs = (gv[A | bit] - gv[A]) * (cv[B | bit] - cv[B])
                    rhs = (gv[B | bit] - gv[B]) * (cv[A | bit] - cv[A])
                    checked += 1
                    if lhs < rhs - _slack(lhs, rhs, tol):
                        with gil:
                            return int(x), int(B), int(A), int(checked)
                if t == comp:
                    break
                t = ((t | ~comp) + 1) & comp
    return -1, 0, 0, int(checked)


def submodular_witness(g, int n, double tol):
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef long full = 1 << n
    cdef long checked = 0
    cdef long A, x, y, bx, by
    cdef double lhs, rhs
    with nogil:
        for A in range(full):
            for x in range(n):
                bx = 1 << x
                if A & bx:
                    continue
                for y in range(x + 1, n):
                    by = 1 << y
                    if A & by:
                        continue
                    lhs = gv[A | bx] - gv[A]
                    rhs = gv[A | bx | by] - gv[A | by]
                    checked += 1
                    if lhs < rhs - _slack(lhs, rhs, tol):
                        with gil:
                            return int(x), int(A | by), int(A), int(checked)
    return -1, 0, 0, int(checked)


def monotone_witness(g, int n, double tol):
    cdef const double[::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef long full = 1 << n
    cdef long checked = 0
    cdef long A, x, bit
    with nogil:
        for A in range(full):
            for x in range(n):
                bit = 1 << x
                if A & bit:
                    continue
                checked += 1
                if gv[A | bit] < gv[A] - _slack(gv[A | bit], gv[A], tol):
                    with gil:
                        return int(A), int(x), int(checked)
    return 0, -1, int(checked)


def cost_axiom_witness(c, int n, double tol):
    cdef const double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef long full = 1 << n
    cdef long checked = 1
    cdef long S, A, B, x, bit
    cdef double lhs, rhs
    if fabs(cv[0]) > tol:
        return 1, 0, 0, int(checked)
    with nogil:
        for A in range(full):
            for x in range(n):
                bit = 1 << x
                if A & bit:
                    continue
                checked += 1
                if cv[A | bit] - cv[A] <= tol:
                    with gil:
                        return 3, int(A), int(x), int(checked)
        for S in range(1, full):
            checked += 1
            if cv[S] <= tol:
                with gil:
                    return 2, int(S), 0, int(checked)
        for A in range(full):
            for B in range(A, full):
                checked += 1
                lhs = cv[A | B]
                rhs = cv[A] + cv[B]
                if lhs > rhs + _slack(lhs, rhs, tol):
                    with gil:
                        return 4, int(A), int(B), int(checked)
    return 0, 0, 0, int(checked)


def optimal_values(fvals, masks, costs, int n, int m, double budget, double tol):
    cdef const double[::1] fv = np.ascontiguousarray(fvals, dtype=np.float64)
    cdef const cnp.int64_t[::1] mv = np.ascontiguousarray(masks, dtype=np.int64)
    cdef const double[::1] cv = np.ascontiguousarray(costs, dtype=np.float64)
    cdef Py_ssize_t ncodes = fv.shape[0]
    values_arr = np.empty(ncodes, dtype=np.float64)
    choice_arr = np.full(ncodes, -1, dtype=np.int64)
    cdef double[::1] values = values_arr
    cdef cnp.int64_t[::1] choice = choice_arr
    powers_arr = np.array([(m + 1) ** i for i in range(n)], dtype=np.int64)
    cdef const cnp.int64_t[::1] powers = powers_arr
    cdef double limit = budget + tol
    cdef Py_ssize_t code, start
    cdef long mask, bit, x, y, best_item
    cdef double best, worst, v
    with nogil:
        for code in range(ncodes):
            best = fv[code]
            best_item = -1
            mask = mv[code]
            for x in range(n):
                bit = 1 << x
                if mask & bit or cv[mask | bit] > limit:
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
    return values_arr, choice_arr
