# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels: the fast backend.

Mirrors ``pure.py`` operation for operation. Floating-point additions
happen in the same order as the pure versions, so both backends return
bit-identical selections.
"""

from libc.stdlib cimport calloc, free, malloc

BACKEND = "speed"


def lcs_length(a, b):
    """Length of the longest common subsequence of two id sequences."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0 or lb == 0:
        return 0
    if lb > la:
        a, b = b, a
        la, lb = lb, la

    cdef long long *xa = <long long *> malloc(la * sizeof(long long))
    cdef long long *xb = <long long *> malloc(lb * sizeof(long long))
    cdef long long *prev = <long long *> calloc(lb + 1, sizeof(long long))
    cdef long long *cur = <long long *> calloc(lb + 1, sizeof(long long))
    if xa == NULL or xb == NULL or prev == NULL or cur == NULL:
        free(xa); free(xb); free(prev); free(cur)
        raise MemoryError()

    cdef Py_ssize_t i, j
    cdef long long x, pj, cj, result
    cdef long long *tmp
    try:
        for i in range(la):
            xa[i] = a[i]
        for j in range(lb):
            xb[j] = b[j]
        for i in range(la):
            x = xa[i]
            for j in range(1, lb + 1):
                if x == xb[j - 1]:
                    cur[j] = prev[j - 1] + 1
                else:
                    pj = prev[j]
                    cj = cur[j - 1]
                    cur[j] = pj if pj >= cj else cj
            tmp = prev; prev = cur; cur = tmp
        result = prev[lb]
    finally:
        free(xa); free(xb); free(prev); free(cur)
    return result


def greedy_select(costs, indptr, indices, weights, n_concepts, budget,
                  occurrence):
    """Density-greedy sentence selection under a budget.

    Same contract as the pure version: CSR concept lists per sentence,
    highest positive gain per unit cost wins, ties to the lowest index,
    selected indices returned in pick order.
    """
    cdef Py_ssize_t n = len(costs)
    cdef Py_ssize_t nnz = len(indices)
    cdef Py_ssize_t nc = n_concepts
    cdef long long budget_c = budget
    cdef bint occ = bool(occurrence)

    cdef long long *c_costs = <long long *> malloc(n * sizeof(long long))
    cdef Py_ssize_t *c_indptr = <Py_ssize_t *> malloc(
        (n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *c_indices = <Py_ssize_t *> malloc(
        (nnz if nnz else 1) * sizeof(Py_ssize_t))
    cdef double *c_weights = <double *> malloc(
        (nc if nc else 1) * sizeof(double))
    cdef char *covered = <char *> calloc(nc if nc else 1, sizeof(char))
    cdef char *chosen = <char *> calloc(n if n else 1, sizeof(char))
    cdef double *static_gain = <double *> calloc(
        n if n else 1, sizeof(double))
    if (c_costs == NULL or c_indptr == NULL or c_indices == NULL
            or c_weights == NULL or covered == NULL or chosen == NULL
            or static_gain == NULL):
        free(c_costs); free(c_indptr); free(c_indices); free(c_weights)
        free(covered); free(chosen); free(static_gain)
        raise MemoryError()

    cdef Py_ssize_t i, p, c, best
    cdef long long used = 0
    cdef double g, gain, density, best_density
    order = []
    try:
        for i in range(n):
            c_costs[i] = costs[i]
        for i in range(n + 1):
            c_indptr[i] = indptr[i]
        for i in range(nnz):
            c_indices[i] = indices[i]
        for i in range(nc):
            c_weights[i] = weights[i]

        if occ:
            for i in range(n):
                g = 0.0
                for p in range(c_indptr[i], c_indptr[i + 1]):
                    g += c_weights[c_indices[p]]
                static_gain[i] = g

        while True:
            best = -1
            best_density = 0.0
            for i in range(n):
                if chosen[i] or used + c_costs[i] > budget_c:
                    continue
                if occ:
                    gain = static_gain[i]
                else:
                    gain = 0.0
                    for p in range(c_indptr[i], c_indptr[i + 1]):
                        c = c_indices[p]
                        if not covered[c]:
                            gain += c_weights[c]
                if gain <= 0.0:
                    continue
                density = gain / c_costs[i]
                if density > best_density:
                    best_density = density
                    best = i
            if best < 0:
                break
            chosen[best] = 1
            order.append(best)
            used += c_costs[best]
            if not occ:
                for p in range(c_indptr[best], c_indptr[best + 1]):
                    covered[c_indices[p]] = 1
    finally:
        free(c_costs); free(c_indptr); free(c_indices); free(c_weights)
        free(covered); free(chosen); free(static_gain)
    return order
