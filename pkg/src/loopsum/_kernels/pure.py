"""Pure-Python kernels: the fallback backend.

These mirror the compiled versions in ``_speed.pyx`` operation for
operation; both backends must produce identical results, including the
order of floating-point additions, so selections never depend on which
backend happens to be importable.
"""

from __future__ import annotations

BACKEND = "pure"


def lcs_length(a: list[int], b: list[int]) -> int:
    """Length of the longest common subsequence of two id sequences."""
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    cur = [0] * (len(b) + 1)
    for x in a:
        for j, y in enumerate(b, start=1):
            if x == y:
                cur[j] = prev[j - 1] + 1
            else:
                pj = prev[j]
                cj = cur[j - 1]
                cur[j] = pj if pj >= cj else cj
        prev, cur = cur, prev
    return prev[len(b)]


def greedy_select(
    costs: list[int],
    indptr: list[int],
    indices: list[int],
    weights: list[float],
    n_concepts: int,
    budget: int,
    occurrence: bool,
) -> list[int]:
    """Density-greedy sentence selection under a budget.

    Sentences are given in CSR form: sentence ``i`` holds the concept ids
    ``indices[indptr[i]:indptr[i + 1]]``. Repeatedly picks the feasible
    sentence with the highest positive marginal gain per unit cost
    (coverage gain counts a concept only the first time it is covered;
    occurrence gain re-counts it per sentence). Ties go to the lowest
    index. Returns the selected indices in pick order.
    """
    n = len(costs)
    covered = bytearray(n_concepts)
    chosen = bytearray(n)
    order: list[int] = []
    used = 0

    # Occurrence-mode gain never changes, so precompute it.
    static_gain = [0.0] * n
    if occurrence:
        for i in range(n):
            g = 0.0
            for p in range(indptr[i], indptr[i + 1]):
                g += weights[indices[p]]
            static_gain[i] = g

    while True:
        best = -1
        best_density = 0.0
        for i in range(n):
            if chosen[i] or used + costs[i] > budget:
                continue
            if occurrence:
                gain = static_gain[i]
            else:
                gain = 0.0
                for p in range(indptr[i], indptr[i + 1]):
                    c = indices[p]
                    if not covered[c]:
                        gain += weights[c]
            if gain <= 0.0:
                continue
            density = gain / costs[i]
            if density > best_density:
                best_density = density
                best = i
        if best < 0:
            break
        chosen[best] = 1
        order.append(best)
        used += costs[best]
        if not occurrence:
            for p in range(indptr[best], indptr[best + 1]):
                covered[indices[p]] = 1
    return order
