"""Truth under the strict semantics, satisfying functions and normal forms."""
from __future__ import annotations

from functools import lru_cache

from .model import (
    EVENTUALLY,
    NEXT,
    DataInstance,
    DiamondQuery,
    Formula,
    PathQuery,
    canonical_text,
    to_path,
)


def blocks(q: PathQuery) -> list:
    """Split a path query into maximal NEXT-linked blocks of atom sets."""
    out = [[q.rho0]]
    for op, rho in q.steps:
        if op is NEXT:
            out[-1].append(rho)
        else:
            out.append([rho])
    return out


def _fits(D: DataInstance, block, x: int) -> bool:
    return all(rho <= D.at(x + k) for k, rho in enumerate(block))


def satisfying_function(D: DataInstance, q: PathQuery, start: int = 0):
    """Lexicographically least satisfying function of ``q`` in ``D`` from ``start``.

    Returns a tuple of timestamps (one per step index) or ``None``.  Each
    NEXT-block is placed at its leftmost feasible position, which is optimal
    because later blocks only need to start after the previous one ends.
    """
    q = to_path(q)
    bl = blocks(q)
    if not _fits(D, bl[0], start):
        return None
    f = list(range(start, start + len(bl[0])))
    for block in bl[1:]:
        lo = f[-1] + 1
        hi = max(D.max_time, lo)
        for x in range(lo, hi + 1):
            if _fits(D, block, x):
                f.extend(range(x, x + len(block)))
                break
        else:
            return None
    return tuple(f)


def _holds_formula(D: DataInstance, n: int, f: Formula) -> bool:
    @lru_cache(maxsize=None)
    def go(node: Formula, t: int) -> bool:
        if not node.rho <= D.at(t):
            return False
        for op, child in node.children:
            if op is NEXT:
                if not go(child, t + 1):
                    return False
            else:
                hi = max(D.max_time, t + 1)
                if not any(go(child, m) for m in range(t + 1, hi + 1)):
                    return False
        return True

    return go(f, n)


def holds_at(D: DataInstance, n: int, q) -> bool:
    """D, n |= q under the strict semantics (atoms are false beyond max D)."""
    if n < 0:
        raise ValueError("timestamps are non-negative")
    if isinstance(q, PathQuery):
        return satisfying_function(D, q, n) is not None
    if isinstance(q, DiamondQuery):
        if not q.rho <= D.at(n):
            return False
        return all(satisfying_function(D, c, n) is not None for c in q.conjuncts)
    if isinstance(q, Formula):
        return _holds_formula(D, n, q)
    raise TypeError(f"not a query: {q!r}")


def holds(D: DataInstance, q) -> bool:
    return holds_at(D, 0, q)


# ---------------------------------------------------------------------------
# normal forms


def normalize_path(q: PathQuery) -> PathQuery:
    """Drop trailing trivially-true steps and make operators uniform on T-runs.

    A run of empty atom sets between two anchors is an exact gap when all of
    its operators are NEXT and an at-least gap otherwise; in the latter case
    every operator in the run becomes EVENTUALLY.
    """
    rhos = list(q.rhos)
    ops = list(q.ops)
    while ops and not rhos[-1]:
        rhos.pop()
        ops.pop()
    n = len(ops)
    j = 0
    while j < n:
        k = j + 1
        while k < n and not rhos[k]:
            k += 1
        # anchors j and k; operators ops[j..k-1] cover the run
        if k - j > 1 and EVENTUALLY in ops[j:k]:
            for i in range(j, k):
                ops[i] = EVENTUALLY
        j = k
    return PathQuery.build(rhos, ops)


def _prune_formula(f: Formula) -> Formula:
    kids = []
    for op, child in f.children:
        child = _prune_formula(child)
        if child.rho or child.children:
            kids.append((op, child))
    return Formula(f.rho, tuple(kids))


def normalize_diamond(q: DiamondQuery) -> DiamondQuery:
    """Redundancy-free normal form of an eventually-only conjunction."""
    from .containment import path_contains

    seen = {}
    for c in q.conjuncts:
        c = normalize_path(c)
        if c.steps:
            seen.setdefault(canonical_text(c), c)
    items = [seen[k] for k in sorted(seen)]
    kept = []
    for i, qi in enumerate(items):
        redundant = False
        for j, qj in enumerate(items):
            if i == j or path_contains(qj, qi) is None:
                continue
            # qj implies qi: drop qi unless they are equivalent and qi comes first
            if path_contains(qi, qj) is None or j < i:
                redundant = True
                break
        if not redundant:
            kept.append(qi)
    return DiamondQuery(q.rho, tuple(kept))


def normalize(q):
    """Equivalent query of the same shape in normal form.

    Path-shaped formulas come back as ``PathQuery``; eventually-only formulas
    with branching come back as ``DiamondQuery``; anything else is returned
    as a ``Formula`` with atom-free subformulas removed.
    """
    if isinstance(q, PathQuery):
        return normalize_path(q)
    if isinstance(q, DiamondQuery):
        return normalize_diamond(q)
    if isinstance(q, Formula):
        f = _prune_formula(q)
        if f.is_path():
            return normalize_path(to_path(f))
        if not f.uses_next():
            from .model import to_diamond

            return normalize_diamond(to_diamond(f))
        return f
    raise TypeError(f"not a query: {q!r}")
