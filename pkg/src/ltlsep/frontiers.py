"""Strengthening and weakening frontiers.

A frontier is a finite set of strictly stronger (or weaker) queries that
sits between an anchor and every other strictly stronger (weaker) query
of the same class.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .containment import contains, path_contains
from .evaluation import normalize, normalize_path
from .model import (
    EVENTUALLY,
    NEXT,
    DiamondQuery,
    PathQuery,
    QueryClass,
    canonical_text,
    classify,
    is_interval,
    to_diamond,
)


class Direction(enum.Enum):
    STRENGTHEN = "s"
    WEAKEN = "w"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        t = text.lower()
        for d in cls:
            if t in (d.value, d.name.lower()):
                return d
        raise ValueError(f"unknown direction {text!r}")


@dataclass(frozen=True)
class Frontier:
    anchor: object
    direction: Direction
    members: tuple
    cls: QueryClass
    bound: int | None = None

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def texts(self) -> list:
        return [canonical_text(m) for m in self.members]


def _require_normal_path(q: PathQuery):
    if not isinstance(q, PathQuery):
        raise TypeError("expected a PathQuery")
    if not q.is_normal():
        raise ValueError(f"{q} is not in normal form")


def _strictly(stronger, weaker) -> bool:
    return contains(stronger, weaker) and not contains(weaker, stronger)


def _collect(anchor, candidates, direction: Direction) -> tuple:
    """Normalize, dedup by canonical text and keep strict members only."""
    seen = {}
    for c in candidates:
        c = normalize(c)
        seen.setdefault(canonical_text(c), c)
    out = []
    for text, c in seen.items():
        ok = _strictly(c, anchor) if direction is Direction.STRENGTHEN else _strictly(anchor, c)
        if ok:
            out.append(c)
    return tuple(out)


def _anchors(rhos, n):
    """Positions that delimit runs of trivially-true positions."""
    return [i for i in range(n + 1) if i == 0 or i == n or rhos[i]]


# ---------------------------------------------------------------------------
# path queries


def strengthen_path(q: PathQuery, sig, allow_next: bool = True) -> Frontier:
    _require_normal_path(q)
    if not allow_next and q.uses_next():
        raise ValueError(f"{q} uses X but the eventually-only class was requested")
    sig = sorted(sig)
    rhos, ops = list(q.rhos), list(q.ops)
    n = len(ops)
    cands = []
    # 1: extend an atom set
    for i in range(n + 1):
        for a in sig:
            if a not in rhos[i]:
                r = rhos[:]
                r[i] = r[i] | {a}
                cands.append(PathQuery.build(r, ops))
    # 2: insert a trivially-true position in front of an eventually step
    for i in range(n):
        if ops[i] is EVENTUALLY:
            r = rhos[: i + 1] + [frozenset()] + rhos[i + 1:]
            o = ops[:i] + [EVENTUALLY, EVENTUALLY] + ops[i + 1:]
            cands.append(PathQuery.build(r, o))
    # 3: make an at-least gap exact (the whole run of a gap over T positions)
    if allow_next:
        anchors = _anchors(rhos, n)
        for a, b in zip(anchors, anchors[1:]):
            if ops[a] is EVENTUALLY:
                o = ops[:a] + [NEXT] * (b - a) + ops[b:]
                cands.append(PathQuery.build(rhos, o))
    # 4: append an eventually step
    for a in sig:
        cands.append(PathQuery.build(rhos + [frozenset({a})], ops + [EVENTUALLY]))
    cls = QueryClass.QP_ND if allow_next else QueryClass.QP_D
    return Frontier(q, Direction.STRENGTHEN, _collect(q, cands, Direction.STRENGTHEN), cls)


def _path_weakenings(q: PathQuery, allow_next: bool) -> list:
    rhos, ops = list(q.rhos), list(q.ops)
    n = len(ops)
    cands = []
    # 1: drop an atom
    for i in range(n + 1):
        for a in sorted(rhos[i]):
            r = rhos[:]
            r[i] = r[i] - {a}
            cands.append(PathQuery.build(r, ops))
    # 2: remove a trivially-true position inside an at-least gap
    for i in range(1, n):
        if not rhos[i] and ops[i - 1] is EVENTUALLY and ops[i] is EVENTUALLY:
            cands.append(PathQuery.build(rhos[:i] + rhos[i + 1:], ops[:i] + ops[i + 1:]))
    # 3: relax an exact step
    if allow_next:
        for i in range(n):
            if ops[i] is NEXT:
                cands.append(PathQuery.build(rhos, ops[:i] + [EVENTUALLY] + ops[i + 1:]))
    return cands


def weaken_path(q: PathQuery, allow_next: bool = True) -> Frontier:
    _require_normal_path(q)
    if not allow_next and q.uses_next():
        raise ValueError(f"{q} uses X but the eventually-only class was requested")
    cls = QueryClass.QP_ND if allow_next else QueryClass.QP_D
    members = _collect(q, _path_weakenings(q, allow_next), Direction.WEAKEN)
    return Frontier(q, Direction.WEAKEN, members, cls)


# ---------------------------------------------------------------------------
# eventually-only conjunctions


def weaken_diamond(q: DiamondQuery, sig=None) -> Frontier:
    """Weakening frontier of a redundancy-free eventually-only conjunction.

    ``sig`` is accepted for interface symmetry; weakening never adds atoms.
    """
    if isinstance(q, PathQuery):
        if q.uses_next():
            raise ValueError(f"{q} uses X")
        q = to_diamond(q)
    if not isinstance(q, DiamondQuery):
        raise TypeError("expected a DiamondQuery")
    nf = normalize(q)
    if canonical_text(nf) != canonical_text(q):
        raise ValueError(f"{q} is not redundancy-free normal form")
    cands = []
    for a in sorted(q.rho):
        cands.append(DiamondQuery(q.rho - {a}, q.conjuncts))
    for i, qi in enumerate(q.conjuncts):
        repl = [m for m in weaken_path(qi, allow_next=False).members if m.steps]
        rest = q.conjuncts[:i] + q.conjuncts[i + 1:]
        # a member with a non-trivial first position cannot occur: qi starts with T
        cands.append(DiamondQuery(q.rho, rest + tuple(repl)))
    return Frontier(q, Direction.WEAKEN, _collect(q, cands, Direction.WEAKEN), QueryClass.Q_D)


# ---------------------------------------------------------------------------
# interval queries


def _interval_from(rhos) -> PathQuery | None:
    """Interval query matching the window ``rhos`` (leading/trailing T trimmed)."""
    rhos = list(rhos)
    while rhos and not rhos[0]:
        rhos.pop(0)
    while rhos and not rhos[-1]:
        rhos.pop()
    if not rhos:
        return None
    return PathQuery.build([frozenset()] + rhos, [EVENTUALLY] + [NEXT] * (len(rhos) - 1))


def interval_frontier(q: PathQuery, sig, direction: Direction, n: int | None = None) -> Frontier:
    if not isinstance(q, PathQuery) or not is_interval(q) or not q.is_normal():
        raise ValueError(f"{q} is not an interval query in normal form")
    window = list(q.rhos[1:])
    sig = sorted(sig)
    cands = []
    if direction is Direction.WEAKEN:
        for i, rho in enumerate(window):
            for a in sorted(rho):
                w = window[:]
                w[i] = rho - {a}
                c = _interval_from(w)
                if c is not None:
                    cands.append(c)
        return Frontier(q, direction, _collect(q, cands, direction), QueryClass.Q_IN)
    if n is None or n < q.tdp:
        raise ValueError("a depth bound n >= tdp(q) is required for interval strengthening")
    for i, rho in enumerate(window):
        for a in sig:
            if a not in rho:
                w = window[:]
                w[i] = rho | {a}
                cands.append(_interval_from(w))
    for k in range(1, n - len(window) + 1):
        gap = [frozenset()] * (k - 1)
        for a in sig:
            cands.append(_interval_from([frozenset({a})] + gap + window))
            cands.append(_interval_from(window + gap + [frozenset({a})]))
    members = [c for c in _collect(q, cands, direction) if c.tdp <= n]
    return Frontier(q, direction, tuple(members), QueryClass.Q_IN, n)


# ---------------------------------------------------------------------------


def frontier(q, cls: QueryClass, direction: Direction, sig, bound: int | None = None) -> Frontier:
    """Dispatch on class and direction."""
    if cls in (QueryClass.QP_ND, QueryClass.QP_D):
        allow_next = cls is QueryClass.QP_ND
        if direction is Direction.STRENGTHEN:
            f = strengthen_path(q, sig, allow_next)
            if bound is not None:
                f = Frontier(q, f.direction, tuple(m for m in f.members if m.tdp <= bound), f.cls, bound)
            return f
        return weaken_path(q, allow_next)
    if cls is QueryClass.Q_IN:
        return interval_frontier(q, sig, direction, bound)
    if cls is QueryClass.Q_D:
        if direction is Direction.WEAKEN:
            return weaken_diamond(q, sig)
        raise NotImplementedError(
            "strengthening frontiers of eventually-only conjunctions can be exponential; use the oracle"
        )
    raise NotImplementedError(f"no frontier for class {cls.value}")


def minimize(f: Frontier) -> Frontier:
    """Drop members that another member already dominates."""
    ms = list(f.members)
    keep = []
    for i, m in enumerate(ms):
        dominated = False
        for j, other in enumerate(ms):
            if i == j:
                continue
            if f.direction is Direction.WEAKEN:
                dominated = _strictly(other, m)
            else:
                dominated = _strictly(m, other)
            if dominated:
                break
        if not dominated:
            keep.append(m)
    return Frontier(f.anchor, f.direction, tuple(keep), f.cls, f.bound)
