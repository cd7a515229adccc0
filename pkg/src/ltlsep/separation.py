"""Separator checks, extremal-separator verification and frontier climbing."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .evaluation import holds, normalize
from .frontiers import Direction, frontier
from .model import (
    EVENTUALLY,
    NEXT,
    BudgetExceeded,
    DiamondQuery,
    ExampleSet,
    PathQuery,
    QueryClass,
    to_diamond,
    to_path,
)


class Kind(enum.Enum):
    MSS = "mss"
    MGS = "mgs"

    @classmethod
    def parse(cls, text: str) -> "Kind":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown kind {text!r}") from None


@dataclass(frozen=True)
class SeparationReport:
    query: object
    is_separator: bool
    failing_positive: int | None = None
    failing_negative: int | None = None

    def __bool__(self):
        return self.is_separator


def separates(q, E: ExampleSet) -> SeparationReport:
    for i, D in enumerate(E.positives):
        if not holds(D, q):
            return SeparationReport(q, False, failing_positive=i)
    for j, D in enumerate(E.negatives):
        if holds(D, q):
            return SeparationReport(q, False, failing_negative=j)
    return SeparationReport(q, True)


def _in_class(q, cls: QueryClass):
    if cls is QueryClass.Q_D:
        return normalize(to_diamond(q))
    return normalize(to_path(q))


def _frontier(q, E: ExampleSet, cls: QueryClass, direction: Direction):
    if cls is QueryClass.Q_ND:
        raise NotImplementedError("no frontiers for general next/eventually conjunctions; use the oracle")
    if cls is QueryClass.Q_D and direction is Direction.STRENGTHEN:
        raise NotImplementedError(
            "most specific verification for eventually-only conjunctions is coNP-complete; use the oracle"
        )
    bound = E.depth_bound if direction is Direction.STRENGTHEN else None
    return frontier(q, cls, direction, E.sig_bound, bound)


def verify_extremal(q, E: ExampleSet, cls: QueryClass, kind: Kind) -> bool:
    """q separates E and no member of its frontier in the matching direction does."""
    q = _in_class(q, cls)
    if not separates(q, E):
        return False
    direction = Direction.STRENGTHEN if kind is Kind.MSS else Direction.WEAKEN
    return not any(separates(f, E) for f in _frontier(q, E, cls, direction))


def climb(q, E: ExampleSet, cls: QueryClass, direction: Direction):
    """Move to the first separating frontier member until none separates."""
    q = _in_class(q, cls)
    if not separates(q, E):
        raise ValueError(f"{q} does not separate the examples")
    while True:
        nxt = next((f for f in _frontier(q, E, cls, direction) if separates(f, E)), None)
        if nxt is None:
            return q
        q = nxt


def unique_mgs_qdiamond(E: ExampleSet, node_cap: int | None = None):
    """Unique most general eventually-only conjunction, or None.

    Each negative on its own may admit a unique most general path separator;
    the conjunction of those is the answer when it separates the full set.
    """
    from .sepgraphs import DEFAULT_NODE_CAP, unique_mgs_pdiamond

    cap = node_cap or DEFAULT_NODE_CAP
    parts = []
    for D in E.negatives:
        q = unique_mgs_pdiamond(ExampleSet(E.positives, (D,)), cap)
        if q is not None:
            parts.append(to_diamond(q))
    rho = frozenset().union(*(p.rho for p in parts)) if parts else frozenset()
    conj = tuple(c for p in parts for c in p.conjuncts)
    q = normalize(DiamondQuery(rho, conj))
    return q if separates(q, E) else None


def interval_exists(E: ExampleSet, cap: int = 1_000_000):
    """Some separating interval query, or None when no interval query separates.

    Candidates intersect, for every choice of start positions (one per
    positive, each at least 1) and window length, the atom sets inside the
    windows.  Longer windows are tried first.
    """
    pos = list(E.positives)
    longest = min(D.max_time for D in pos)
    total = 0
    for k in range(longest, 0, -1):
        ranges = [range(1, D.max_time - k + 2) for D in pos]
        for starts in itertools.product(*ranges):
            total += 1
            if total > cap:
                raise BudgetExceeded(f"more than {cap} interval candidates")
            window = [frozenset.intersection(*(D.at(s + j) for D, s in zip(pos, starts))) for j in range(k)]
            while window and not window[0]:
                window.pop(0)
            while window and not window[-1]:
                window.pop()
            if not window:
                continue
            q = PathQuery.build([frozenset()] + window, [EVENTUALLY] + [NEXT] * (len(window) - 1))
            if separates(q, E):
                return q
    return None
