"""Containment between queries and a bounded semantic refutation oracle."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .evaluation import blocks, holds, normalize
from .model import (
    NEXT,
    BudgetExceeded,
    DataInstance,
    DiamondQuery,
    Formula,
    PathQuery,
    QueryClass,
    to_diamond,
    to_path,
)

# |sig| * max_len above this triggers BudgetExceeded in the full enumeration
DEFAULT_BIT_CAP = 20
DEFAULT_MODEL_CAP = 1_000_000


@dataclass(frozen=True)
class ContainmentWitness:
    """Step-index map h with h(0)=0 certifying that one path query implies another."""

    h: tuple

    def __iter__(self):
        return iter(self.h)

    def __len__(self):
        return len(self.h)

    def __getitem__(self, i):
        return self.h[i]


def _require_normal(q: PathQuery, name: str):
    if not isinstance(q, PathQuery):
        raise TypeError(f"{name} must be a PathQuery")
    if not q.is_normal():
        raise ValueError(f"{name} = {q} is not in normal form")


def path_contains(q: PathQuery, q2: PathQuery):
    """Witness that q implies q2, or ``None``.

    ``reach[i][j]`` says the suffix of q2 from step i can be mapped with
    h(i) = j.  The returned witness is the lexicographically least one.
    """
    _require_normal(q, "q")
    _require_normal(q2, "q2")
    r, o = q.rhos, q.ops
    r2, o2 = q2.rhos, q2.ops
    n, m = len(o), len(o2)

    reach = [[False] * (n + 1) for _ in range(m + 1)]
    for j in range(n + 1):
        reach[m][j] = r2[m] <= r[j]
    for i in range(m - 1, -1, -1):
        later = False  # some j' > j with reach[i+1][j']
        for j in range(n, -1, -1):
            if r2[i] <= r[j]:
                if o2[i] is NEXT:
                    ok = j < n and o[j] is NEXT and reach[i + 1][j + 1]
                else:
                    ok = later
                reach[i][j] = ok
            later = later or reach[i + 1][j]
    if not reach[0][0]:
        return None
    h = [0]
    for i in range(m):
        j = h[-1]
        if o2[i] is NEXT:
            h.append(j + 1)
        else:
            h.append(next(k for k in range(j + 1, n + 1) if reach[i + 1][k]))
    return ContainmentWitness(tuple(h))


def _absorb(rho, c: PathQuery) -> PathQuery:
    return PathQuery(rho | c.rho0, c.steps)


def diamond_contains(q, q2) -> bool:
    """q implies q2 for eventually-only conjunctions.

    Each conjunct of q2 must follow from a single conjunct of q with the
    propositional part of q absorbed into its first position.
    """
    q, q2 = to_diamond(q), to_diamond(q2)
    if not q2.rho <= q.rho:
        return False
    for c2 in q2.conjuncts:
        c2 = normalize(c2)
        if not any(path_contains(normalize(_absorb(q.rho, c)), c2) is not None for c in q.conjuncts):
            return False
    return True


def equivalent(q, q2, cls: QueryClass) -> bool:
    if cls is QueryClass.Q_ND:
        raise ValueError("containment for general next/eventually conjunctions is not supported")
    if cls is QueryClass.Q_D:
        return diamond_contains(q, q2) and diamond_contains(q2, q)
    a, b = normalize(to_path(q)), normalize(to_path(q2))
    return path_contains(a, b) is not None and path_contains(b, a) is not None


def contains(q, q2) -> bool:
    """Class-agnostic containment for path and eventually-only queries."""
    if isinstance(q, Formula):
        q = normalize(q)
    if isinstance(q2, Formula):
        q2 = normalize(q2)
    if isinstance(q, PathQuery) and isinstance(q2, PathQuery):
        return path_contains(normalize(q), normalize(q2)) is not None
    if isinstance(q, Formula) or isinstance(q2, Formula):
        raise ValueError("containment for general next/eventually conjunctions is not supported")
    return diamond_contains(q, q2)


# ---------------------------------------------------------------------------
# bounded refutation


def minimal_models(q: PathQuery, max_len: int):
    """Words with exactly rho_i at the witness positions of some placement of q.

    Every instance satisfying q contains one of these pointwise, so for a
    monotone q2 they suffice to search for counter-instances.
    """
    bl = blocks(normalize(q))
    first, rest = bl[0], bl[1:]
    slack = max_len - sum(len(b) for b in bl)
    if slack < 0:
        return
    for gaps in _gap_vectors(len(rest), slack):
        word = list(first)
        for g, b in zip(gaps, rest):
            word.extend([frozenset()] * g)
            word.extend(b)
        yield DataInstance(tuple(word))


def _gap_vectors(k: int, slack: int):
    if k == 0:
        yield ()
        return
    for total in range(slack + 1):
        for cut in itertools.combinations(range(total + k - 1), k - 1):
            prev, out = -1, []
            for c in cut:
                out.append(c - prev - 1)
                prev = c
            out.append(total + k - 1 - prev - 1)
            yield tuple(out)


def all_instances(sig, max_len: int):
    sig = sorted(sig)
    subsets = [frozenset(c) for r in range(len(sig) + 1) for c in itertools.combinations(sig, r)]
    for length in range(1, max_len + 1):
        for word in itertools.product(subsets, repeat=length):
            yield DataInstance(word)


def bounded_refute(q, q2, sig, max_len: int, *, bit_cap: int = DEFAULT_BIT_CAP,
                   model_cap: int = DEFAULT_MODEL_CAP):
    """Some D with at most ``max_len`` timestamps over ``sig`` where q holds and q2 fails.

    Path queries are searched through their minimal models, which is exhaustive
    for the bound.  Other queries are checked against every word over ``sig``.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    sig = frozenset(sig)
    if isinstance(q, Formula) and q.is_path():
        q = to_path(q)
    if isinstance(q, PathQuery):
        if not q.sig <= sig:
            return None
        for count, D in enumerate(minimal_models(q, max_len)):
            if count >= model_cap:
                raise BudgetExceeded(f"more than {model_cap} candidate models")
            if not holds(D, q2):
                return D
        return None
    if len(sig) * max_len > bit_cap:
        raise BudgetExceeded(f"|sig| * max_len = {len(sig) * max_len} exceeds cap {bit_cap}")
    for D in all_instances(sig, max_len):
        if holds(D, q) and not holds(D, q2):
            return D
    return None
