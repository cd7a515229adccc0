"""Shared fixtures and generators for the test suite."""
from __future__ import annotations

import random
from pathlib import Path

from ltlsep.containment import contains
from ltlsep.evaluation import normalize
from ltlsep.model import (
    EVENTUALLY,
    NEXT,
    DataInstance,
    ExampleSet,
    PathQuery,
    canonical_text,
    parse_example_set,
    parse_query,
    to_formula,
)

DATA = Path(__file__).parent / "data"


def load(name: str) -> ExampleSet:
    return parse_example_set((DATA / name).read_text())


def examples(pos, neg=()) -> ExampleSet:
    return ExampleSet([DataInstance.parse(p) for p in pos], [DataInstance.parse(n) for n in neg])


def q(text: str):
    return normalize(parse_query(text))


def texts(qs) -> set:
    return {canonical_text(x) for x in qs}


def equivalent(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return contains(a, b) and contains(b, a)


def same_up_to_equivalence(xs, ys) -> bool:
    xs, ys = list(xs), list(ys)
    return all(any(equivalent(x, y) for y in ys) for x in xs) and all(
        any(equivalent(x, y) for x in xs) for y in ys
    )


# ---------------------------------------------------------------------------
# independent evaluator: direct recursion on the strict semantics, with an
# explicit horizon instead of greedy placement


def brute_holds(D: DataInstance, query, t: int = 0) -> bool:
    f = to_formula(query)
    horizon = D.max_time + f.tdp + 2

    def go(node, n):
        if any(a not in D.at(n) for a in node.rho):
            return False
        for op, child in node.children:
            if op is NEXT:
                ok = go(child, n + 1)
            else:
                ok = any(go(child, m) for m in range(n + 1, horizon + 1))
            if not ok:
                return False
        return True

    return go(f, t)


# ---------------------------------------------------------------------------
# random generators


def random_atom_set(rng: random.Random, sig: str, p: float = 0.5) -> frozenset:
    return frozenset(a for a in sig if rng.random() < p)


def random_instance(rng: random.Random, sig: str, max_len: int = 4) -> DataInstance:
    n = rng.randint(1, max_len)
    return DataInstance(tuple(random_atom_set(rng, sig) for _ in range(n)))


def random_example_set(rng: random.Random, max_pos=3, max_neg=3, max_len=4, max_sig=3) -> ExampleSet:
    sig = "ABC"[: rng.randint(1, max_sig)]
    pos = [random_instance(rng, sig, max_len) for _ in range(rng.randint(1, max_pos))]
    neg = [random_instance(rng, sig, max_len) for _ in range(rng.randint(0, max_neg))]
    return ExampleSet(pos, neg)


def random_path(rng: random.Random, sig: str, max_tdp: int = 3, allow_next: bool = True) -> PathQuery:
    """A random path query in normal form."""
    n = rng.randint(0, max_tdp)
    rhos = [random_atom_set(rng, sig, 0.4) for _ in range(n + 1)]
    ops = [NEXT if allow_next and rng.random() < 0.5 else EVENTUALLY for _ in range(n)]
    if n and not rhos[-1]:
        rhos[-1] = frozenset(rng.choice(sig))
    return normalize(PathQuery.build(rhos, ops))


def random_interval(rng: random.Random, sig: str, max_tdp: int = 3) -> PathQuery:
    k = rng.randint(1, max_tdp)
    window = [random_atom_set(rng, sig, 0.5) for _ in range(k)]
    window[0] = window[0] or frozenset(rng.choice(sig))
    window[-1] = window[-1] or frozenset(rng.choice(sig))
    return PathQuery.build([frozenset()] + window, [EVENTUALLY] + [NEXT] * (k - 1))
