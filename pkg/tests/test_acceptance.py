"""Acceptance criteria, one test (or a small group) per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints
one ACCEPTANCE line per criterion.
"""
import itertools
import random
import time
from functools import lru_cache

import pytest

from ltlsep.containment import bounded_refute, contains, path_contains
from ltlsep.evaluation import holds, holds_at, normalize
from ltlsep.frontiers import (
    Direction,
    interval_frontier,
    strengthen_path,
    weaken_diamond,
    weaken_path,
)
from ltlsep.model import EVENTUALLY, NEXT, DataInstance, DiamondQuery, PathQuery, QueryClass
from ltlsep.oracle import (
    CnfFormula,
    cnf_examples,
    count_sat,
    enumerate_diamond_paths,
    enumerate_paths,
    enumerate_separators,
    extremal_sets,
    subsets,
    unique_extremal,
)
from ltlsep.separation import Kind, interval_exists, separates, unique_mgs_qdiamond, verify_extremal
from ltlsep.sepgraphs import (
    Extremum,
    Mode,
    build_product,
    extremal_length,
    separating_path,
    separating_paths,
    unique_mgs_pdiamond,
    unique_mss,
)
from support import load, q, random_example_set, random_interval, random_path, same_up_to_equivalence, texts

QP_ND, QP_D, Q_IN, Q_D = QueryClass.QP_ND, QueryClass.QP_D, QueryClass.Q_IN, QueryClass.Q_D


def note(request, text):
    request.node.user_properties.append(("detail", text))


def same(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return contains(a, b) and contains(b, a)


# ---------------------------------------------------------------------------


@pytest.mark.acceptance(1, "three-instance example reproduction")
def test_criterion_1(request):
    t = time.perf_counter()
    E = load("three_instances.txt")
    want = q("F(A & X(B & X C))")
    assert same(unique_mss(build_product(E, Mode.NEXT_DIAMOND)), want)
    assert same(unique_extremal(E, Q_IN, "mss"), want)
    _, mgs = extremal_sets(E, Q_IN)
    assert same_up_to_equivalence(mgs, [q("F(A & X X C)"), q("F(B & X C)")])
    assert separating_path(build_product(E, Mode.DIAMOND)) is None
    assert not enumerate_separators(E, QP_D)
    elapsed = time.perf_counter() - t
    note(request, f"{elapsed:.2f}s")
    assert elapsed < 1


HASSE_NODES = [
    "A & B & F(A & B)",
    "A & B & F A", "A & B & F B", "A & F(A & B)", "B & F(A & B)",
    "A & B", "A & F A", "A & F B", "B & F A", "B & F B", "F(A & B)",
    "B", "F A", "F B",
]


@pytest.mark.acceptance(2, "Hasse diagram example: extremes and separator space")
def test_criterion_2(request):
    t = time.perf_counter()
    E = load("hasse.txt")
    mss, mgs = extremal_sets(E, QP_D)
    assert texts(mgs) == {"B", "F A", "F B"}
    assert texts(mss) == {"A & B & F(A & B)"}
    seps = enumerate_separators(E, QP_D)
    assert texts(seps) == texts(q(x) for x in HASSE_NODES)
    for s in seps:
        assert verify_extremal(s, E, QP_D, Kind.MGS) == any(same(s, m) for m in mgs)
        assert verify_extremal(s, E, QP_D, Kind.MSS) == any(same(s, m) for m in mss)
    elapsed = time.perf_counter() - t
    note(request, f"{len(seps)} separators, {elapsed:.2f}s")
    assert elapsed < 1


@pytest.mark.acceptance(3, "two-orders and shortest-separator examples")
def test_criterion_3(request):
    t = time.perf_counter()
    E = load("two_orders.txt")
    assert texts(enumerate_separators(E, QP_D)) == {"F A", "F B"}
    assert same(unique_extremal(E, Q_D, "mss"), q("F A & F B"))
    assert unique_extremal(E, Q_D, "mgs") is None
    assert unique_mgs_qdiamond(E) is None
    E3 = load("shortest.txt")
    _, mgs = extremal_sets(E3, QP_D)
    assert texts(mgs) == {"B & C", "B & F A", "C & F A"}
    shortest = extremal_length(build_product(E3), Extremum.SHORTEST)
    assert shortest.tdp == 0
    elapsed = time.perf_counter() - t
    note(request, f"{elapsed:.2f}s")
    assert elapsed < 1


EXPECTED_STRENGTHENING = {
    "F(A & B & X B)", "F(A & X(A & B))", "F F(A & X B)",
    "X(A & X B)", "F(A & X(B & F A))", "F(A & X(B & F B))",
}


@pytest.mark.acceptance(4, "frontier goldens, strengthening half")
def test_criterion_4_strengthening(request):
    got = strengthen_path(q("F(A & X B)"), "AB").members
    extra = texts(got) - EXPECTED_STRENGTHENING
    note(request, f"{len(got)} members; extra: {sorted(extra)}")
    assert same_up_to_equivalence(got, [q(x) for x in EXPECTED_STRENGTHENING])


@pytest.mark.acceptance(4, "frontier goldens, weakening half")
def test_criterion_4_weakening(request):
    got = weaken_path(q("F(A & X B)")).members
    note(request, f"{len(got)} members")
    assert same_up_to_equivalence(got, [q("F F B"), q("F A"), q("F(A & F B)")])


@pytest.mark.acceptance(5, "product-graph running example")
def test_criterion_5(request):
    from ltlsep.sepgraphs import INF

    prod = build_product(load("running.txt"))
    root = prod.roots[0]
    assert (root.n, root.m) == ((0, 0), (0, 0, INF))
    succ = {(v.n, v.m) for v in prod.succ[root]}
    assert succ == {((1, 2), (INF, 1, INF)), ((2, 1), (1, 1, INF)), ((1, 1), (1, INF, INF)), ((2, 2), (INF,) * 3)}
    assert texts(p.query for p in separating_paths(prod)) == {"A & F B", "A & F(C & F B)"}
    assert same(unique_mss(prod), q("A & F(C & F B)"))
    longest = extremal_length(prod, Extremum.LONGEST)
    shortest = extremal_length(prod, Extremum.SHORTEST)
    assert same(longest, q("A & F(C & F B)")) and longest.tdp == 2
    assert shortest.tdp == 1


def random_cnf(rng):
    n = rng.randint(1, 4)
    clauses = []
    for _ in range(rng.randint(1, 4)):
        vs = rng.sample(range(1, n + 1), rng.randint(1, n))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


@pytest.mark.acceptance(6, "separator count equals satisfying assignments")
def test_criterion_6(request):
    t = time.perf_counter()
    rng = random.Random(6)
    mismatches = 0
    for _ in range(50):
        phi = random_cnf(rng)
        want = count_sat(phi)
        for merge in (False, True):
            seps = enumerate_separators(cnf_examples(phi, merge), QP_ND)
            shaped = all(not s.rho0 and len(s.steps) == 1 and s.steps[0][0] is EVENTUALLY for s in seps)
            if len(seps) != want or not shaped:
                mismatches += 1
    elapsed = time.perf_counter() - t
    note(request, f"100 gadget sets, {mismatches} mismatches, {elapsed:.1f}s")
    assert mismatches == 0 and elapsed < 30


# ---------------------------------------------------------------------------
# frontier completeness over exhaustive universes


@lru_cache(maxsize=None)
def path_universe(sig, depth, cls):
    return tuple(enumerate_paths(sig, depth, cls))


def strictly(a, b) -> bool:
    return contains(a, b) and not contains(b, a)


def frontier_violations(anchor, members, universe, direction):
    bad = 0
    for m in members:
        if not (strictly(m, anchor) if direction is Direction.STRENGTHEN else strictly(anchor, m)):
            bad += 1
    for u in universe:
        if direction is Direction.STRENGTHEN:
            if strictly(u, anchor) and not any(contains(u, m) for m in members):
                bad += 1
        elif strictly(anchor, u) and not any(contains(m, u) for m in members):
            bad += 1
    return bad


def random_diamond(rng, sig):
    conj = [random_path(rng, sig, 2, allow_next=False) for _ in range(rng.randint(1, 2))]
    conj = [PathQuery(frozenset(), c.steps) for c in conj if c.steps]
    rho = frozenset(a for a in sig if rng.random() < 0.3)
    return normalize(DiamondQuery(rho, tuple(conj)))


def diamond_universe(anchor):
    sig = "".join(sorted(anchor.sig))
    depth = max((c.tdp for c in anchor.conjuncts), default=0)
    paths = list(enumerate_diamond_paths(sig, depth)) if sig and depth else []
    for rho in subsets(anchor.rho):
        for k in range(3):
            for combo in itertools.combinations(paths, k):
                yield normalize(DiamondQuery(rho, combo))


CASES = [
    (QP_ND, Direction.STRENGTHEN),
    (QP_ND, Direction.WEAKEN),
    (QP_D, Direction.STRENGTHEN),
    (QP_D, Direction.WEAKEN),
    (Q_IN, Direction.STRENGTHEN),
    (Q_IN, Direction.WEAKEN),
    (Q_D, Direction.WEAKEN),
]


@pytest.mark.acceptance(7, "frontier soundness and betweenness")
@pytest.mark.parametrize("cls,direction", CASES, ids=[f"{c.value}-{d.value}" for c, d in CASES])
def test_criterion_7(request, cls, direction):
    rng = random.Random(7)
    bound = 3
    violations = 0
    for _ in range(200):
        sig = "ABC"[: rng.randint(1, 3)]
        if cls is Q_D:
            anchor = random_diamond(rng, sig)
            members = weaken_diamond(anchor).members
            universe = diamond_universe(anchor)
        elif cls is Q_IN:
            anchor = random_interval(rng, sig, bound)
            if direction is Direction.STRENGTHEN:
                members = interval_frontier(anchor, sig, direction, bound).members
                universe = path_universe(sig, bound, Q_IN)
            else:
                members = interval_frontier(anchor, sig, direction).members
                small = "".join(sorted(anchor.sig))
                universe = path_universe(small, anchor.tdp, Q_IN)
        else:
            allow_next = cls is QP_ND
            anchor = random_path(rng, sig, bound, allow_next)
            if direction is Direction.STRENGTHEN:
                members = [m for m in strengthen_path(anchor, sig, allow_next).members if m.tdp <= bound]
                universe = path_universe(sig, bound, cls)
            else:
                members = weaken_path(anchor, allow_next).members
                small = "".join(sorted(anchor.sig)) or "A"
                universe = path_universe(small, anchor.tdp, cls)
        violations += frontier_violations(anchor, members, universe, direction)
    note(request, f"{cls.value}/{direction.value}: 200 anchors, {violations} violations")
    assert violations == 0


@pytest.mark.acceptance(8, "graph algorithms agree with the oracle")
def test_criterion_8(request):
    t = time.perf_counter()
    rng = random.Random(8)
    violations = []
    for k in range(200):
        E = random_example_set(rng, max_pos=3, max_neg=3, max_len=4, max_sig=3)
        for cls, mode in ((QP_D, Mode.DIAMOND), (QP_ND, Mode.NEXT_DIAMOND)):
            seps = enumerate_separators(E, cls)
            prod = build_product(E, mode)
            path = separating_path(prod)
            if (path is None) != (not seps) or (path is not None and not separates(path.query, E)):
                violations.append((k, mode.value, "existence"))
            if seps:
                for kind, pick in ((Extremum.SHORTEST, min), (Extremum.LONGEST, max)):
                    got = extremal_length(prod, kind)
                    if got is None or got.tdp != pick(s.tdp for s in seps) or not separates(got, E):
                        violations.append((k, mode.value, kind.value))
            if not same(unique_mss(prod), unique_extremal(E, cls, "mss")):
                violations.append((k, mode.value, "unique mss"))
        if not same(unique_mgs_pdiamond(E), unique_extremal(E, QP_D, "mgs")):
            violations.append((k, "diamond path", "unique mgs"))
        if not same(unique_mgs_qdiamond(E), unique_extremal(E, Q_D, "mgs")):
            violations.append((k, "diamond conjunction", "unique mgs"))
        if (interval_exists(E) is not None) != bool(enumerate_separators(E, Q_IN)):
            violations.append((k, "interval", "existence"))
    elapsed = time.perf_counter() - t
    note(request, f"200 sets, {len(violations)} violations, {elapsed:.1f}s")
    assert not violations, violations[:5]
    assert elapsed < 120


def padded_model(p: PathQuery, gap: int):
    """Canonical instance of p with every eventually step stretched to ``gap``; positions of p."""
    word, where = [p.rhos[0]], [0]
    for op, rho in p.steps:
        if op is EVENTUALLY:
            word.extend([frozenset()] * (gap - 1))
        word.append(rho)
        where.append(len(word) - 1)
    return DataInstance(tuple(word)), where


def replay(a: PathQuery, b: PathQuery, h) -> bool:
    D, where = padded_model(a, b.tdp + 1)
    if h[0] != 0 or not holds(D, b):
        return False
    for i, (op, _) in enumerate(b.steps):
        x, y = where[h[i]], where[h[i + 1]]
        if op is NEXT and y != x + 1:
            return False
        if op is EVENTUALLY and y <= x:
            return False
    return all(
        holds_at(D, where[h[i]], PathQuery.build(b.rhos[i:], b.ops[i:])) for i in range(len(b.rhos))
    )


@pytest.mark.acceptance(9, "containment agrees with bounded refutation")
def test_criterion_9(request):
    rng = random.Random(9)
    violations = 0
    witnessed = 0
    for _ in range(500):
        sig = "AB"[: rng.randint(1, 2)]
        a, b = random_path(rng, sig, 3), random_path(rng, sig, 3)
        if rng.random() < 0.3:
            a = rng.choice(strengthen_path(b, sig).members or (b,))
        h = path_contains(a, b)
        refuted = bounded_refute(a, b, set(sig), a.tdp + b.tdp + 2) is not None
        if (h is not None) == refuted:
            violations += 1
        if h is not None:
            witnessed += 1
            if not replay(a, b, tuple(h)):
                violations += 1
    note(request, f"500 pairs, {witnessed} contained, {violations} violations")
    assert violations == 0
