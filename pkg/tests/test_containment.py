import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ltlsep.containment import (
    bounded_refute,
    contains,
    diamond_contains,
    equivalent,
    minimal_models,
    path_contains,
)
from ltlsep.evaluation import holds, normalize
from ltlsep.model import (
    BudgetExceeded,
    DataInstance,
    PathQuery,
    QueryClass,
    parse_diamond,
    parse_path,
    parse_query,
)
from support import q, random_path

ALTERNATING = [
    "F(a & X(a & b & X a))",
    "F(b & X(a & b & X b))",
    "F(a & X(a & b & X b))",
    "F(a & F(b & F(a & F(b & F(a & F b)))))",
]
ALTERNATING_TARGET = "F(b & F(a & b & F a))"


def test_witness_for_interval_suffix():
    h = path_contains(q("F(A & X(B & X C))"), q("F(B & X C)"))
    assert tuple(h) == (0, 2, 3)


def test_reflexive_identity_witness():
    p = q("A & F(B & X C)")
    assert tuple(path_contains(p, p)) == (0, 1, 2)


def test_eventually_does_not_imply_next():
    assert path_contains(q("F A"), q("X A")) is None
    assert path_contains(q("X A"), q("F A")) is not None


def test_non_normal_input_rejected():
    with pytest.raises(ValueError):
        path_contains(PathQuery.build([frozenset({"A"}), frozenset()], list(parse_path("X A").ops)), q("A"))


def test_refutation_goldens():
    assert str(bounded_refute(q("F A"), q("X A"), {"A"}, 3)) == "{} {} {A}"
    assert bounded_refute(q("F(A & X B)"), q("F(A & X B)"), {"A", "B"}, 6) is None


@pytest.mark.parametrize("text", ALTERNATING)
def test_alternating_chains_do_not_imply_target(text):
    a, b = q(text), q(ALTERNATING_TARGET)
    assert path_contains(a, b) is None
    D = bounded_refute(a, b, {"a", "b"}, 8)
    assert D is not None and holds(D, a) and not holds(D, b)


def test_longest_chain_counter_instance():
    D = bounded_refute(q(ALTERNATING[3]), q(ALTERNATING_TARGET), {"a", "b"}, 8)
    assert str(D) == "{} {a} {b} {a} {b} {a} {b}"


def test_diamond_containment():
    assert diamond_contains(parse_diamond("F A & F B"), parse_diamond("F A"))
    assert not diamond_contains(parse_diamond("F A"), parse_diamond("F A & F B"))
    assert diamond_contains(parse_diamond("A & B & F(A & B)"), parse_diamond("B & F A"))
    # the atom set at time 0 is absorbed into each conjunct
    assert diamond_contains(parse_diamond("A & F B"), parse_diamond("F B"))
    assert not diamond_contains(parse_diamond("F(A & F B)"), parse_diamond("F(B & F A)"))


def test_equivalence():
    assert equivalent(parse_query("F X A"), parse_query("X F A"), QueryClass.QP_ND)
    assert equivalent(parse_query("X F A"), parse_query("F F A"), QueryClass.QP_ND)
    assert not equivalent(parse_query("F A"), parse_query("F B"), QueryClass.QP_D)
    with pytest.raises(ValueError):
        equivalent(parse_query("X A & F B"), parse_query("X A"), QueryClass.Q_ND)


def test_general_formulas_rejected():
    with pytest.raises(ValueError):
        contains(parse_query("X A & F B"), parse_query("F B"))


def test_minimal_models_cover_all_gap_choices():
    models = {str(D) for D in minimal_models(q("A & F B"), 3)}
    assert models == {"{A} {B}", "{A} {} {B}"}


def test_budget_for_branching_queries():
    with pytest.raises(BudgetExceeded):
        bounded_refute(parse_diamond("F A & F B"), parse_diamond("F A"), {"A", "B", "C"}, 8)


seeds = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_transitivity(seed):
    rng = random.Random(seed)
    a, b, c = (random_path(rng, "AB", 3) for _ in range(3))
    if path_contains(a, b) is not None and path_contains(b, c) is not None:
        assert path_contains(a, c) is not None


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_normalize_is_equivalent(seed):
    rng = random.Random(seed)
    rhos = [frozenset(x for x in "AB" if rng.random() < 0.3) for _ in range(rng.randint(1, 4))]
    ops = [rng.choice(parse_path("X F A").ops) for _ in range(len(rhos) - 1)]
    p = PathQuery.build(rhos, ops)
    n = normalize(p)
    assert bounded_refute(p, n, {"A", "B"}, p.tdp + 3) is None
    assert bounded_refute(n, p, {"A", "B"}, p.tdp + 3) is None


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_single_conjunct_decomposition(seed):
    rng = random.Random(seed)
    conj = tuple(PathQuery(frozenset(), random_path(rng, "AB", 2, allow_next=False).steps or parse_path("F A").steps)
                 for _ in range(rng.randint(1, 2)))
    from ltlsep.model import DiamondQuery

    big = normalize(DiamondQuery(frozenset(x for x in "AB" if rng.random() < 0.3), conj))
    target = normalize(DiamondQuery(frozenset(), (PathQuery(frozenset(), random_path(rng, "AB", 2, allow_next=False).steps or parse_path("F B").steps),)))
    decided = diamond_contains(big, target)
    refuted = bounded_refute(big, target, {"A", "B"}, 5) is not None
    assert decided != refuted
