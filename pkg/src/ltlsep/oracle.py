"""Brute-force ground truth.

Everything here enumerates queries inside the finite search space fixed by
an example set (depth at most the shortest positive, atoms common to all
positives) and compares them with plain containment checks.  It is slow on
purpose and meant for cross-checking the graph algorithms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .containment import contains, diamond_contains, path_contains
from .evaluation import holds, normalize
from .model import (
    EVENTUALLY,
    NEXT,
    BudgetExceeded,
    DataInstance,
    DiamondQuery,
    ExampleSet,
    ParseError,
    PathQuery,
    QueryClass,
    canonical_text,
)


@dataclass(frozen=True)
class EnumBudget:
    max_sig: int = 8
    max_tdp: int = 6
    max_queries: int = 200_000


DEFAULT_BUDGET = EnumBudget()


def subsets(sig) -> list:
    """All subsets of ``sig``, smallest first, then lexicographic."""
    sig = sorted(sig)
    return [frozenset(c) for r in range(len(sig) + 1) for c in itertools.combinations(sig, r)]


# ---------------------------------------------------------------------------
# plain enumeration of path queries in normal form


def enumerate_paths(sig, max_tdp: int, cls: QueryClass = QueryClass.QP_ND):
    """Every normal-form path query of ``cls`` over ``sig`` with depth <= max_tdp.

    ``cls`` is one of QP_ND, QP_D, Q_IN; for Q_D use ``enumerate_diamond_paths``
    to get the eventually-path building blocks.
    """
    subs = subsets(sig)
    interval = cls is QueryClass.Q_IN
    ops_allowed = (EVENTUALLY,) if cls is QueryClass.QP_D else (NEXT, EVENTUALLY)

    def grow(rhos, ops):
        n = len(ops)
        if interval:
            if n >= 1 and rhos[-1] and rhos[1]:
                yield PathQuery.build(rhos, ops)
        elif n == 0 or rhos[-1]:
            yield PathQuery.build(rhos, ops)
        if n == max_tdp:
            return
        for op in ops_allowed:
            if interval and op is not (EVENTUALLY if n == 0 else NEXT):
                continue
            if n > 0 and not rhos[-1] and op is not ops[-1] and not interval:
                continue
            for rho in subs:
                if interval and n == 0 and not rho:
                    continue
                yield from grow(rhos + [rho], ops + [op])

    starts = [frozenset()] if interval else subs
    for rho0 in starts:
        yield from grow([rho0], [])


def enumerate_diamond_paths(sig, max_tdp: int):
    """Eventually-only path queries with an empty first position and depth >= 1."""
    for q in enumerate_paths(sig, max_tdp, QueryClass.QP_D):
        if not q.rho0 and q.steps:
            yield q


# ---------------------------------------------------------------------------
# separators of path classes


def _advance(D: DataInstance, positions, op, rho):
    if not positions:
        return frozenset()
    hi = D.max_time
    if op is NEXT:
        return frozenset(x + 1 for x in positions if x + 1 <= hi and rho <= D.at(x + 1))
    lo = min(positions)
    return frozenset(y for y in range(lo + 1, hi + 1) if rho <= D.at(y))


def _check_budget(E: ExampleSet, budget: EnumBudget):
    if len(E.sig_bound) > budget.max_sig:
        raise BudgetExceeded(f"common signature has {len(E.sig_bound)} atoms (cap {budget.max_sig})")
    if E.depth_bound > budget.max_tdp:
        raise BudgetExceeded(f"depth bound {E.depth_bound} exceeds cap {budget.max_tdp}")


def _path_separators(E: ExampleSet, cls: QueryClass, budget: EnumBudget, want_separating=True):
    """Depth-first search over normal-form paths, pruned on the positives.

    Yields the queries true on every positive; with ``want_separating`` only
    those also false on every negative.
    """
    _check_budget(E, budget)
    subs = subsets(E.sig_bound)
    pos, neg = list(E.positives), list(E.negatives)
    interval = cls is QueryClass.Q_IN
    ops_allowed = (EVENTUALLY,) if cls is QueryClass.QP_D else (NEXT, EVENTUALLY)
    max_tdp = E.depth_bound
    counter = [0]

    def emit_ok(rhos, ops, ps, ns):
        n = len(ops)
        if interval:
            shape = n >= 1 and rhos[1] and rhos[-1]
        else:
            shape = n == 0 or rhos[-1]
        if not shape:
            return False
        if want_separating and any(ns):
            return False
        return True

    def grow(rhos, ops, ps, ns):
        counter[0] += 1
        if counter[0] > budget.max_queries:
            raise BudgetExceeded(f"more than {budget.max_queries} candidate queries")
        if emit_ok(rhos, ops, ps, ns):
            yield PathQuery.build(rhos, ops)
        n = len(ops)
        if n == max_tdp:
            return
        for op in ops_allowed:
            if interval and op is not (EVENTUALLY if n == 0 else NEXT):
                continue
            if not interval and n > 0 and not rhos[-1] and op is not ops[-1]:
                continue
            for rho in subs:
                if interval and n == 0 and not rho:
                    continue
                ps2 = [_advance(D, s, op, rho) for D, s in zip(pos, ps)]
                if not all(ps2):
                    continue
                ns2 = [_advance(D, s, op, rho) for D, s in zip(neg, ns)]
                yield from grow(rhos + [rho], ops + [op], ps2, ns2)

    starts = [frozenset()] if interval else subs
    for rho0 in starts:
        ps = [frozenset({0}) if rho0 <= D.at(0) else frozenset() for D in pos]
        if not all(ps):
            continue
        ns = [frozenset({0}) if rho0 <= D.at(0) else frozenset() for D in neg]
        yield from grow([rho0], [], ps, ns)


def _dedup_paths(queries) -> list:
    """Dedup by canonical text, then merge any mutually containing pair."""
    by_text = {}
    for q in queries:
        by_text.setdefault(canonical_text(q), q)
    out, buckets = [], {}
    for text in sorted(by_text):
        q = by_text[text]
        bucket = buckets.setdefault(q.rhos, [])
        if any(path_contains(q, r) is not None and path_contains(r, q) is not None for r in bucket):
            continue
        bucket.append(q)
        out.append(q)
    return out


# ---------------------------------------------------------------------------
# eventually-only conjunctions


def _positive_paths(E: ExampleSet, budget: EnumBudget) -> list:
    """Eventually-paths (empty first position) true on every positive."""
    return [
        q
        for q in _path_separators(E, QueryClass.QP_D, budget, want_separating=False)
        if not q.rho0 and q.steps
    ]


def _kill_mask(q, negatives) -> frozenset:
    return frozenset(j for j, D in enumerate(negatives) if not holds(D, q))


def _common_initial(E: ExampleSet) -> frozenset:
    return frozenset.intersection(*(D.at(0) for D in E.positives))


def _antichains(paths, budget: EnumBudget):
    """Sets of pairwise incomparable paths (none implies another)."""
    n = len(paths)
    comparable = [[i != j and (path_contains(paths[i], paths[j]) is not None
                               or path_contains(paths[j], paths[i]) is not None)
                   for j in range(n)] for i in range(n)]
    count = [0]

    def grow(start, chosen):
        count[0] += 1
        if count[0] > budget.max_queries:
            raise BudgetExceeded(f"more than {budget.max_queries} candidate conjunctions")
        yield tuple(paths[i] for i in chosen)
        for i in range(start, n):
            if not any(comparable[i][j] for j in chosen):
                yield from grow(i + 1, chosen + [i])

    yield from grow(0, [])


def _diamond_candidates(E: ExampleSet, budget: EnumBudget):
    sig0 = _common_initial(E)
    chains = list(_antichains(_positive_paths(E, budget), budget))
    if len(chains) * 2 ** len(sig0) > budget.max_queries:
        raise BudgetExceeded("too many candidate conjunctions")
    for rho in subsets(sig0):
        for combo in chains:
            yield DiamondQuery(rho, combo)


def _dedup_diamonds(queries) -> list:
    by_text = {}
    for q in queries:
        q = normalize(q)
        by_text.setdefault(canonical_text(q), q)
    out, buckets = [], {}
    for text in sorted(by_text):
        q = by_text[text]
        key = (q.rho, len(q.conjuncts))
        bucket = buckets.setdefault(key, [])
        if any(diamond_contains(q, r) and diamond_contains(r, q) for r in bucket):
            continue
        bucket.append(q)
        out.append(q)
    return out


def _separates(q, E: ExampleSet) -> bool:
    return all(holds(D, q) for D in E.positives) and not any(holds(D, q) for D in E.negatives)


def diamond_mss(E: ExampleSet, budget: EnumBudget = DEFAULT_BUDGET):
    """The strongest eventually-only conjunction true on all positives, if it separates.

    Within the bounded search space this query implies every separator, so
    it is the unique most specific one whenever it separates.
    """
    q = normalize(DiamondQuery(_common_initial(E), tuple(_positive_paths(E, budget))))
    return q if _separates(q, E) else None


def diamond_mgs_candidates(E: ExampleSet, budget: EnumBudget = DEFAULT_BUDGET) -> list:
    """Separators built from one killer per negative, with dominated killers removed.

    A killer is an atom absent at time 0 of that negative or a positive path
    false on it.  A path is dropped when a strictly weaker positive path kills
    a superset of negatives, since swapping it in never loses separation.
    """
    neg = list(E.negatives)
    if not neg:
        return [DiamondQuery()]
    sig0 = _common_initial(E)
    paths = _positive_paths(E, budget)
    masks = [_kill_mask(q, neg) for q in paths]
    useful = []
    for i, q in enumerate(paths):
        if not masks[i]:
            continue
        dominated = any(
            j != i and masks[j] >= masks[i] and path_contains(q, r) is not None and path_contains(r, q) is None
            for j, r in enumerate(paths)
        )
        if not dominated:
            useful.append((q, masks[i]))
    killers = []
    for j, D in enumerate(neg):
        opts = [("atom", a) for a in sorted(sig0 - D.at(0))]
        opts += [("path", q) for q, m in useful if j in m]
        if not opts:
            return []
        killers.append(opts)
    total = 1
    for opts in killers:
        total *= len(opts)
    if total > budget.max_queries:
        raise BudgetExceeded(f"{total} killer combinations exceed cap {budget.max_queries}")
    seen = set()
    out = []
    for choice in itertools.product(*killers):
        key = frozenset(choice)
        if key in seen:
            continue
        seen.add(key)
        rho = frozenset(x for kind, x in key if kind == "atom")
        conj = tuple(sorted((x for kind, x in key if kind == "path"), key=canonical_text))
        out.append(normalize(DiamondQuery(rho, conj)))
    return _dedup_diamonds(out)


# ---------------------------------------------------------------------------
# public entry points


def enumerate_separators(E: ExampleSet, cls: QueryClass, budget: EnumBudget = DEFAULT_BUDGET) -> list:
    """All separators of ``cls`` modulo equivalence, sorted by canonical text.

    Eventually-only conjunctions are listed as an atom set at time 0 plus a
    set of pairwise incomparable paths true on every positive.
    """
    if cls in (QueryClass.QP_ND, QueryClass.QP_D, QueryClass.Q_IN):
        return _dedup_paths(_path_separators(E, cls, budget))
    if cls is QueryClass.Q_D:
        return _dedup_diamonds(q for q in _diamond_candidates(E, budget) if _separates(q, E))
    raise NotImplementedError(f"no enumeration for class {cls.value}")


def _minimal(items, leq) -> list:
    return [q for q in items if not any(r is not q and leq(r, q) and not leq(q, r) for r in items)]


def extremal_sets(E: ExampleSet, cls: QueryClass, budget: EnumBudget = DEFAULT_BUDGET):
    """(most specific, most general) separators modulo equivalence."""
    if cls is QueryClass.Q_D:
        mss_q = diamond_mss(E, budget)
        mss = [mss_q] if mss_q is not None else []
        cands = diamond_mgs_candidates(E, budget)
        mgs = _minimal(cands, lambda a, b: contains(b, a))
        return mss, sorted(mgs, key=canonical_text)
    seps = enumerate_separators(E, cls, budget)
    mss = _minimal(seps, contains)
    mgs = _minimal(seps, lambda a, b: contains(b, a))
    return mss, mgs


def least_element(items, leq):
    """The element below all others, if any (linear candidate pass plus check)."""
    if not items:
        return None
    cand = items[0]
    for q in items[1:]:
        if leq(q, cand):
            cand = q
    return cand if all(leq(cand, q) for q in items) else None


def unique_extremal(E: ExampleSet, cls: QueryClass, kind: str, budget: EnumBudget = DEFAULT_BUDGET):
    """The unique most specific (``kind='mss'``) or most general separator, or None."""
    if kind not in ("mss", "mgs"):
        raise ValueError("kind must be 'mss' or 'mgs'")
    if cls is QueryClass.Q_D:
        if kind == "mss":
            return diamond_mss(E, budget)
        cands = diamond_mgs_candidates(E, budget)
        return least_element(cands, lambda a, b: contains(b, a))
    seps = enumerate_separators(E, cls, budget)
    if kind == "mss":
        return least_element(seps, contains)
    return least_element(seps, lambda a, b: contains(b, a))


# ---------------------------------------------------------------------------
# CNF gadgets


@dataclass(frozen=True)
class CnfFormula:
    """Clauses over variables 1..num_vars; literal -v is the negation of v."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        cl = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        for c in cl:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")
            if any(-lit in c for lit in c):
                raise ValueError(f"clause {c} mentions a variable with both signs")

    def satisfied_by(self, assignment) -> bool:
        """``assignment[v-1]`` is the truth value of variable v."""
        return all(any((lit > 0) == bool(assignment[abs(lit) - 1]) for lit in c) for c in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad problem line on line {lineno}")
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise ParseError(f"clause before problem line on line {lineno}")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r} on line {lineno}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise ParseError("missing problem line")
    if current:
        clauses.append(tuple(current))
    return CnfFormula(num_vars, tuple(clauses))


def count_sat(phi: CnfFormula) -> int:
    return sum(
        phi.satisfied_by(bits) for bits in itertools.product((False, True), repeat=phi.num_vars)
    )


def pos_atom(i: int) -> str:
    return f"A{i}"


def neg_atom(i: int) -> str:
    return f"NA{i}"


def assignment_query(assignment) -> PathQuery:
    """The query F rho where rho picks A_i or NA_i according to the assignment."""
    rho = frozenset(pos_atom(i) if v else neg_atom(i) for i, v in enumerate(assignment, 1))
    return PathQuery(frozenset(), ((EVENTUALLY, rho),))


def cnf_examples(phi: CnfFormula, merge_negatives: bool = False) -> ExampleSet:
    """Example set whose separators correspond one-to-one to satisfying assignments."""
    n = phi.num_vars
    both = {i: frozenset({pos_atom(i), neg_atom(i)}) for i in range(1, n + 1)}
    every = frozenset().union(*both.values())
    empty = frozenset()
    d0 = DataInstance((empty, every))
    d0p = DataInstance((empty, empty, every))
    positives = [d0, d0p]
    for i in range(1, n + 1):
        rest = every - both[i]
        positives.append(DataInstance((empty, rest | {pos_atom(i)}, rest | {neg_atom(i)})))
    labels = []
    for clause in phi.clauses:
        lab = set()
        for j in range(1, n + 1):
            if -j not in clause:
                lab.add(neg_atom(j))
            if j not in clause:
                lab.add(pos_atom(j))
        labels.append(frozenset(lab))
    for i in range(1, n + 1):
        labels.append(every - both[i])
    if merge_negatives:
        if not labels:
            return ExampleSet(tuple(positives), ())
        word = [empty]
        for k, lab in enumerate(labels):
            if k:
                word += [empty, empty]
            word.append(lab)
        negatives = [DataInstance(tuple(word))]
    else:
        negatives = [DataInstance((empty, lab)) for lab in labels]
    return ExampleSet(tuple(positives), tuple(negatives))
