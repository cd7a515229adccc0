"""Product graphs over example sets.

``build_product`` pairs timestamp vectors of the positives with the
earliest matching timestamps in each negative.  Paths from a root read off
path queries true on every positive; a path ending where every negative
coordinate is exhausted (``INF``) reads off a separator.

``build_order_graph`` is the variant used for most general separators: a
node is a combined vector of positive and negative coordinates, and an edge
records every atom set that moves all coordinates greedily to that vector.
"""
from __future__ import annotations

import enum
import itertools
import math
from collections import deque
from dataclasses import dataclass

from .evaluation import normalize
from .model import (
    EVENTUALLY,
    NEXT,
    BudgetExceeded,
    DataInstance,
    ExampleSet,
    TOP,
    PathQuery,
    canonical_text,
    format_atom_set,
)

INF = math.inf
DEFAULT_NODE_CAP = 200_000


class Mode(enum.Enum):
    DIAMOND = "diamond"
    NEXT_DIAMOND = "next-diamond"


class Extremum(enum.Enum):
    SHORTEST = "shortest"
    LONGEST = "longest"


def _fmt_coord(x) -> str:
    return "inf" if x == INF else str(x)


def _fmt_vec(n, m) -> str:
    return "(" + ",".join(map(_fmt_coord, n)) + ";" + ",".join(map(_fmt_coord, m)) + ")"


def _fits(D: DataInstance, x: int, window) -> bool:
    if x + len(window) - 1 > D.max_time:
        return False
    return all(rho <= D.at(x + k) for k, rho in enumerate(window))


def _window_query(windows, raw: bool = False) -> PathQuery:
    """rho-vector windows joined by F, consecutive entries of a window by X."""
    rhos, ops = list(windows[0]), [NEXT] * (len(windows[0]) - 1)
    for w in windows[1:]:
        rhos.extend(w)
        ops.append(EVENTUALLY)
        ops.extend([NEXT] * (len(w) - 1))
    q = PathQuery.build(rhos, ops)
    return q if raw else normalize(q)


# ---------------------------------------------------------------------------
# positive x negative product


@dataclass(frozen=True, order=True)
class ProdNode:
    n: tuple
    t: int
    m: tuple

    def coords(self) -> str:
        return _fmt_vec(self.n, self.m)


@dataclass(frozen=True)
class SepPath:
    nodes: tuple
    query: PathQuery

    @property
    def depth(self) -> int:
        return sum(v.t for v in self.nodes) + len(self.nodes) - 1


class ProductGraph:
    def __init__(self, E: ExampleSet, mode: Mode, nodes, roots, succ, windows):
        self.E = E
        self.mode = mode
        self.nodes = nodes
        self.index = {v: i for i, v in enumerate(nodes)}
        self.roots = roots
        self.succ = succ
        self.windows = windows
        self.pred = {v: [] for v in nodes}
        for v in nodes:
            for w in succ[v]:
                self.pred[w].append(v)

    def is_separating(self, v: ProdNode) -> bool:
        if not all(x == INF for x in v.m):
            return False
        if self.windows[v][-1]:
            return True
        # with no negatives the trivially true query separates
        return not self.E.negatives and v.t == 0 and v in self.roots

    def separating_nodes(self) -> list:
        return [v for v in self.nodes if self.is_separating(v)]

    def topological(self) -> list:
        # every edge strictly increases each positive coordinate
        return sorted(self.nodes, key=lambda v: (sum(v.n), self.index[v]))

    def path_query(self, path) -> PathQuery:
        return _window_query([self.windows[v] for v in path])

    def edges(self):
        for v in self.nodes:
            for w in self.succ[v]:
                yield v, w

    def dump(self) -> str:
        lines = []
        for i, v in enumerate(self.nodes):
            label = ";".join(format_atom_set(r) for r in self.windows[v])
            extra = f" t={v.t}" if self.mode is Mode.NEXT_DIAMOND else ""
            root = " root" if v in self.roots else ""
            sep = " separating" if self.is_separating(v) else ""
            lines.append(f"node {i} coords={v.coords()}{extra} label={label}{root}{sep}")
        for v, w in self.edges():
            lines.append(f"edge {self.index[v]} {self.index[w]}")
        return "\n".join(lines) + "\n"


def build_product(E: ExampleSet, mode: Mode = Mode.DIAMOND, node_cap: int = DEFAULT_NODE_CAP) -> ProductGraph:
    pos, neg = E.positives, E.negatives
    max_t = E.depth_bound if mode is Mode.NEXT_DIAMOND else 0

    def label(n, k):
        return frozenset.intersection(*(D.at(x + k) for D, x in zip(pos, n)))

    def window(n, t):
        return tuple(label(n, k) for k in range(t + 1))

    def room(n):
        return min(D.max_time - x for D, x in zip(pos, n)) if mode is Mode.NEXT_DIAMOND else 0

    def successor_m(m, t, w):
        out = []
        for D, x in zip(neg, m):
            if x == INF:
                out.append(INF)
                continue
            nxt = INF
            for y in range(int(x) + t + 1, D.max_time + 1):
                if _fits(D, y, w):
                    nxt = y
                    break
            out.append(nxt)
        return tuple(out)

    windows = {}
    roots = []
    zero = tuple(0 for _ in pos)
    for t in range(max_t + 1):
        w = window(zero, t)
        m = tuple(0 if _fits(D, 0, w) else INF for D in neg)
        v = ProdNode(zero, t, m)
        windows[v] = w
        roots.append(v)

    nodes = list(roots)
    seen = set(roots)
    succ = {}
    queue = deque(roots)
    while queue:
        v = queue.popleft()
        out = []
        ranges = [range(x + v.t + 1, D.max_time + 1) for D, x in zip(pos, v.n)]
        for n2 in itertools.product(*ranges):
            for s in range(room(n2) + 1):
                w = window(n2, s)
                u = ProdNode(tuple(n2), s, successor_m(v.m, v.t, w))
                out.append(u)
                if u not in seen:
                    seen.add(u)
                    windows[u] = w
                    nodes.append(u)
                    queue.append(u)
                    if len(nodes) > node_cap:
                        raise BudgetExceeded(f"product graph exceeds {node_cap} nodes")
        succ[v] = out
    return ProductGraph(E, mode, nodes, roots, succ, windows)


def separating_path(prod: ProductGraph):
    """Some root path ending at a separating node (breadth-first, so a fewest-node one)."""
    parent = {r: None for r in prod.roots}
    queue = deque(prod.roots)
    while queue:
        v = queue.popleft()
        if prod.is_separating(v):
            path = []
            while v is not None:
                path.append(v)
                v = parent[v]
            path.reverse()
            return SepPath(tuple(path), prod.path_query(path))
        for w in prod.succ[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return None


def separating_paths(prod: ProductGraph, limit: int = 100_000) -> list:
    """Every root path ending at a separating node."""
    out = []

    def walk(path):
        v = path[-1]
        if prod.is_separating(v):
            out.append(SepPath(tuple(path), prod.path_query(path)))
            if len(out) > limit:
                raise BudgetExceeded(f"more than {limit} separating paths")
        for w in prod.succ[v]:
            walk(path + [w])

    for r in prod.roots:
        walk([r])
    return out


def extremal_length(prod: ProductGraph, kind: Extremum):
    """A separator of least or greatest temporal depth, or None."""
    better = (lambda a, b: a < b) if kind is Extremum.SHORTEST else (lambda a, b: a > b)
    best = {}
    for r in prod.roots:
        best[r] = (r.t, None)
    for v in prod.topological():
        if v not in best:
            continue
        wv = best[v][0]
        for u in prod.succ[v]:
            cand = wv + u.t + 1
            if u not in best or better(cand, best[u][0]):
                best[u] = (cand, v)
    target = None
    for v in prod.separating_nodes():
        if v in best and (target is None or better(best[v][0], best[target][0])):
            target = v
    if target is None:
        return None
    path = []
    v = target
    while v is not None:
        path.append(v)
        v = best[v][1]
    path.reverse()
    return prod.path_query(path)


# ---------------------------------------------------------------------------
# "c implies the query of every path into a target set"


def _split(window):
    lead = 0
    while lead < len(window) and not window[lead]:
        lead += 1
    if lead == len(window):
        return lead, (), 0
    trail = 0
    while not window[-1 - trail]:
        trail += 1
    return lead, tuple(window[lead:len(window) - trail]), trail


def _block_fits(c: PathQuery, block, y: int) -> bool:
    rhos, ops = c.rhos, c.ops
    if y < 0 or y + len(block) - 1 > len(ops):
        return False
    if any(ops[y + k] is not NEXT for k in range(len(block) - 1)):
        return False
    return all(b <= rhos[y + k] for k, b in enumerate(block))


FAIL = ("fail",)


def _root_state(c: PathQuery, window):
    lead, core, trail = _split(window)
    if not core:
        return (0, len(window) - 1)
    block = tuple(window[: len(window) - trail])
    if not _block_fits(c, block, 0):
        return FAIL
    return (len(block) - 1, trail)


def _step_state(c: PathQuery, state, window):
    if state is FAIL:
        return FAIL
    h, carry = state
    lead, core, trail = _split(window)
    if not core:
        return (h, carry + len(window))
    for y in range(h + carry + 1 + lead, c.tdp + 1):
        if _block_fits(c, core, y):
            return (y + len(core) - 1, trail)
    return FAIL


def _ancestors(prod: ProductGraph, targets) -> set:
    seen = set(targets)
    stack = list(targets)
    while stack:
        v = stack.pop()
        for u in prod.pred[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def implies_all_paths(prod: ProductGraph, c: PathQuery, targets) -> bool:
    """c implies the query of every root path that ends in ``targets``.

    Forward search over (node, placement state); the placement state is the
    leftmost position reached in c plus pending gap, or FAIL once some
    window of the path cannot be placed into c.
    """
    c = normalize(c)
    targets = set(targets)
    allowed = _ancestors(prod, targets)
    seen = set()
    stack = []
    for r in prod.roots:
        if r in allowed:
            st = (r, _root_state(c, prod.windows[r]))
            seen.add(st)
            stack.append(st)
    while stack:
        v, st = stack.pop()
        if st is FAIL and v in targets:
            return False
        for w in prod.succ[v]:
            if w not in allowed:
                continue
            nxt = (w, _step_state(c, st, prod.windows[w]))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def _extend(c: PathQuery, window) -> PathQuery:
    rhos = list(c.rhos) + list(window)
    ops = list(c.ops) + [EVENTUALLY] + [NEXT] * (len(window) - 1)
    return PathQuery.build(rhos, ops)


def mark_nodes(prod: ProductGraph) -> dict:
    """Mark every node with a path query implying all root paths into it, or None.

    Roots carry their own window.  Other nodes try, in predecessor order,
    each marked predecessor's query extended by the node's window and keep
    the first one that passes ``implies_all_paths``.  Marks stay
    unnormalized so that trailing trivially-true positions still count as
    gaps once the mark is extended.
    """
    marks = {}
    for v in prod.topological():
        if v in prod.roots:
            marks[v] = _window_query([prod.windows[v]], raw=True)
            continue
        marks[v] = None
        tried = set()
        for u in prod.pred[v]:
            if marks.get(u) is None:
                continue
            cand = _extend(marks[u], prod.windows[v])
            key = canonical_text(cand)
            if key in tried:
                continue
            tried.add(key)
            if implies_all_paths(prod, cand, {v}):
                marks[v] = cand
                break
    return marks


def unique_mss(prod: ProductGraph):
    """The unique most specific separator of the graph's class, or None.

    Candidates are the marks of separating nodes, then the result of
    strengthening a longest separator as far as possible; a candidate is
    returned when it implies the query of every separating path.
    """
    seps = prod.separating_nodes()
    if not seps:
        return None
    marks = mark_nodes(prod)
    tried = set()
    for v in seps:
        c = marks.get(v)
        if c is None:
            continue
        key = canonical_text(c)
        if key in tried:
            continue
        tried.add(key)
        if implies_all_paths(prod, c, seps):
            return normalize(c)
    # first-dominating marks can pick a too-short gap at nodes labelled T;
    # a unique answer is also the end of every strengthening climb
    from .frontiers import Direction
    from .model import QueryClass
    from .separation import climb

    cls = QueryClass.QP_D if prod.mode is Mode.DIAMOND else QueryClass.QP_ND
    c = climb(extremal_length(prod, Extremum.LONGEST), prod.E, cls, Direction.STRENGTHEN)
    return c if implies_all_paths(prod, c, seps) else None


# ---------------------------------------------------------------------------
# combined-coordinate graph for most general separators


ORDER_ROOT = "root"


@dataclass(frozen=True)
class OEdge:
    """Edge of the combined-coordinate graph.

    ``valid`` lists every atom set that moves all coordinates greedily from
    ``source`` to ``target``; ``rho_min`` is their intersection and the edge
    is a HOOK when ``rho_min`` is itself valid, a SQUIGGLE otherwise.
    """

    source: object
    target: tuple
    valid: tuple
    rho_min: frozenset
    kind: str


class OrderGraph:
    def __init__(self, E: ExampleSet, nodes, edges, label):
        self.E = E
        self.nodes = nodes
        self.index = {v: i for i, v in enumerate(nodes)}
        self.index[ORDER_ROOT] = -1
        self.edges = edges
        self.label = label
        self.c_pos = len(E.positives)

    def is_separating(self, p) -> bool:
        return p != ORDER_ROOT and all(x == INF for x in p[self.c_pos:])

    def out(self, p) -> list:
        return self.edges.get(p, [])

    def dump(self) -> str:
        lines = []
        for i, p in enumerate(self.nodes):
            coords = _fmt_vec(p[: self.c_pos], p[self.c_pos:])
            lines.append(f"node {i} coords={coords} label={format_atom_set(self.label[p])}")
        for src in [ORDER_ROOT] + self.nodes:
            for e in self.out(src):
                lines.append(
                    f"edge {self.index[src]} {self.index[e.target]} "
                    f"rho={format_atom_set(e.rho_min)} kind={e.kind}"
                )
        return "\n".join(lines) + "\n"


def _greedy_next(E: ExampleSet, p, rho):
    out = []
    for D, x in zip(E.positives, p[: len(E.positives)]):
        nxt = next((y for y in range(x + 1, D.max_time + 1) if rho <= D.at(y)), None)
        if nxt is None:
            return None
        out.append(nxt)
    for D, x in zip(E.negatives, p[len(E.positives):]):
        if x == INF:
            out.append(INF)
        else:
            out.append(next((y for y in range(int(x) + 1, D.max_time + 1) if rho <= D.at(y)), INF))
    return tuple(out)


def _greedy_root(E: ExampleSet, rho):
    if not all(rho <= D.at(0) for D in E.positives):
        return None
    return tuple(0 for _ in E.positives) + tuple(0 if rho <= D.at(0) else INF for D in E.negatives)


def _make_edges(src, groups) -> list:
    out = []
    for target in sorted(groups, key=lambda p: tuple(-1 if x == INF else x for x in p)):
        valid = tuple(sorted(groups[target], key=lambda r: (len(r), sorted(r))))
        rho_min = frozenset.intersection(*valid)
        kind = "hook" if rho_min in valid else "squiggle"
        out.append(OEdge(src, target, valid, rho_min, kind))
    return out


def build_order_graph(E: ExampleSet, node_cap: int = DEFAULT_NODE_CAP) -> OrderGraph:
    from .oracle import subsets

    rhos = subsets(E.sig_bound)
    edges = {}
    groups = {}
    for rho in rhos:
        p = _greedy_root(E, rho)
        if p is not None:
            groups.setdefault(p, []).append(rho)
    edges[ORDER_ROOT] = _make_edges(ORDER_ROOT, groups)
    nodes = [e.target for e in edges[ORDER_ROOT]]
    seen = set(nodes)
    queue = deque(nodes)
    while queue:
        p = queue.popleft()
        groups = {}
        for rho in rhos:
            p2 = _greedy_next(E, p, rho)
            if p2 is not None:
                groups.setdefault(p2, []).append(rho)
        edges[p] = _make_edges(p, groups)
        for e in edges[p]:
            if e.target not in seen:
                seen.add(e.target)
                nodes.append(e.target)
                queue.append(e.target)
                if len(nodes) > node_cap:
                    raise BudgetExceeded(f"order graph exceeds {node_cap} nodes")
    c_pos = len(E.positives)
    data = list(E.positives) + list(E.negatives)
    label = {}
    for p in nodes:
        sets = [D.at(int(x)) for D, x in zip(data, p) if x != INF]
        label[p] = frozenset.intersection(*sets) if sets else frozenset(E.sig_bound)
    return OrderGraph(E, nodes, edges, label)


def every_separator_implies(og: OrderGraph, c: PathQuery) -> bool:
    """No separating path of the order graph reads off a query not implying c.

    State: (node, j) where j is the next position of c still to be matched
    greedily, j = 0 meaning the first position already failed.  The path's
    owner picks any valid label on each edge and wins by ending at a
    separating node with a nonempty last label while c is unmatched.
    """
    c = normalize(c)
    if c.uses_next():
        raise ValueError("eventually-only candidate expected")
    crho = c.rhos
    m = c.tdp
    seen = set()
    stack = []

    def push(state):
        if state[1] <= m and state not in seen:
            seen.add(state)
            stack.append(state)

    def moves(e: OEdge, j):
        for rho in e.valid:
            if j == 0:
                yield rho, 0
            elif crho[j] <= rho:
                yield rho, j + 1
            else:
                yield rho, j

    for e in og.out(ORDER_ROOT):
        for rho in e.valid:
            j = 1 if crho[0] <= rho else 0
            if og.is_separating(e.target) and rho and j <= m:
                return False
            push((e.target, j))
    while stack:
        p, j = stack.pop()
        for e in og.out(p):
            for rho, j2 in moves(e, j):
                if og.is_separating(e.target) and rho and j2 <= m:
                    return False
                push((e.target, j2))
    return True


def unique_mgs_pdiamond(E: ExampleSet, node_cap: int = DEFAULT_NODE_CAP):
    """The unique most general eventually-only path separator, or None.

    A candidate is obtained by weakening any separator until no weakening
    separates; it is the answer exactly when every separator implies it.
    """
    from .separation import climb
    from .frontiers import Direction
    from .model import QueryClass

    if not E.negatives:
        return TOP
    sp = separating_path(build_product(E, Mode.DIAMOND, node_cap))
    if sp is None:
        return None
    cand = climb(sp.query, E, QueryClass.QP_D, Direction.WEAKEN)
    og = build_order_graph(E, node_cap)
    return cand if every_separator_implies(og, cand) else None
