"""Domain types, parsing and canonical rendering.

Queries come in three shapes:

* ``PathQuery``: rho0 followed by a chain of (operator, atom set) steps.
* ``DiamondQuery``: an atom set conjoined with eventually-only path conjuncts.
* ``Formula``: the general parse tree (a conjunction of atoms and nested
  next/eventually subformulas).

Atom sets are plain ``frozenset`` objects of atom names; the empty set is
the trivially true conjunction.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
RESERVED = frozenset({"T", "X", "F"})

AtomSet = frozenset


class ParseError(ValueError):
    """Raised for malformed query, instance or example-set text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """An enumeration or graph construction would exceed its configured cap."""


class Op(enum.Enum):
    NEXT = "X"
    EVENTUALLY = "F"

    def __repr__(self):
        return f"Op.{self.name}"


NEXT = Op.NEXT
EVENTUALLY = Op.EVENTUALLY


class QueryClass(enum.Enum):
    QP_ND = "qpnd"
    QP_D = "qpd"
    Q_D = "qd"
    Q_IN = "qin"
    Q_ND = "qnd"

    @classmethod
    def parse(cls, name: str) -> "QueryClass":
        for member in cls:
            if member.value == name.lower():
                return member
        raise ValueError(f"unknown query class {name!r}")


PATH_CLASSES = (QueryClass.QP_ND, QueryClass.QP_D, QueryClass.Q_IN)


def check_atom(name: str) -> str:
    if not ATOM_RE.fullmatch(name):
        raise ParseError(f"invalid atom name {name!r}")
    if name in RESERVED:
        raise ParseError(f"reserved word {name!r} used as an atom")
    return name


def atoms(*names) -> frozenset:
    """Convenience constructor: ``atoms("A", "B")`` or ``atoms("A B")``."""
    out = []
    for n in names:
        out.extend(n.replace(",", " ").split())
    return frozenset(check_atom(a) for a in out)


def sorted_atoms(s: Iterable[str]) -> list:
    return sorted(s)


class Signature(tuple):
    """Duplicate-free, lexicographically ordered tuple of atoms."""

    def __new__(cls, names: Iterable[str] = ()):
        return super().__new__(cls, sorted(set(check_atom(a) for a in names)))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        return cls(a for a in text.replace(",", " ").split())


# ---------------------------------------------------------------------------
# queries


@dataclass(frozen=True)
class PathQuery:
    """rho0 & o1(rho1 & o2(... & on rhon))."""

    rho0: frozenset = frozenset()
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rho0", frozenset(self.rho0))
        object.__setattr__(
            self, "steps", tuple((Op(o), frozenset(r)) for o, r in self.steps)
        )

    @classmethod
    def build(cls, rhos: Sequence, ops: Sequence) -> "PathQuery":
        if len(rhos) != len(ops) + 1:
            raise ValueError("need exactly one more atom set than operators")
        return cls(rhos[0], tuple(zip(ops, rhos[1:])))

    @property
    def rhos(self) -> tuple:
        return (self.rho0,) + tuple(r for _, r in self.steps)

    @property
    def ops(self) -> tuple:
        return tuple(o for o, _ in self.steps)

    @property
    def tdp(self) -> int:
        return len(self.steps)

    @property
    def sig(self) -> frozenset:
        return frozenset().union(*self.rhos)

    def is_normal(self) -> bool:
        rhos, ops = self.rhos, self.ops
        n = len(ops)
        if n and not rhos[n]:
            return False
        for i in range(1, n):
            if not rhos[i] and ops[i - 1] != ops[i]:
                return False
        return True

    def uses_next(self) -> bool:
        return NEXT in self.ops

    def __str__(self):
        return canonical_text(self)


@dataclass(frozen=True)
class DiamondQuery:
    """rho & q1 & ... & qn with every qi an eventually-only path starting with F."""

    rho: frozenset = frozenset()
    conjuncts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rho", frozenset(self.rho))
        object.__setattr__(self, "conjuncts", tuple(self.conjuncts))
        for q in self.conjuncts:
            if not isinstance(q, PathQuery):
                raise TypeError("conjuncts must be PathQuery objects")
            if q.rho0 or not q.steps or q.uses_next():
                raise ValueError(f"conjunct {q} must be an eventually-path with empty rho0")

    @property
    def tdp(self) -> int:
        return max((q.tdp for q in self.conjuncts), default=0)

    @property
    def sig(self) -> frozenset:
        return self.rho.union(*(q.sig for q in self.conjuncts))

    def __str__(self):
        return canonical_text(self)


@dataclass(frozen=True)
class Formula:
    """General parse tree: rho & o1 c1 & o2 c2 & ...  (children are (Op, Formula))."""

    rho: frozenset = frozenset()
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rho", frozenset(self.rho))
        object.__setattr__(self, "children", tuple((Op(o), c) for o, c in self.children))

    @property
    def tdp(self) -> int:
        return max((1 + c.tdp for _, c in self.children), default=0)

    @property
    def sig(self) -> frozenset:
        return self.rho.union(*(c.sig for _, c in self.children))

    def uses_next(self) -> bool:
        return any(o is NEXT or c.uses_next() for o, c in self.children)

    def is_path(self) -> bool:
        return len(self.children) <= 1 and all(c.is_path() for _, c in self.children)

    def __str__(self):
        return canonical_text(self)


TOP = PathQuery()


def to_formula(q) -> Formula:
    if isinstance(q, Formula):
        return q
    if isinstance(q, PathQuery):
        rhos, ops = q.rhos, q.ops
        node = Formula(rhos[-1])
        for i in range(len(ops) - 1, -1, -1):
            node = Formula(rhos[i], ((ops[i], node),))
        return node
    if isinstance(q, DiamondQuery):
        kids = tuple(to_formula(c).children[0] for c in q.conjuncts)
        return Formula(q.rho, kids)
    raise TypeError(f"not a query: {q!r}")


def to_path(q) -> PathQuery:
    """Convert a path-shaped query to a PathQuery (raises ValueError otherwise)."""
    if isinstance(q, PathQuery):
        return q
    if isinstance(q, DiamondQuery):
        if len(q.conjuncts) > 1:
            raise ValueError("conjunction of several paths is not a path query")
        if not q.conjuncts:
            return PathQuery(q.rho)
        c = q.conjuncts[0]
        return PathQuery(q.rho, c.steps)
    if isinstance(q, Formula):
        if not q.is_path():
            raise ValueError(f"{q} is not a path query")
        steps = []
        node = q
        while node.children:
            op, node = node.children[0]
            steps.append((op, node.rho))
        return PathQuery(q.rho, tuple(steps))
    raise TypeError(f"not a query: {q!r}")


def to_diamond(q) -> DiamondQuery:
    """Flatten an eventually-only query into rho & (root-to-leaf paths).

    The flattening is sound because the set of positions satisfying an
    eventually-formula is downward closed, so a branching node can be split
    into one path per leaf.  Trailing trivially-true steps are kept here;
    ``normalize`` removes them.
    """
    if isinstance(q, DiamondQuery):
        return q
    f = to_formula(q)
    if f.uses_next():
        raise ValueError(f"{f} uses the next operator")

    def paths(node: Formula):
        if not node.children:
            yield ((EVENTUALLY, node.rho),)
            return
        for _, child in node.children:
            for tail in paths(child):
                yield ((EVENTUALLY, node.rho),) + tail

    conj = []
    for _, child in f.children:
        for p in paths(child):
            conj.append(PathQuery(frozenset(), p))
    return DiamondQuery(f.rho, tuple(conj))


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<atom>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[&()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("atom") if m.group("atom") else m.start("sym")
        toks.append((m.group("atom") or m.group("sym"), start))
        pos = m.end()
    toks.append(("<end>", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def query(self) -> Formula:
        rho, kids = set(), []
        self.term(rho, kids)
        while self.peek()[0] == "&":
            self.take()
            self.term(rho, kids)
        return Formula(frozenset(rho), tuple(kids))

    def term(self, rho: set, kids: list):
        tok, pos = self.take()
        if tok == "T":
            return
        if tok in ("X", "F"):
            sub_rho, sub_kids = set(), []
            self.term(sub_rho, sub_kids)
            kids.append((Op(tok), Formula(frozenset(sub_rho), tuple(sub_kids))))
            return
        if tok == "(":
            inner = self.query()
            if self.peek()[0] != ")":
                raise ParseError("expected ')'", self.peek()[1])
            self.take()
            rho.update(inner.rho)
            kids.extend(inner.children)
            return
        if tok in ("&", ")", "<end>"):
            raise ParseError(f"unexpected {tok!r}", pos)
        rho.add(tok)


def parse_query(text: str) -> Formula:
    """Parse query text into a ``Formula`` tree.

    Grammar: ``query = term {"&" term}``;
    ``term = ATOM | "T" | "X" term | "F" term | "(" query ")"``.
    """
    p = _Parser(text)
    f = p.query()
    tok, pos = p.peek()
    if tok != "<end>":
        raise ParseError(f"unexpected {tok!r}", pos)
    return f


def parse_path(text: str) -> PathQuery:
    return to_path(parse_query(text))


def parse_diamond(text: str) -> DiamondQuery:
    return to_diamond(parse_query(text))


# ---------------------------------------------------------------------------
# canonical text


def _conj(parts: list) -> str:
    return " & ".join(parts) if parts else "T"


def _term(op: Op, body: str, conj: bool) -> str:
    if conj:
        return f"{op.value}({body})"
    return f"{op.value} {body}"


def _render_tree(f: Formula) -> tuple:
    """Return (text, is_top_level_conjunction)."""
    parts = sorted_atoms(f.rho)
    kid_texts = []
    for op, child in f.children:
        body, conj = _render_tree(child)
        kid_texts.append(_term(op, body, conj))
    parts.extend(sorted(kid_texts))
    return _conj(parts), len(parts) > 1


def _render_path(rhos, ops) -> tuple:
    parts = sorted_atoms(rhos[0])
    if ops:
        body, conj = _render_path(rhos[1:], ops[1:])
        parts.append(_term(ops[0], body, conj))
    return _conj(parts), len(parts) > 1


def canonical_text(q) -> str:
    """Deterministic rendering; atoms are sorted inside each conjunction."""
    if isinstance(q, PathQuery):
        return _render_path(q.rhos, q.ops)[0]
    if isinstance(q, DiamondQuery):
        parts = sorted_atoms(q.rho)
        parts.extend(sorted(_render_path(c.rhos, c.ops)[0] for c in q.conjuncts))
        return _conj(parts)
    if isinstance(q, Formula):
        return _render_tree(q)[0]
    raise TypeError(f"not a query: {q!r}")


def classify(q) -> set:
    """All syntactic classes the (parsed) query belongs to."""
    f = to_formula(q)
    out = {QueryClass.Q_ND}
    if not f.uses_next():
        out.add(QueryClass.Q_D)
    if f.is_path():
        p = to_path(f)
        out.add(QueryClass.QP_ND)
        if not p.uses_next():
            out.add(QueryClass.QP_D)
        if is_interval(p):
            out.add(QueryClass.Q_IN)
    return out


def is_interval(p: PathQuery) -> bool:
    ops = p.ops
    return (
        bool(ops)
        and not p.rho0
        and bool(p.steps[0][1])
        and ops[0] is EVENTUALLY
        and all(o is NEXT for o in ops[1:])
    )


# ---------------------------------------------------------------------------
# data


def _parse_atom_set(token: str, pos: int | None = None) -> frozenset:
    if not (token.startswith("{") and token.endswith("}")):
        raise ParseError(f"malformed atom set {token!r}", pos)
    inner = token[1:-1].replace(",", " ").split()
    try:
        return frozenset(check_atom(a) for a in inner)
    except ParseError as exc:
        raise ParseError(f"malformed atom set {token!r}: {exc}", pos) from None


def format_atom_set(s) -> str:
    return "{" + ",".join(sorted_atoms(s)) + "}"


@dataclass(frozen=True)
class DataInstance:
    """A finite word delta_0 ... delta_max of atom sets."""

    word: tuple

    def __post_init__(self):
        word = tuple(frozenset(d) for d in self.word)
        if not word:
            raise ValueError("a data instance needs at least one timestamp")
        object.__setattr__(self, "word", word)

    @classmethod
    def parse(cls, line: str) -> "DataInstance":
        tokens = re.findall(r"\{[^{}]*\}|\S+", line)
        if not tokens:
            raise ParseError("empty instance line")
        return cls(tuple(_parse_atom_set(t) for t in tokens))

    @classmethod
    def from_facts(cls, facts: Iterable, length: int | None = None) -> "DataInstance":
        """Build from (atom, timestamp) pairs, e.g. ``[("A", 0), ("B", 2)]``."""
        facts = list(facts)
        top = max((t for _, t in facts), default=0)
        n = max(top + 1, length or 0)
        word = [set() for _ in range(n)]
        for a, t in facts:
            word[t].add(check_atom(a))
        return cls(tuple(word))

    @property
    def max_time(self) -> int:
        return len(self.word) - 1

    def __len__(self):
        return len(self.word)

    def at(self, t: int) -> frozenset:
        if 0 <= t < len(self.word):
            return self.word[t]
        return frozenset()

    @property
    def sig(self) -> frozenset:
        return frozenset().union(*self.word)

    def __str__(self):
        return " ".join(format_atom_set(d) for d in self.word)


@dataclass(frozen=True)
class ExampleSet:
    positives: tuple
    negatives: tuple = field(default=())

    def __post_init__(self):
        pos = tuple(self.positives)
        if not pos:
            raise ValueError("an example set needs at least one positive instance")
        object.__setattr__(self, "positives", pos)
        object.__setattr__(self, "negatives", tuple(self.negatives))

    @property
    def depth_bound(self) -> int:
        return min(d.max_time for d in self.positives)

    @property
    def sig_bound(self) -> frozenset:
        return frozenset.intersection(*(d.sig for d in self.positives))

    @property
    def sig(self) -> frozenset:
        """Atoms occurring in the positive examples."""
        return frozenset().union(*(d.sig for d in self.positives))

    def __str__(self):
        lines = ["positive:"]
        lines += [str(d) for d in self.positives]
        lines.append("negative:")
        lines += [str(d) for d in self.negatives]
        return "\n".join(lines) + "\n"


def parse_instances(text: str) -> list:
    """One instance per line; positive:/negative: headers are skipped."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line and line.lower() not in ("positive:", "negative:"):
            out.append(DataInstance.parse(line))
    return out


def parse_example_set(text: str) -> ExampleSet:
    section = None
    pos, neg = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("positive:", "negative:"):
            section = low[:-1]
            continue
        if section is None:
            raise ParseError(f"line {lineno}: instance outside a positive:/negative: section")
        try:
            inst = DataInstance.parse(line)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        (pos if section == "positive" else neg).append(inst)
    if not pos:
        raise ParseError("example set has no positive instances")
    return ExampleSet(tuple(pos), tuple(neg))
