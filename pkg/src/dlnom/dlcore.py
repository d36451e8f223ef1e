"""Syntax layer: concepts, roles, ontologies, signatures and the closure.

Concepts are immutable trees built from six node kinds (Top, Name, Nominal,
Not, And, Exists).  Disjunction, implication, value restriction and bottom
are rewritten into those kinds by the parser, so every later stage only has
to handle the primitive shapes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Union

UNIVERSAL_NAME = "u"


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class DialectError(ValueError):
    """Raised when input uses a construct the selected dialect does not admit."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


# ---------------------------------------------------------------- roles


@dataclass(frozen=True, order=True)
class Role:
    name: str
    inverted: bool = False

    def __post_init__(self):
        if self.name == UNIVERSAL_NAME and self.inverted:
            # the total relation is its own converse
            object.__setattr__(self, "inverted", False)

    @property
    def is_universal(self) -> bool:
        return self.name == UNIVERSAL_NAME

    def inverse(self) -> "Role":
        if self.is_universal:
            return self
        return Role(self.name, not self.inverted)

    def __str__(self):
        return self.name + ("-" if self.inverted else "")


UNIVERSAL = Role(UNIVERSAL_NAME)


# ---------------------------------------------------------------- concepts


class Concept:
    """Base class of concept nodes; subclasses are frozen dataclasses.

    Nodes hash and compare through their structural ``key``, which is cached,
    so deep concepts are cheap to use as dictionary keys.
    """

    kind_rank = -1

    def children(self) -> tuple:
        return ()

    @cached_property
    def key(self) -> tuple:
        return (self.kind_rank,)

    @cached_property
    def _hash(self) -> int:
        return hash(self.key)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Concept) or self._hash != other._hash:
            return False
        return self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=False)
class Top(Concept):
    kind_rank = 0

    @cached_property
    def key(self):
        return (0,)


@dataclass(frozen=True, eq=False)
class Name(Concept):
    name: str
    kind_rank = 1

    @cached_property
    def key(self):
        return (1, self.name)


@dataclass(frozen=True, eq=False)
class Nominal(Concept):
    individual: str
    kind_rank = 2

    @cached_property
    def key(self):
        return (2, self.individual)


@dataclass(frozen=True, eq=False)
class Not(Concept):
    arg: Concept
    kind_rank = 3

    def children(self):
        return (self.arg,)

    @cached_property
    def key(self):
        return (3, self.arg.key)


@dataclass(frozen=True, eq=False)
class And(Concept):
    left: Concept
    right: Concept
    kind_rank = 4

    def children(self):
        return (self.left, self.right)

    @cached_property
    def key(self):
        return (4, self.left.key, self.right.key)


@dataclass(frozen=True, eq=False)
class Exists(Concept):
    role: Role
    arg: Concept
    kind_rank = 5

    def children(self):
        return (self.arg,)

    @cached_property
    def key(self):
        return (5, (self.role.name, self.role.inverted), self.arg.key)


TOP = Top()


def neg(c: Concept) -> Concept:
    """Single negation with double negations collapsed."""
    if isinstance(c, Not):
        return c.arg
    return Not(c)


def conj(*cs: Concept) -> Concept:
    if not cs:
        return TOP
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = And(c, out)
    return out


def disj(c: Concept, d: Concept) -> Concept:
    return neg(And(neg(c), neg(d)))


def implies(c: Concept, d: Concept) -> Concept:
    return neg(And(c, neg(d)))


def forall(r: Role, c: Concept) -> Concept:
    return neg(Exists(r, neg(c)))


BOTTOM = Not(TOP)


def subconcepts(c: Concept) -> Iterator[Concept]:
    stack = [c]
    seen = set()
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        yield x
        stack.extend(x.children())


def role_depth(c: Concept) -> int:
    if isinstance(c, Exists):
        return 1 + role_depth(c.arg)
    return max((role_depth(x) for x in c.children()), default=0)


def concept_size(c: Concept) -> int:
    return 1 + sum(concept_size(x) for x in c.children())


# ---------------------------------------------------------------- axioms


@dataclass(frozen=True, order=True)
class CI:
    lhs: Concept
    rhs: Concept

    def __str__(self):
        return f"{to_text(self.lhs)} sub {to_text(self.rhs)}"


@dataclass(frozen=True, order=True)
class RI:
    sub: Role
    sup: Role

    def __str__(self):
        return f"{self.sub} sub {self.sup}"


@dataclass(frozen=True)
class Ontology:
    cis: tuple = ()
    ris: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cis", tuple(self.cis))
        object.__setattr__(self, "ris", tuple(self.ris))

    def __or__(self, other: "Ontology") -> "Ontology":
        cis = list(self.cis) + [c for c in other.cis if c not in set(self.cis)]
        ris = list(self.ris) + [r for r in other.ris if r not in set(self.ris)]
        return Ontology(cis, ris)

    def __len__(self):
        return len(self.cis) + len(self.ris)

    def with_axioms(self, cis=(), ris=()) -> "Ontology":
        return Ontology(tuple(self.cis) + tuple(cis), tuple(self.ris) + tuple(ris))

    def concepts(self) -> Iterator[Concept]:
        for ax in self.cis:
            yield ax.lhs
            yield ax.rhs


EMPTY = Ontology()


# ---------------------------------------------------------------- dialects


@dataclass(frozen=True)
class Dialect:
    nominals: bool = True
    role_hierarchy: bool = False
    inverse: bool = False
    universal: bool = False

    def __post_init__(self):
        if not (self.nominals or self.role_hierarchy):
            raise ValueError("a dialect needs nominals or role inclusions")

    @classmethod
    def from_name(cls, name: str, universal: bool = False) -> "Dialect":
        key = name.lower().strip()
        for suffix in ("^u", "+u"):
            if key.endswith(suffix):
                key = key[: -len(suffix)]
                universal = True
        if key not in DIALECT_FLAGS:
            raise ValueError(f"unknown dialect {name!r}")
        nom, hier, inv = DIALECT_FLAGS[key]
        return cls(nom, hier, inv, universal)

    @property
    def name(self) -> str:
        s = "ALC" + ("H" if self.role_hierarchy else "") + ("I" if self.inverse else "")
        s += "O" if self.nominals else ""
        return s + ("^u" if self.universal else "")

    def __str__(self):
        return self.name


DIALECT_FLAGS = {
    "alco": (True, False, False),
    "alch": (False, True, False),
    "alcho": (True, True, False),
    "alcio": (True, False, True),
    "alchio": (True, True, True),
    "alchi": (False, True, True),
}

ALCO = Dialect(True, False, False)
ALCH = Dialect(False, True, False)
ALCHO = Dialect(True, True, False)
ALCIO = Dialect(True, False, True)
ALCHIO = Dialect(True, True, True)
ALCHI = Dialect(False, True, True)


# ---------------------------------------------------------------- signatures


@dataclass(frozen=True)
class Signature:
    concepts: frozenset = frozenset()
    roles: frozenset = frozenset()
    individuals: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "concepts", frozenset(self.concepts))
        object.__setattr__(self, "roles", frozenset(self.roles) - {UNIVERSAL_NAME})
        object.__setattr__(self, "individuals", frozenset(self.individuals))

    def __or__(self, o):
        return Signature(self.concepts | o.concepts, self.roles | o.roles,
                         self.individuals | o.individuals)

    def __and__(self, o):
        return Signature(self.concepts & o.concepts, self.roles & o.roles,
                         self.individuals & o.individuals)

    def __sub__(self, o):
        return Signature(self.concepts - o.concepts, self.roles - o.roles,
                         self.individuals - o.individuals)

    def __le__(self, o):
        return (self.concepts <= o.concepts and self.roles <= o.roles
                and self.individuals <= o.individuals)

    def __bool__(self):
        return bool(self.concepts or self.roles or self.individuals)

    def names(self) -> set:
        return set(self.concepts) | set(self.roles) | set(self.individuals)

    def to_text(self) -> str:
        parts = [f"C:{n}" for n in sorted(self.concepts)]
        parts += [f"R:{n}" for n in sorted(self.roles)]
        parts += [f"I:{n}" for n in sorted(self.individuals)]
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"concepts": sorted(self.concepts), "roles": sorted(self.roles),
                "individuals": sorted(self.individuals)}

    @classmethod
    def parse(cls, text: str) -> "Signature":
        cs, rs, ins = set(), set(), set()
        for tok in text.split():
            kind, _, name = tok.partition(":")
            if not name or not _NAME_RE.fullmatch(name):
                raise ParseError(f"bad signature entry {tok!r}")
            target = {"C": cs, "R": rs, "I": ins}.get(kind)
            if target is None:
                raise ParseError(f"unknown signature prefix in {tok!r}")
            if kind == "R" and name == UNIVERSAL_NAME:
                raise ParseError("the universal role is not a signature symbol")
            target.add(name)
        return cls(cs, rs, ins)

    def __str__(self):
        return "{" + self.to_text() + "}"


Sig = Signature


def signature(*xs) -> Signature:
    """Names occurring in concepts, axioms, ontologies (or tuples of them)."""
    cs, rs, ins = set(), set(), set()

    def visit_role(r: Role):
        if not r.is_universal:
            rs.add(r.name)

    def visit(x):
        if x is None:
            return
        if isinstance(x, Concept):
            for c in subconcepts(x):
                if isinstance(c, Name):
                    cs.add(c.name)
                elif isinstance(c, Nominal):
                    ins.add(c.individual)
                elif isinstance(c, Exists):
                    visit_role(c.role)
        elif isinstance(x, Ontology):
            for ax in x.cis:
                visit(ax)
            for ax in x.ris:
                visit(ax)
        elif isinstance(x, CI):
            visit(x.lhs)
            visit(x.rhs)
        elif isinstance(x, RI):
            visit_role(x.sub)
            visit_role(x.sup)
        elif isinstance(x, Role):
            visit_role(x)
        elif isinstance(x, Signature):
            cs.update(x.concepts)
            rs.update(x.roles)
            ins.update(x.individuals)
        elif isinstance(x, (tuple, list, set, frozenset)):
            for y in x:
                visit(y)
        else:
            raise TypeError(f"cannot take the signature of {type(x).__name__}")

    for x in xs:
        visit(x)
    return Signature(cs, rs, ins)


# ---------------------------------------------------------------- role hierarchy


class RoleHierarchy:
    """Reflexive-transitive closure of the role inclusions of an ontology.

    With ``inverse=True`` every inclusion r ⊑ s also yields r⁻ ⊑ s⁻.
    """

    def __init__(self, ontology: Ontology, inverse: bool = True):
        self.inverse = inverse
        edges: dict[Role, set] = {}
        for ri in ontology.ris:
            edges.setdefault(ri.sub, set()).add(ri.sup)
            if inverse:
                edges.setdefault(ri.sub.inverse(), set()).add(ri.sup.inverse())
        self._edges = edges
        self._cache: dict[Role, frozenset] = {}

    def supers(self, r: Role) -> frozenset:
        """All s with r ⊑ s entailed (including r itself)."""
        if r in self._cache:
            return self._cache[r]
        seen = {r}
        stack = [r]
        while stack:
            x = stack.pop()
            for y in self._edges.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out = frozenset(seen)
        self._cache[r] = out
        return out

    def entails(self, r: Role, s: Role) -> bool:
        return s in self.supers(r)


# ---------------------------------------------------------------- closure


class XiClosure:
    """Subconcepts of the inputs closed under single negation, canonically ordered."""

    def __init__(self, concepts: Iterable[Concept]):
        members = set()
        for c in concepts:
            for s in subconcepts(c):
                members.add(s)
                members.add(neg(s))
        # negation of a member's subconcepts may add new subconcepts only via Not
        # wrappers, which are already covered by neg(); one pass suffices.
        self.members: tuple = tuple(sorted(members, key=lambda c: c.key))
        self.index: dict = {c: i for i, c in enumerate(self.members)}

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, c):
        return c in self.index

    def id(self, c: Concept) -> int:
        return self.index[c]

    def __eq__(self, other):
        return isinstance(other, XiClosure) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def serialize(self) -> str:
        return "\n".join(to_text(c) for c in self.members)


def xi_closure(o1: Ontology = EMPTY, o2: Ontology = EMPTY, c1: Concept = TOP,
               c2: Concept = TOP, extra: Iterable[Concept] = ()) -> XiClosure:
    concepts = [c1, c2, *extra]
    for o in (o1, o2):
        concepts.extend(o.concepts())
    return XiClosure(concepts)


# ---------------------------------------------------------------- renaming


def fresh_name(name: str, taken: set) -> str:
    candidate = name + "'"
    while candidate in taken:
        candidate += "'"
    return candidate


def map_names(x, concept_map=None, role_map=None, ind_map=None):
    """Apply name substitutions to a concept, role, axiom or ontology."""
    concept_map = concept_map or {}
    role_map = role_map or {}
    ind_map = ind_map or {}

    def role(r: Role) -> Role:
        if r.is_universal:
            return r
        return Role(role_map.get(r.name, r.name), r.inverted)

    def concept(c: Concept) -> Concept:
        if isinstance(c, Name):
            return Name(concept_map.get(c.name, c.name))
        if isinstance(c, Nominal):
            return Nominal(ind_map.get(c.individual, c.individual))
        if isinstance(c, Not):
            return Not(concept(c.arg))
        if isinstance(c, And):
            return And(concept(c.left), concept(c.right))
        if isinstance(c, Exists):
            return Exists(role(c.role), concept(c.arg))
        return c

    if isinstance(x, Concept):
        return concept(x)
    if isinstance(x, Role):
        return role(x)
    if isinstance(x, CI):
        return CI(concept(x.lhs), concept(x.rhs))
    if isinstance(x, RI):
        return RI(role(x.sub), role(x.sup))
    if isinstance(x, Ontology):
        return Ontology([map_names(a, concept_map, role_map, ind_map) for a in x.cis],
                        [map_names(a, concept_map, role_map, ind_map) for a in x.ris])
    if isinstance(x, (tuple, list)):
        return type(x)(map_names(y, concept_map, role_map, ind_map) for y in x)
    raise TypeError(type(x).__name__)


@dataclass(frozen=True)
class Renaming:
    concepts: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)
    individuals: dict = field(default_factory=dict)

    def apply(self, x):
        return map_names(x, self.concepts, self.roles, self.individuals)

    def table(self) -> dict:
        out = {}
        out.update(self.concepts)
        out.update(self.roles)
        out.update(self.individuals)
        return out


def rename_outside(x, sigma: Signature, avoid: Signature | None = None):
    """Rename every symbol of ``x`` outside ``sigma`` to a fresh primed name.

    Returns the renamed copy and the :class:`Renaming` used.  Fresh names are
    checked against the symbols of ``x``, ``sigma`` and ``avoid``.
    """
    sig = signature(x)
    taken = sig.names() | sigma.names() | (avoid.names() if avoid else set())
    maps = []
    for names, keep in ((sig.concepts, sigma.concepts), (sig.roles, sigma.roles),
                        (sig.individuals, sigma.individuals)):
        m = {}
        for n in sorted(names - keep):
            new = fresh_name(n, taken)
            taken.add(new)
            m[n] = new
        maps.append(m)
    ren = Renaming(*maps)
    return ren.apply(x), ren


# ---------------------------------------------------------------- dialect checks


@dataclass(frozen=True, order=True)
class Violation:
    construct: str
    detail: str

    def __str__(self):
        return f"{self.construct} not admitted: {self.detail}"


def validate_dialect(x, d: Dialect) -> list:
    """Every construct of ``x`` that dialect ``d`` does not license."""
    found = set()

    def check_role(r: Role, where: str):
        if r.is_universal and not d.universal:
            found.add(Violation("universal role", where))
        if r.inverted and not d.inverse:
            found.add(Violation("inverse role", f"{r} in {where}"))

    def visit_concept(c: Concept):
        for s in subconcepts(c):
            if isinstance(s, Nominal) and not d.nominals:
                found.add(Violation("nominal", "{" + s.individual + "}"))
            elif isinstance(s, Exists):
                check_role(s.role, to_text(s))

    def visit(y):
        if isinstance(y, Concept):
            visit_concept(y)
        elif isinstance(y, Ontology):
            for ax in y.cis:
                visit_concept(ax.lhs)
                visit_concept(ax.rhs)
            for ri in y.ris:
                if not d.role_hierarchy:
                    found.add(Violation("role inclusion", str(ri)))
                if ri.sub.is_universal or ri.sup.is_universal:
                    found.add(Violation("universal role", f"in role inclusion {ri}"))
                for r in (ri.sub, ri.sup):
                    if r.inverted and not d.inverse:
                        found.add(Violation("inverse role", f"{r} in {ri}"))
        elif isinstance(y, (list, tuple)):
            for z in y:
                visit(z)
        elif y is not None:
            raise TypeError(type(y).__name__)

    visit(x)
    return sorted(found)


def require_dialect(d: Dialect, *xs):
    v = validate_dialect(list(xs), d)
    if v:
        raise DialectError(v)


# ---------------------------------------------------------------- parsing

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*'*")
_TOKEN_RE = re.compile(r"\s*(?:(->)|([(){}])|([A-Za-z][A-Za-z0-9_]*'*-?)|(\S))")
KEYWORDS = {"top", "bot", "not", "and", "or", "exists", "forall", "sub"}


class _Tokens:
    def __init__(self, text: str, line: int, dialect: Dialect | None):
        self.toks = []
        self.line = line
        self.dialect = dialect
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(4):
                raise ParseError(f"unexpected character {m.group(4)!r}", line, m.start(4) + 1)
            tok = m.group(1) or m.group(2) or m.group(3)
            start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
            self.toks.append((tok, start + 1))
            pos = m.end()
            if text[pos:].strip() == "":
                break
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def col(self):
        if self.i < len(self.toks):
            return self.toks[self.i][1]
        return (self.toks[-1][1] + len(self.toks[-1][0])) if self.toks else 1

    def next(self):
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of line", self.line, self.col())
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, col = self.next()
        if tok != want:
            raise ParseError(f"expected {want!r}, found {tok!r}", self.line, col)

    def error(self, msg):
        return ParseError(msg, self.line, self.col())


def _check_name(tok: str, col: int, t: _Tokens, what: str):
    if tok in KEYWORDS or tok == UNIVERSAL_NAME or not _NAME_RE.fullmatch(tok):
        raise ParseError(f"expected {what}, found {tok!r}", t.line, col)


def _parse_role(t: _Tokens) -> Role:
    tok, col = t.next()
    if tok == UNIVERSAL_NAME:
        if t.dialect is not None and not t.dialect.universal:
            raise ParseError("universal role used but the dialect has no universal role",
                             t.line, col)
        return UNIVERSAL
    inverted = tok.endswith("-")
    name = tok[:-1] if inverted else tok
    _check_name(name, col, t, "role name")
    if inverted and t.dialect is not None and not t.dialect.inverse:
        raise ParseError(f"inverse role {tok} used but the dialect has no inverses",
                         t.line, col)
    return Role(name, inverted)


def _parse_concept(t: _Tokens) -> Concept:
    tok, col = t.next()
    if tok == "top":
        return TOP
    if tok == "bot":
        return BOTTOM
    if tok == "not":
        return neg(_parse_concept(t))
    if tok == "{":
        name, ncol = t.next()
        _check_name(name, ncol, t, "individual name")
        if t.dialect is not None and not t.dialect.nominals:
            raise ParseError("nominal used but the dialect has no nominals", t.line, col)
        t.expect("}")
        return Nominal(name)
    if tok == "(":
        left = _parse_concept(t)
        op, ocol = t.next()
        right = _parse_concept(t)
        t.expect(")")
        if op == "and":
            return And(left, right)
        if op == "or":
            return disj(left, right)
        if op == "->":
            return implies(left, right)
        raise ParseError(f"expected 'and', 'or' or '->', found {op!r}", t.line, ocol)
    if tok in ("exists", "forall"):
        r = _parse_role(t)
        c = _parse_concept(t)
        return Exists(r, c) if tok == "exists" else forall(r, c)
    if tok.endswith("-"):
        raise ParseError(f"role {tok!r} where a concept was expected", t.line, col)
    _check_name(tok, col, t, "concept")
    return Name(tok)


def parse_concept(text: str, dialect: Dialect | None = None, line: int = 1) -> Concept:
    t = _Tokens(text, line, dialect)
    if t.peek() is None:
        raise ParseError("empty concept", line, 1)
    c = _parse_concept(t)
    if t.peek() is not None:
        raise t.error(f"trailing input {t.peek()!r}")
    return c


def _role_axiom_shape(t: _Tokens):
    """Classify a line of the form ``X sub Y`` with bare tokens.

    Returns "role" when a side is syntactically a role (inverse or ``u``),
    "ambiguous" for two plain names, and None for anything else.
    """
    toks = [x[0] for x in t.toks]
    if len(toks) != 3 or toks[1] != "sub":
        return None
    plain = True
    for x in (toks[0], toks[2]):
        if x.endswith("-") or x == UNIVERSAL_NAME:
            plain = False
            continue
        if x in KEYWORDS or not _NAME_RE.fullmatch(x):
            return None
    return "ambiguous" if plain else "role"


def _parse_role_axiom(t: _Tokens, dialect: Dialect | None, line: int) -> RI:
    sub = _parse_role(t)
    t.expect("sub")
    sup = _parse_role(t)
    if sub.is_universal or sup.is_universal:
        raise ParseError("role inclusions may not mention the universal role", line, 1)
    if dialect is not None and not dialect.role_hierarchy:
        raise ParseError("role inclusion used but the dialect has no role hierarchy", line, 1)
    return RI(sub, sup)


def parse_axiom(text: str, dialect: Dialect | None = None, line: int = 1,
                role_names: frozenset = frozenset(), concept_names: frozenset = frozenset()):
    """Parse a single axiom.

    ``A sub B`` with two bare names is read as a role inclusion when one of
    the names is a known role (``role_names``), as a concept inclusion when one
    is a known concept, and otherwise by case: two lowercase-initial names form
    a role inclusion.
    """
    t = _Tokens(text, line, dialect)
    shape = _role_axiom_shape(t)
    if shape == "role":
        return _parse_role_axiom(t, dialect, line)
    if shape == "ambiguous":
        a, b = t.toks[0][0], t.toks[2][0]
        if a in role_names or b in role_names:
            is_role = True
        elif a in concept_names or b in concept_names:
            is_role = False
        else:
            is_role = a[0].islower() and b[0].islower()
        if is_role:
            return _parse_role_axiom(t, dialect, line)
    lhs = _parse_concept(t)
    t.expect("sub")
    rhs = _parse_concept(t)
    if t.peek() is not None:
        raise t.error(f"trailing input {t.peek()!r}")
    return CI(lhs, rhs)


def parse_ontology(text: str, dialect: Dialect | None = None) -> Ontology:
    """Parse one axiom per line; ``#`` starts a comment.

    When ``dialect`` is given, constructs it does not admit are rejected with
    the offending line and column.
    """
    lines = []
    roles, concepts = set(), set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        lines.append((lineno, body))
        toks = _Tokens(body, lineno, None).toks
        words = [x[0] for x in toks]
        if _role_axiom_shape(_Tokens(body, lineno, None)) is None:
            for i, w in enumerate(words):
                if i and words[i - 1] in ("exists", "forall"):
                    roles.add(w.rstrip("-"))
                elif _NAME_RE.fullmatch(w) and w not in KEYWORDS and w != UNIVERSAL_NAME \
                        and (i == 0 or words[i - 1] != "{"):
                    concepts.add(w)
    cis, ris = [], []
    for lineno, body in lines:
        ax = parse_axiom(body, dialect, lineno, frozenset(roles), frozenset(concepts))
        (ris if isinstance(ax, RI) else cis).append(ax)
    return Ontology(cis, ris)


# ---------------------------------------------------------------- printing


def to_text(c: Concept) -> str:
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Nominal):
        return "{" + c.individual + "}"
    if isinstance(c, Not):
        a = c.arg
        if isinstance(a, Top):
            return "bot"
        if isinstance(a, Exists) and isinstance(a.arg, Not):
            return f"forall {a.role} {to_text(a.arg.arg)}"
        if isinstance(a, And) and isinstance(a.left, Not) and isinstance(a.right, Not):
            return f"({to_text(a.left.arg)} or {to_text(a.right.arg)})"
        return f"not {to_text(a)}"
    if isinstance(c, And):
        return f"({to_text(c.left)} and {to_text(c.right)})"
    if isinstance(c, Exists):
        return f"exists {c.role} {to_text(c.arg)}"
    raise TypeError(type(c).__name__)


def ontology_to_text(o: Ontology) -> str:
    lines = [str(ax) for ax in o.ris] + [str(ax) for ax in o.cis]
    return "\n".join(lines) + ("\n" if lines else "")


ConceptOrOntology = Union[Concept, Ontology]
