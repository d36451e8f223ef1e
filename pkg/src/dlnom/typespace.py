"""Bitmask representation of closure types and the elimination machinery.

A type is stored as an int whose bit ``k`` is set when closure member ``k``
belongs to it.  Sets of types are ints as well, indexed by type number.
Both satisfiability checking and the mosaic procedure are built on the
tables computed here: membership masks per closure member, the successor
masks of the r-coherence relation, and witness masks for existentials.
"""

from __future__ import annotations

from pysat.card import CardEnc, EncType
from pysat.solvers import Solver

from .dlcore import (
    And, Concept, Dialect, Exists, Name, Nominal, Not, Ontology, Role,
    RoleHierarchy, Top, UNIVERSAL, XiClosure,
)

DEFAULT_MAX_CLOSURE = 64
DEFAULT_MAX_TYPES = 1 << 13
DEFAULT_MAX_ROUNDS = 1 << 12


class BudgetExceeded(RuntimeError):
    """A configured resource limit was hit; the answer is unknown."""

    def __init__(self, message: str, **counters):
        self.counters = counters
        super().__init__(message)


def bits(mask: int):
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class TypeSpace:
    """All candidate types over a closure that respect an ontology's CIs.

    ``types`` holds member bitmasks in ascending numeric order, which is a
    canonical order because the closure itself is canonically ordered.
    """

    def __init__(self, closure: XiClosure, ontology: Ontology, dialect: Dialect,
                 max_closure: int = DEFAULT_MAX_CLOSURE, max_types: int = DEFAULT_MAX_TYPES):
        if len(closure) > max_closure:
            raise BudgetExceeded(
                f"closure has {len(closure)} members, budget is {max_closure}",
                closure=len(closure))
        self.closure = closure
        self.ontology = ontology
        self.dialect = dialect
        self.hierarchy = RoleHierarchy(ontology, inverse=dialect.inverse)
        members = closure.members
        self.n = len(members)
        self.atoms = [i for i, c in enumerate(members)
                      if isinstance(c, (Top, Name, Nominal, Exists))]
        self.exists = [i for i, c in enumerate(members) if isinstance(c, Exists)]
        self.exist_role = {i: members[i].role for i in self.exists}
        self.exist_arg = {i: closure.id(members[i].arg) for i in self.exists}
        self.nominals = sorted({c.individual for c in members if isinstance(c, Nominal)})
        self.nominal_member = {a: closure.id(Nominal(a)) for a in self.nominals}
        self.umask = 0
        for i in self.exists:
            if self.exist_role[i].is_universal:
                self.umask |= 1 << i
        self.types = self._enumerate(max_types)
        self.all = (1 << len(self.types)) - 1
        has = [0] * self.n
        for ti, t in enumerate(self.types):
            for k in bits(t):
                has[k] |= 1 << ti
        self.has = has
        self._succ: dict[Role, list] = {}
        self._neg_args: dict[Role, list] = {}
        self._witness: dict = {}
        self._obligations = [[k for k in self.exists if (t >> k) & 1] for t in self.types]

    # ------------------------------------------------------------ enumeration

    def _clauses(self):
        """CNF whose models, projected to atoms, are exactly the candidate types."""
        members = self.closure.members
        idx = self.closure.index
        v = lambda i: i + 1  # noqa: E731
        cls = []
        for i, c in enumerate(members):
            if isinstance(c, Top):
                cls.append([v(i)])
            elif isinstance(c, Not):
                j = idx[c.arg]
                cls += [[v(i), v(j)], [-v(i), -v(j)]]
            elif isinstance(c, And):
                a, b = idx[c.left], idx[c.right]
                cls += [[-v(i), v(a)], [-v(i), v(b)], [v(i), -v(a), -v(b)]]
        for ax in self.ontology.cis:
            cls.append([-v(idx[ax.lhs]), v(idx[ax.rhs])])
        # Valid implications between existentials; they only discard types
        # that elimination would remove anyway, but keep the space small.
        for i in self.exists:
            r, a = self.exist_role[i], self.exist_arg[i]
            sup = self.supers(r)
            for j in self.exists:
                if i == j:
                    continue
                s, b = self.exist_role[j], self.exist_arg[j]
                if s in sup and (a == b or isinstance(members[b], Top)):
                    cls.append([-v(i), v(j)])
            if isinstance(members[a], Not) and isinstance(members[a].arg, Top):
                cls.append([-v(i)])
        return cls

    def _enumerate(self, max_types: int) -> list:
        found = []
        atoms = self.atoms
        with Solver(name="minisat22", bootstrap_with=self._clauses()) as solver:
            while solver.solve():
                model = solver.get_model()
                t = 0
                for lit in model:
                    if lit > 0 and lit <= self.n:
                        t |= 1 << (lit - 1)
                found.append(t)
                if len(found) > max_types:
                    raise BudgetExceeded(
                        f"more than {max_types} candidate types", types=len(found),
                        closure=self.n)
                solver.add_clause([-(k + 1) if (t >> k) & 1 else (k + 1) for k in atoms])
        found.sort()
        return found

    # ------------------------------------------------------------ roles

    def supers(self, r: Role) -> frozenset:
        """Roles s with r ⊑ s entailed; includes u in universal dialects."""
        if r.is_universal:
            return frozenset({UNIVERSAL})
        sup = self.hierarchy.supers(r)
        if self.dialect.universal:
            sup = sup | {UNIVERSAL}
        return sup

    def neg_args(self, r: Role) -> list:
        """Per type: mask of members C with ¬∃s.C in the type for some s ⊒ r."""
        if r in self._neg_args:
            return self._neg_args[r]
        sup = self.supers(r)
        rel = [(i, self.exist_arg[i]) for i in self.exists if self.exist_role[i] in sup]
        out = []
        for t in self.types:
            m = 0
            for i, a in rel:
                if not (t >> i) & 1:
                    m |= 1 << a
            out.append(m)
        self._neg_args[r] = out
        return out

    def succ(self, r: Role) -> list:
        """Per type t: mask of types t' with t ⇝_r t'."""
        if r in self._succ:
            return self._succ[r]
        fwd = self.neg_args(r)
        back = self.neg_args(r.inverse())
        has = self.has
        allowed_cache: dict[int, int] = {}

        def avoiding(forbidden: int) -> int:
            if forbidden not in allowed_cache:
                m = self.all
                for k in bits(forbidden):
                    m &= ~has[k]
                allowed_cache[forbidden] = m
            return allowed_cache[forbidden]

        groups: dict[int, int] = {}
        for ti, m in enumerate(back):
            groups[m] = groups.get(m, 0) | (1 << ti)
        relevant = 0
        for m in groups:
            relevant |= m
        combo_cache: dict[tuple, int] = {}
        out = []
        for ti, t in enumerate(self.types):
            key = (fwd[ti], t & relevant)
            if key not in combo_cache:
                ok = 0
                for m, g in groups.items():
                    if not (t & m):
                        ok |= g
                combo_cache[key] = avoiding(fwd[ti]) & ok
            out.append(combo_cache[key])
        self._succ[r] = out
        return out

    def coherent(self, t1: int, t2: int, r: Role) -> bool:
        return bool((self.succ(r)[t1] >> t2) & 1)

    # ------------------------------------------------------------ obligations

    def obligations(self, ti: int) -> list:
        """Existential members true in type ``ti``."""
        return self._obligations[ti]

    def witness(self, ti: int, k: int) -> int:
        """Types that can serve as the successor for ∃r.C (member k) in type ti."""
        key = (ti, k)
        w = self._witness.get(key)
        if w is None:
            w = self.succ(self.exist_role[k])[ti] & self.has[self.exist_arg[k]]
            self._witness[key] = w
        return w

    def eliminate(self, alive: int) -> int:
        """Greatest subset of ``alive`` in which every existential has a witness."""
        changed = True
        while changed:
            changed = False
            for ti in bits(alive):
                for k in self._obligations[ti]:
                    if not (self.witness(ti, k) & alive):
                        alive &= ~(1 << ti)
                        changed = True
                        break
        return alive

    # ------------------------------------------------------------ nominals / u

    def nominal_types(self, a: str) -> int:
        return self.has[self.nominal_member[a]]

    def fix_nominal(self, alive: int, ti: int) -> int:
        """Keep ``ti`` as the only type for every nominal it contains."""
        t = self.types[ti]
        for a in self.nominals:
            if (t >> self.nominal_member[a]) & 1:
                alive &= ~self.nominal_types(a) | (1 << ti)
        return alive

    def u_classes(self, alive: int) -> list:
        """Split ``alive`` by the set of ∃u-members; drop types that a class's
        negated ∃u-members exclude."""
        if not self.umask:
            return [alive] if alive else []
        classes: dict[int, int] = {}
        for ti in bits(alive):
            key = self.types[ti] & self.umask
            classes[key] = classes.get(key, 0) | (1 << ti)
        out = []
        for key in sorted(classes):
            members = classes[key]
            forbidden = 0
            for i in bits(self.umask):
                if not (key >> i) & 1:
                    forbidden |= 1 << self.exist_arg[i]
            for k in bits(forbidden):
                members &= ~self.has[k]
            if members:
                out.append(members)
        return out

    def search(self, alive: int, goal: int | None = None, stats: dict | None = None):
        """Find a realizable set of types inside ``alive``.

        A set qualifies when every existential of every member has a witness
        in the set, each nominal is carried by exactly one member, all members
        agree on ∃u-members (and exclude what negated ∃u-members forbid), and,
        if ``goal`` is given, it meets ``goal``.  The nominal and u choices are
        delegated to a SAT solver over one selection variable per type; the
        returned mask is the elimination fixpoint for the choices it made, so
        it is the largest set compatible with them.  Returns None if no set
        qualifies.
        """
        if stats is not None:
            stats["sat_calls"] = stats.get("sat_calls", 0) + 1
        alive = self.eliminate(alive)
        if not alive or (goal is not None and not (alive & goal)):
            return None
        clauses, _ = self._selection_clauses(alive)
        if goal is not None:
            clauses.append([ti + 1 for ti in bits(alive & goal)])
        else:
            clauses.append([ti + 1 for ti in bits(alive)])
        with Solver(name="minisat22", bootstrap_with=clauses) as solver:
            if not solver.solve():
                return None
            chosen = 0
            for lit in solver.get_model():
                if 0 < lit <= len(self.types):
                    chosen |= 1 << (lit - 1)
        return self.extend(alive, chosen)

    def extend(self, alive: int, chosen: int) -> int:
        """Largest witness-closed subset of ``alive`` keeping the nominal types
        and ∃u-profile of the self-supporting set ``chosen``."""
        keep = alive
        for ti in bits(chosen):
            keep = self.fix_nominal(keep, ti)
        if self.umask:
            profile = self.types[lowest(chosen)] & self.umask
            for cls in self.u_classes(keep):
                if self.types[lowest(cls)] & self.umask == profile:
                    keep = cls
                    break
        out = self.eliminate(keep)
        assert chosen & ~out == 0
        return out

    def _selection_clauses(self, alive: int) -> tuple:
        nt = len(self.types)
        clauses = []
        for ti in bits(self.all & ~alive):
            clauses.append([-(ti + 1)])
        for ti in bits(alive):
            for k in self._obligations[ti]:
                w = self.witness(ti, k) & alive
                clauses.append([-(ti + 1)] + [tj + 1 for tj in bits(w)])
        next_var = nt + 1 + popcount(self.umask)
        for a in self.nominals:
            cand = [tj + 1 for tj in bits(alive & self.nominal_types(a))]
            clauses.append(cand)
            amo = CardEnc.atmost(cand, 1, top_id=next_var, encoding=EncType.seqcounter)
            next_var = max(next_var, amo.nv)
            clauses.extend(amo.clauses)
        top = next_var
        next_var = nt + 1
        for i in bits(self.umask):
            uvar = next_var
            next_var += 1
            arg = self.exist_arg[i]
            for ti in bits(alive):
                if (self.types[ti] >> i) & 1:
                    clauses.append([-(ti + 1), uvar])
                else:
                    clauses.append([-(ti + 1), -uvar])
                    if (self.types[ti] >> arg) & 1:
                        # a type containing C forces ∃u.C everywhere
                        clauses.append([-(ti + 1), uvar])
        return clauses, top

    def realizable(self, stats: dict | None = None, max_rounds: int = DEFAULT_MAX_ROUNDS) -> int:
        """Mask of types realized in some model of the ontology.

        With nominals or ∃u each solver round certifies at least one new
        type; more than ``max_rounds`` rounds raises :class:`BudgetExceeded`.
        """
        alive = self.eliminate(self.all)
        if not alive or not (self.nominals or self.umask):
            return alive
        # one incremental solver; each call asks for a selection holding one
        # type not yet marked, and every member of a selection is realizable
        clauses, _ = self._selection_clauses(alive)
        marked = dead = 0
        rounds = 0
        with Solver(name="minisat22", bootstrap_with=clauses) as solver:
            # prefer large selections so that each model marks many types
            solver.set_phases([ti + 1 for ti in bits(alive)])
            while alive & ~(marked | dead):
                ti = lowest(alive & ~(marked | dead))
                rounds += 1
                if rounds > max_rounds:
                    raise BudgetExceeded(f"more than {max_rounds} realizability rounds",
                                         types=len(self.types), marked=popcount(marked))
                if stats is not None:
                    stats["sat_calls"] = stats.get("sat_calls", 0) + 1
                if not solver.solve(assumptions=[ti + 1]):
                    dead |= 1 << ti
                    continue
                chosen = 0
                for lit in solver.get_model():
                    if 0 < lit <= len(self.types):
                        chosen |= 1 << (lit - 1)
                # the first extension marks the bulk; later models only mark
                # themselves, which is much cheaper than re-eliminating
                marked |= self.extend(alive, chosen) if not marked else chosen
        return marked

    # ------------------------------------------------------------ helpers

    def member_mask(self, c: Concept) -> int:
        """Types containing concept ``c`` (which must be in the closure)."""
        return self.has[self.closure.id(c)]

    def type_concepts(self, ti: int) -> list:
        return [self.closure.members[k] for k in bits(self.types[ti])]
