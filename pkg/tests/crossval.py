"""Random instances and the engine-versus-oracle comparison used by the
acceptance suite and the smaller cross-validation tests."""

import random
import time
from dataclasses import dataclass, field

from dlnom.dlcore import (
    ALCH, ALCHI, ALCHIO, ALCHO, ALCIO, ALCO, CI, RI, TOP, And, Dialect, Exists, Name, Nominal,
    Not, Ontology, Role, Signature, UNIVERSAL, neg, signature,
)
from dlnom.mosaic import JointProblem, solve, validate_witness
from dlnom.oracles import SearchBudget, bounded_joint_consistency, enumerate_definitions
from dlnom.typespace import BudgetExceeded

DIALECTS = [ALCO, ALCH, ALCHO, ALCIO, ALCHIO, ALCHI,
            Dialect(True, False, False, True), Dialect(True, False, True, True)]


class RandomInstances:
    """At most 4 axioms, 3 concept names, 2 role names and 1 nominal."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def role(self, d: Dialect, allow_u=True) -> Role:
        opts = [Role("r"), Role("s")]
        if d.inverse:
            opts += [Role("r", True), Role("s", True)]
        if d.universal and allow_u:
            opts.append(UNIVERSAL)
        return self.rng.choice(opts)

    def concept(self, d: Dialect, depth: int) -> object:
        rng = self.rng
        atoms = [Name("A"), Name("B"), Name("E")]
        if d.nominals:
            atoms.append(Nominal("a"))
        if depth == 0 or rng.random() < 0.3:
            c = rng.choice(atoms + [TOP])
            return Not(c) if rng.random() < 0.3 else c
        kind = rng.random()
        if kind < 0.4:
            c = Exists(self.role(d), self.concept(d, depth - 1))
        elif kind < 0.8:
            c = And(self.concept(d, depth - 1), self.concept(d, depth - 1))
        else:
            c = neg(Exists(self.role(d), self.concept(d, depth - 1)))
        return Not(c) if rng.random() < 0.2 else c

    def ontology(self, d: Dialect) -> Ontology:
        n = self.rng.randint(0, 4)
        cis, ris = [], []
        for _ in range(n):
            if d.role_hierarchy and self.rng.random() < 0.25:
                ris.append(RI(self.role(d, False), self.role(d, False)))
            else:
                cis.append(CI(self.concept(d, 2), self.concept(d, 2)))
        return Ontology(cis, ris)

    def sigma(self, sig: Signature) -> Signature:
        keep = lambda xs: {x for x in sorted(xs) if self.rng.random() < 0.6}  # noqa: E731
        return Signature(keep(sig.concepts), keep(sig.roles), keep(sig.individuals))

    def instance(self, d: Dialect):
        o = self.ontology(d)
        c1 = self.concept(d, 2)
        c2 = neg(c1) if self.rng.random() < 0.5 else self.concept(d, 2)
        sigma = self.sigma(signature(o, c1, c2))
        return o, c1, c2, sigma


@dataclass
class Tally:
    instances: int = 0
    consistent: int = 0
    budget: int = 0
    oracle_witnesses: int = 0
    oracle_definitions: int = 0
    contradictions: list = field(default_factory=list)
    seconds: float = 0.0
    by_dialect: dict = field(default_factory=dict)


def cross_validate(per_dialect: int = 30, seed: int = 7, max_domain: int = 3,
                   def_depth: int = 1) -> Tally:
    tally = Tally()
    start = time.monotonic()
    gen = RandomInstances(seed)
    for d in DIALECTS:
        done = 0
        while done < per_dialect:
            o, c1, c2, sigma = gen.instance(d)
            try:
                pb = JointProblem(o, c1, o, c2, sigma, d)
                verdict = solve(pb)
            except BudgetExceeded:
                tally.budget += 1
                continue
            done += 1
            tally.instances += 1
            tally.by_dialect[d.name] = tally.by_dialect.get(d.name, 0) + 1
            tag = (d.name, str(o), str(c1), str(c2), sigma.to_text())
            if verdict.consistent:
                tally.consistent += 1
                problems = validate_witness(pb, verdict.witness)
                if problems:
                    tally.contradictions.append(("bad witness", tag, problems))
            small = bounded_joint_consistency(o, c1, o, c2, sigma, d,
                                              SearchBudget(max_domain=max_domain))
            if small.found:
                tally.oracle_witnesses += 1
                if not verdict.consistent:
                    tally.contradictions.append(("oracle found models", tag))
            if c2 == neg(c1):
                found = enumerate_definitions(o, c1, sigma, d,
                                              SearchBudget(max_depth=def_depth,
                                                           max_candidates=400),
                                              max_size=5)
                if found.found:
                    tally.oracle_definitions += 1
                    if verdict.consistent:
                        tally.contradictions.append(("oracle found definition", tag,
                                                     str(found.concept)))
                    if small.found:
                        tally.contradictions.append(("both oracles fired", tag))
    tally.seconds = time.monotonic() - start
    return tally
