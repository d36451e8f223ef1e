"""Smaller versions of the random cross-validation, quick enough for every run."""
import pytest

from crossval import DIALECTS, RandomInstances, cross_validate
from dlnom.dlcore import CI, Ontology, neg, signature
from dlnom.mosaic import JointProblem, solve
from dlnom.typespace import BudgetExceeded


def test_engine_agrees_with_oracles_on_a_small_sample():
    tally = cross_validate(per_dialect=3, seed=11)
    assert tally.instances == 3 * len(DIALECTS)
    assert tally.contradictions == []


def tiny_instance(gen, d):
    cis = [CI(gen.concept(d, 1), gen.concept(d, 1)) for _ in range(gen.rng.randint(0, 2))]
    o = Ontology(cis)
    c1 = gen.concept(d, 1)
    c2 = neg(c1) if gen.rng.random() < 0.5 else gen.concept(d, 1)
    return o, c1, c2, gen.sigma(signature(o, c1, c2))


@pytest.mark.parametrize("dialect", DIALECTS, ids=lambda d: d.name)
def test_lazy_and_explicit_engines_agree(dialect):
    gen = RandomInstances(5)
    compared = 0
    for _ in range(12):
        o, c1, c2, sigma = tiny_instance(gen, dialect)
        pb = JointProblem(o, c1, o, c2, sigma, dialect, max_universes=256)
        try:
            explicit = solve(pb, engine="explicit", witness=False).consistent
        except BudgetExceeded:
            continue
        assert solve(pb, witness=False).consistent == explicit, (str(o), str(c1), str(c2))
        compared += 1
    assert compared >= 6
