import itertools
import random

from hypothesis import given, settings

from grzlab.bisim import are_bisimilar, is_bisimulation, largest_bisimulation
from grzlab.formula import random_formula
from grzlab.frame import FrameClass, chain, cluster, enumerate_frames
from grzlab.model import Model, PointedModel, satisfies

from strategies import models


def naive_largest(m1, m2, vocab):
    """Greatest fixpoint by deleting bad pairs from the full product."""
    z = {(a, b) for a in range(m1.size) for b in range(m2.size)
         if all((a in m1.valuation.get(p, ())) == (b in m2.valuation.get(p, ())) for p in vocab)}
    changed = True
    while changed:
        changed = False
        for a, b in sorted(z):
            s1 = [y for x, y in m1.frame.edges() if x == a]
            s2 = [y for x, y in m2.frame.edges() if x == b]
            if not all(any((a2, b2) in z for b2 in s2) for a2 in s1) or \
                    not all(any((a2, b2) in z for a2 in s1) for b2 in s2):
                z.discard((a, b))
                changed = True
    return frozenset(z)


def test_model_with_itself():
    m = Model(chain(3), {"p": {1}})
    z = largest_bisimulation(m, m, ["p"])
    assert all((w, w) in z for w in range(3))


def test_chains_with_p_on_top():
    m1 = Model(chain(2), {"p": {1}})
    m2 = Model(chain(3), {"p": {1, 2}})
    assert (0, 0) in largest_bisimulation(m1, m2, ["p"])
    assert are_bisimilar(PointedModel(m1, 0), PointedModel(m2, 0), ["p"])


def test_cluster_collapses_without_p():
    m1 = Model(cluster(2), {})
    m2 = Model(chain(1), {})
    z = largest_bisimulation(m1, m2, ["p"])
    assert z == {(0, 0), (1, 0)}


def test_is_bisimulation_examples():
    m1 = Model(chain(2), {"p": {1}})
    m2 = Model(chain(3), {"p": {1, 2}})
    assert is_bisimulation(largest_bisimulation(m1, m2, ["p"]), m1, m2, ["p"])
    all_pairs = set(itertools.product(range(2), range(3)))
    check = is_bisimulation(all_pairs, m1, m2, ["p"])
    assert not check and check.first.kind == "atom"


def test_forth_and_back_violations():
    m1 = Model(chain(2), {})
    m2 = Model(chain(1), {})
    assert is_bisimulation({(0, 0), (1, 0)}, m1, m2, [])
    check = is_bisimulation({(0, 0)}, m1, m2, [])
    assert check.first.kind == "forth"
    check = is_bisimulation({(0, 0)}, m2, m1, [])
    assert check.first.kind == "back"
    check = is_bisimulation({(0, 4)}, m2, m1, [])
    assert check.first.kind == "range"


@settings(max_examples=150, deadline=None)
@given(models(max_size=3, names=("p",)), models(max_size=3, names=("p",)))
def test_largest_matches_naive_fixpoint(m1, m2):
    z = largest_bisimulation(m1, m2, ["p"])
    assert z == naive_largest(m1, m2, ["p"])
    assert is_bisimulation(z, m1, m2, ["p"])


def test_largest_contains_every_bisimulation():
    frames = [f for n in (1, 2) for f in enumerate_frames(FrameClass.ARBITRARY, n)]
    ms = [Model(f, {"p": {w for w in range(f.size) if s >> w & 1}})
          for f in frames for s in range(1 << f.size)]
    for m1, m2 in itertools.product(ms, repeat=2):
        pairs = list(itertools.product(range(m1.size), range(m2.size)))
        big = largest_bisimulation(m1, m2, ["p"])
        for mask in range(1 << len(pairs)):
            z = {pr for k, pr in enumerate(pairs) if mask >> k & 1}
            if is_bisimulation(z, m1, m2, ["p"]):
                assert z <= big


@settings(max_examples=40, deadline=None)
@given(models(max_size=3), models(max_size=3))
def test_bisimilar_points_agree_on_formulas(m1, m2):
    rng = random.Random(m1.size * 31 + m2.size)
    formulas = [random_formula(rng, ["p", "q"], 6) for _ in range(500)]
    z = largest_bisimulation(m1, m2, ["p", "q"])
    for a, b in z:
        p1, p2 = PointedModel(m1, a), PointedModel(m2, b)
        for f in formulas:
            assert satisfies(p1, f) == satisfies(p2, f)
