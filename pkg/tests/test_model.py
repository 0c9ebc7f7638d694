import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grzlab.errors import ResourceLimitError
from grzlab.formula import (And, Box, Const, Dia, Iff, Imp, Not, Or, Var, build_axiom, parse,
                            sorted_variables)
from grzlab.frame import Frame, FrameClass, chain, cluster, enumerate_frames
from grzlab.model import (Model, PointedModel, batch_extension, class_valid_upto, extension,
                          frame_valid, holds_everywhere, load_model, satisfies,
                          valuation_from_index)

from strategies import formulas, frames, models

GRZ = build_axiom("Grz")
GRZ_STAR = build_axiom("Grz*")


def naive_holds(model, w, f):
    """Recursive textbook evaluator used as an oracle."""
    succ = [v for (u, v) in model.frame.edges() if u == w]
    if isinstance(f, Var):
        return w in model.valuation.get(f.name, ())
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not naive_holds(model, w, f.sub)
    if isinstance(f, Box):
        return all(naive_holds(model, v, f.sub) for v in succ)
    if isinstance(f, Dia):
        return any(naive_holds(model, v, f.sub) for v in succ)
    a, b = naive_holds(model, w, f.left), naive_holds(model, w, f.right)
    if isinstance(f, And):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Imp):
        return (not a) or b
    return a == b


def naive_frame_valid(frame, f):
    names = sorted_variables(f)
    for sets in itertools.product(range(1 << frame.size), repeat=len(names)):
        val = {p: {w for w in range(frame.size) if s >> w & 1} for p, s in zip(names, sets)}
        m = Model(frame, val)
        if not all(naive_holds(m, w, f) for w in range(frame.size)):
            return False
    return True


def test_penultimacy_on_a_point():
    m = Model(chain(1), {"p": {0}})
    assert extension(m, "wpenultimate(p)") == {0}
    assert extension(m, "penultimate(p)") == set()


def test_cluster_box_example():
    m = Model(cluster(2), {"p": {1}})
    assert extension(m, "[](p -> []p)") == set()


def test_true_and_false():
    m = Model(chain(3), {})
    assert extension(m, "true") == {0, 1, 2}
    assert not satisfies(PointedModel(m, 1), "false")


def test_chain_contingency():
    m = Model(chain(4), {"p": {1, 3}})
    assert satisfies(PointedModel(m, 0), "<>p & <>~p")
    assert not satisfies(PointedModel(m, 3), "contingent(p)")


def test_unmapped_variables_are_empty():
    m = Model(chain(2), {"p": {0}})
    assert extension(m, "zz") == set()
    assert extension(m, "~zz") == {0, 1}


@settings(max_examples=300, deadline=None)
@given(models(), formulas(("p", "q"), max_depth=5))
def test_checker_matches_naive_evaluator(m, f):
    expected = {w for w in range(m.size) if naive_holds(m, w, f)}
    assert extension(m, f) == expected


@settings(max_examples=200, deadline=None)
@given(models(), formulas(("p", "q"), max_depth=5))
def test_batch_matches_single_checker(m, f):
    atoms = {p: np.array([[w in m.valuation.get(p, ()) for w in range(m.size)]])
             for p in ("p", "q")}
    got = batch_extension(m.frame, f, atoms)[0]
    assert {w for w in range(m.size) if got[w]} == extension(m, f)


@settings(max_examples=200, deadline=None)
@given(models(), formulas(("p", "q"), max_depth=5))
def test_duality(m, f):
    assert extension(m, Dia(f)) == set(range(m.size)) - extension(m, Box(Not(f)))


@settings(max_examples=200, deadline=None)
@given(models(frame_strategy=st.sampled_from(list(enumerate_frames(FrameClass.PREORDER, 3,
                                                                     up_to_iso=False)))),
       formulas(("p", "q"), max_depth=4))
def test_box_is_upward_closed_on_preorders(m, f):
    ext = extension(m, Box(f))
    for u, v in m.frame.edges():
        if u in ext:
            assert v in ext


def test_penultimate_implies_weak_penultimate():
    f = parse("penultimate(p) -> wpenultimate(p)")
    for n in range(1, 4):
        for frame in enumerate_frames(FrameClass.ARBITRARY, n):
            assert frame_valid(frame, f)


def test_grz_valid_on_small_posets():
    for n in range(1, 5):
        for frame in enumerate_frames(FrameClass.POSET, n, up_to_iso=False):
            assert frame_valid(frame, GRZ)
            assert frame_valid(frame, GRZ_STAR)


def test_grz_fails_on_cluster():
    result = frame_valid(cluster(2), GRZ)
    assert not result
    assert len(result.countermodel.valuation["p"]) == 1
    assert not satisfies(result.witness, GRZ)


def test_trivial_validity():
    for frame in enumerate_frames(FrameClass.ARBITRARY, 2):
        assert frame_valid(frame, "p -> p")


def test_frame_valid_against_brute_force():
    for f in (GRZ, GRZ_STAR, build_axiom(".2"), build_axiom("Alt1"), parse("[]p -> p")):
        for frame in enumerate_frames(FrameClass.ARBITRARY, 2):
            assert bool(frame_valid(frame, f)) == naive_frame_valid(frame, f)
        for frame in enumerate_frames(FrameClass.PREORDER, 3):
            assert bool(frame_valid(frame, f)) == naive_frame_valid(frame, f)


def test_frame_valid_witness_is_deterministic_and_first():
    f = build_axiom(".3")
    frame = enumerate_frames(FrameClass.BOOLEAN_ALGEBRA, 4).__next__()
    a, b = frame_valid(frame, f), frame_valid(frame, f)
    assert a.countermodel == b.countermodel and a.world == b.world
    names = sorted_variables(f)
    index = next(i for i in itertools.count()
                 if not holds_everywhere(Model(frame, valuation_from_index(names, 4, i)), f))
    assert a.countermodel == Model(frame, valuation_from_index(names, 4, index))


def test_frame_valid_cap():
    with pytest.raises(ResourceLimitError):
        frame_valid(chain(4), "p & q & r", cap=1000)


def test_class_valid_upto_examples():
    report = class_valid_upto(FrameClass.ALT1, GRZ_STAR, 4)
    assert not report.found and report.frames_examined > 0
    report = class_valid_upto(FrameClass.ALT1, GRZ, 1)
    assert report.found
    assert report.countermodel.frame == Frame(1, (0,))
    report = class_valid_upto(FrameClass.POSET, "p -> []p", 2)
    assert report.found and report.countermodel.frame.size == 2
    assert report.countermodel.valuation["p"] == {report.world}
    with pytest.raises(ValueError):
        class_valid_upto(FrameClass.POSET, "p", 0)


def test_grz_and_grz_star_agree_on_preorders():
    for n in range(1, 5):
        for frame in enumerate_frames(FrameClass.PREORDER, n):
            assert bool(frame_valid(frame, GRZ)) == bool(frame_valid(frame, GRZ_STAR))


def test_model_file_round_trip():
    data = {"worlds": 2, "edges": [[0, 1]], "close": {"reflexive": True, "transitive": True},
            "valuation": {"p": [1]}, "designated": 0}
    pm = load_model(data)
    assert pm.point == 0 and pm.model.valuation["p"] == {1}
    assert PointedModel.from_dict(json.loads(json.dumps(pm.to_dict()))).model == pm.model
    assert Model.from_dict(pm.model.to_dict()) == pm.model


def test_model_rejects_out_of_range():
    with pytest.raises(ValueError):
        Model(chain(2), {"p": {2}})
    with pytest.raises(ValueError):
        PointedModel(Model(chain(2), {}), 5)
