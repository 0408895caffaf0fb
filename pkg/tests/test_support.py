import json
from fractions import Fraction

import pytest

from graphlim.config import Caps, caps, set_caps
from graphlim.corpus import all_graphs_upto, kdd_union, random_corpus, random_regular, spectral_corpus
from graphlim.graph_core import RandomSource
from graphlim.report import canonical_json, csv_text, jsonable


def test_caps_round_trip():
    c = Caps().updated(pattern_vertices=8)
    assert c.pattern_vertices == 8 and Caps(**c.to_dict()) == c
    with pytest.raises(ValueError):
        Caps().updated(nonsense=1)
    old = set_caps(c)
    try:
        assert caps().pattern_vertices == 8
    finally:
        set_caps(old)


def test_corpus_shapes():
    assert len(all_graphs_upto(4)) == 1 + 2 + 4 + 11
    G = random_regular(10, 3, RandomSource(0))
    assert G.is_regular(3)
    U = kdd_union(3, 2)
    assert U.num_components == 2 and U.is_regular(3)
    rc = random_corpus(RandomSource(1), count=20, max_n=9)
    assert len(rc) == 20 and all(g.n <= 9 for g in rc)
    sc = spectral_corpus(RandomSource(1), count=15, max_n=30)
    assert len(sc) == 15 and all(pr.graph.max_degree <= pr.d for pr in sc)


def test_corpus_is_deterministic():
    a = [g.edges() for g in random_corpus(RandomSource(5), count=10)]
    b = [g.edges() for g in random_corpus(RandomSource(5), count=10)]
    assert a == b


def test_canonical_json():
    text = canonical_json({"b": Fraction(1, 3), "a": [1.5, True, None]})
    assert json.loads(text) == {"a": [1.5, True, None], "b": "1/3"}
    assert text.index('"a"') < text.index('"b"') and text.endswith("\n")
    with pytest.raises(ValueError):
        canonical_json({"x": float("nan")})
    with pytest.raises(TypeError):
        jsonable(object())


def test_csv_quoting():
    text = csv_text(["name", "v"], [["K3,3", Fraction(1, 2)], ['say "hi"', 0.1]], {"seed": 3})
    lines = text.splitlines()
    assert lines[0] == "# seed=3"
    assert lines[2] == '"K3,3",1/2'
    assert lines[3] == '"say ""hi""",0.1'
