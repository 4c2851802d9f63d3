import random

import pytest
from corpus import NAMED, VIRTUAL_TREFOIL

from labelbracket import (
    FormalSum,
    LabelGraph,
    MoveSpec,
    apply_move,
    canonical_key,
    circle_count,
    parse_diagram,
    smooth,
    sum_add,
    validate,
)
from labelbracket.labelgraph import (
    LabelGraphError,
    cusp_index,
    delete_thin,
    vertex_class,
)
from labelbracket.statesum import states

KINK = parse_diagram(NAMED["positive kink"])


def relabel(g: LabelGraph, rng: random.Random) -> LabelGraph:
    """The same ribbon graph under random vertex and half-edge numbering."""
    nv, nh = len(g.vtype), len(g.twin)
    vp = list(range(nv))
    hp = list(range(nh))
    rng.shuffle(vp)
    rng.shuffle(hp)
    vtype = [None] * nv
    rot = [None] * nv
    for v in range(nv):
        vtype[vp[v]] = g.vtype[v]
        r = [hp[h] for h in g.rot[v]]
        k = rng.randrange(len(r))
        rot[vp[v]] = tuple(r[k:] + r[:k])
    twin = [None] * nh
    kind = [None] * nh
    for h in range(nh):
        twin[hp[h]] = hp[g.twin[h]]
        kind[hp[h]] = g.kind[h]
    return LabelGraph(tuple(vtype), tuple(rot), tuple(twin), tuple(kind), g.loops)


def test_relabeling_keeps_key():
    rng = random.Random(1)
    d = parse_diagram(NAMED["figure-eight"])
    for s in list(states(d))[:6]:
        g = smooth(d, s)
        h = relabel(g, rng)
        validate(h)
        assert canonical_key(h) == canonical_key(g)
        assert h == g


def test_virtual_curl_is_erased():
    circle = smooth(parse_diagram("O[1]"), {})
    curled = apply_move(parse_diagram("O[1]"), MoveSpec("VR1", (1, "L")))
    assert len(curled.crossings) == 1
    assert canonical_key(smooth(curled, {})) == canonical_key(circle)


def test_kink_states_differ():
    a, b = smooth(KINK, {0: "A"}), smooth(KINK, {0: "B"})
    assert canonical_key(a) != canonical_key(b)


def test_mirror_not_identified():
    t = parse_diagram(NAMED["right trefoil"])
    m = parse_diagram(NAMED["left trefoil"])
    keys_t = {canonical_key(smooth(t, s)) for s in states(t)}
    keys_m = {canonical_key(smooth(m, s)) for s in states(m)}
    assert keys_t != keys_m


def test_sum_add():
    g = smooth(KINK, {0: "A"})
    s = sum_add(FormalSum(), g, 1)
    assert len(s) == 1
    sum_add(s, relabel(g, random.Random(0)), 1)
    assert s.items()[0][1] == 2
    sum_add(s, g, -2)
    assert len(s) == 0


def test_formal_sum_contexts():
    with pytest.raises(ValueError):
        FormalSum("Z")
    with pytest.raises(ValueError):
        FormalSum("C").merge(FormalSum("V"))


def test_circle_count():
    one = smooth(parse_diagram("O[1]"), {})
    assert circle_count(one).closed == 1 and circle_count(one).open == 0
    two = smooth(parse_diagram("O[1] O[2]"), {})
    assert circle_count(two).closed == 2
    knotoid = parse_diagram("P[1] X[1,2,3,4] X[2,4,5,3] Q[5]")
    cd = circle_count(delete_thin(smooth(knotoid, {0: "A", 1: "A"})))
    assert cd.open == 1
    with pytest.raises(ValueError):
        circle_count(smooth(KINK, {0: "A"}))


def test_zigzag_cancels():
    # the disoriented state of a kink carries two cusps that cancel
    cd = circle_count(delete_thin(smooth(KINK, {0: "B"})))
    assert sum(len(t) for t in cd.cusps) == 2
    assert all(cusp_index(t) == 0 for t in cd.cusps)


def test_cusp_index():
    assert cusp_index([]) == 0
    assert cusp_index("LR") == 1
    assert cusp_index("LL") == 0
    assert cusp_index("LRLR") == 2
    assert cusp_index("LLRR") == 0
    with pytest.raises(AssertionError):
        cusp_index("L")


def test_virtual_trefoil_has_irreducible_cusps():
    d = parse_diagram(VIRTUAL_TREFOIL)
    ms = set()
    for s in states(d):
        for toks in circle_count(delete_thin(smooth(d, s))).cusps:
            ms.add(cusp_index(toks))
    assert 1 in ms


def test_validate_rejects_broken_graphs():
    g = smooth(KINK, {0: "A"})
    validate(g)
    kind = list(g.kind)
    t = kind.index("t")
    kind[t] = kind[g.twin[t]] = "o"
    with pytest.raises(LabelGraphError):
        validate(LabelGraph(g.vtype, g.rot, g.twin, tuple(kind), g.loops))
    vtype = ("e", "s")
    with pytest.raises(LabelGraphError):
        validate(LabelGraph(vtype, g.rot, g.twin, g.kind, g.loops))


def test_vertex_classes():
    d = parse_diagram(NAMED["figure-eight"])
    seen = set()
    for s in states(d):
        g = smooth(d, s)
        seen.update(vertex_class(g, v) for v in range(len(g.vtype)))
    assert seen <= {f"V.{i}" for i in range(1, 9)}
    assert len(seen) >= 4
