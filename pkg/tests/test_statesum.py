import pytest
from corpus import CUT_TREFOIL, NAMED, VIRTUAL_TREFOIL

from labelbracket import (
    CapacityError,
    braid_closure,
    parse_diagram,
    smooth,
    state_sum,
    validate,
)
from labelbracket.statesum import context_of, states


def test_circle():
    s = state_sum(parse_diagram("O[1]"))
    assert len(s) == 1 and s.mass() == 1
    (g, c), = s.items()
    assert len(g.vtype) == 0 and g.loops == 1


def test_kink_a_state():
    g = smooth(parse_diagram(NAMED["positive kink"]), {0: "A"})
    assert sorted(g.vtype) == ["e", "e"]
    (thin,) = list(g.thin_edges())
    assert g.kind[thin[0]] == "t"


def test_vertex_count_is_twice_crossings():
    for code in list(NAMED.values()) + [VIRTUAL_TREFOIL, CUT_TREFOIL]:
        d = parse_diagram(code)
        for s in states(d):
            g = smooth(d, s)
            validate(g)
            assert g.n_label == 2 * d.n_classical


def test_masses():
    two = braid_closure("s1 S1")
    assert two.n_classical == 2
    s = state_sum(two)
    assert len(s) <= 4 and s.mass() == 4
    assert state_sum(parse_diagram(NAMED["right trefoil"])).mass() == 8


def test_contexts():
    assert state_sum(parse_diagram("O[1]")).context == "C"
    assert state_sum(parse_diagram(VIRTUAL_TREFOIL)).context == "V"
    assert context_of(parse_diagram(CUT_TREFOIL)) == "P"
    assert context_of(parse_diagram(CUT_TREFOIL, spherical=True)) == "S"


def test_state_order_is_binary_counter():
    d = parse_diagram(NAMED["right trefoil"])
    seq = [tuple(s[i] for i in sorted(s)) for s in states(d)]
    assert seq[0] == ("A", "A", "A") and seq[1] == ("A", "A", "B") and len(seq) == 8


def test_capacity_guard():
    with pytest.raises(CapacityError):
        state_sum(parse_diagram(NAMED["right trefoil"]), capacity=2)
