import pytest
from corpus import CUT_TREFOIL, NAMED, VIRTUAL_TREFOIL

from labelbracket import (
    DiagramParseError,
    Kind,
    PlanarityError,
    StructuralError,
    parse_diagram,
    serialize,
    writhe,
)


def test_circle():
    d = parse_diagram("O[1]")
    assert d.n_classical == 0 and len(d.loops) == 1
    assert writhe(d) == 0


def test_right_trefoil_signs():
    d = parse_diagram(NAMED["right trefoil"])
    assert d.n_classical == 3
    assert d.signs() == [1, 1, 1]
    assert d.components() == 1
    assert writhe(d) == 3


def test_kinks():
    assert writhe(parse_diagram(NAMED["positive kink"])) == 1
    assert writhe(parse_diagram(NAMED["negative kink"])) == -1
    assert writhe(parse_diagram(NAMED["figure-eight"])) == 0
    assert writhe(parse_diagram(NAMED["left trefoil"])) == -3


def test_two_crossing_knotoid():
    d = parse_diagram("P[1] X[1,2,3,4] X[2,4,5,3] Q[5]")
    assert len(d.endpoints) == 2
    assert d.kind is Kind.KNOTOID_PLANAR
    assert d.kind.is_knotoid
    assert parse_diagram("P[1] X[1,2,3,4] X[2,4,5,3] Q[5]", spherical=True).kind is Kind.KNOTOID_SPHERICAL


def test_virtual_kind():
    d = parse_diagram(VIRTUAL_TREFOIL)
    assert d.kind is Kind.VIRTUAL
    assert d.n_classical == 2 and len(d.crossings) == 3
    assert writhe(d) == 2


def test_serialize_round_trip():
    for code in list(NAMED.values()) + [VIRTUAL_TREFOIL, CUT_TREFOIL]:
        d = parse_diagram(code)
        e = parse_diagram(serialize(d))
        assert serialize(d) == serialize(d)
        assert e.arcs() == list(range(1, len(e.arcs()) + 1))
        assert (e.kind, writhe(e), len(e.crossings), e.components()) == (d.kind, writhe(d), len(d.crossings), d.components())


def test_parse_error_has_position():
    with pytest.raises(DiagramParseError, match="position"):
        parse_diagram("X[1,5,2,4] Y[3]")


def test_arc_count_violation_names_arc():
    with pytest.raises(StructuralError, match="arc 1 "):
        parse_diagram("X[1,5,2,4] X[3,8,4,6] X[5,3,6,2]")


def test_nonplanar_classical_code():
    # the virtual trefoil's Gauss data with the virtual crossing removed
    with pytest.raises(PlanarityError):
        parse_diagram("X[1,4,2,3] X[3,1,4,2]")
