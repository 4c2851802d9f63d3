import pytest
from corpus import NAMED, VIRTUAL_TREFOIL

from labelbracket import parse_diagram, parse_poly, writhe
from labelbracket.algebra import LOOP_A, A, LaurentPoly
from labelbracket.oracle import (
    OracleCapacityError,
    _cusp_index,
    oracle_arrow,
    oracle_jones,
    oracle_kauffman,
)

TREFOIL = parse_diagram(NAMED["right trefoil"])


def test_kauffman_examples():
    assert oracle_kauffman(parse_diagram("O[1]")) == LaurentPoly.const(1)
    assert oracle_kauffman(parse_diagram("O[1] O[2]")) == LOOP_A
    assert oracle_kauffman(TREFOIL) * A(-9, -1) == parse_poly("-A^{-16} + A^{-12} + A^{-4}")
    assert oracle_jones(TREFOIL) == parse_poly("-A^{-16} + A^{-12} + A^{-4}")


def test_kauffman_of_kink_is_writhe_factor():
    k = parse_diagram(NAMED["positive kink"])
    assert writhe(k) == 1
    assert oracle_kauffman(k) == A(3, -1)


def test_arrow_examples():
    assert oracle_arrow(parse_diagram("O[1]")) == LaurentPoly.const(1)
    assert oracle_arrow(TREFOIL) == oracle_jones(TREFOIL)
    vt = oracle_arrow(parse_diagram(VIRTUAL_TREFOIL))
    assert 1 in vt.k_indices()


def test_arrow_with_cusps_forced_to_one_is_kauffman():
    vt = parse_diagram(VIRTUAL_TREFOIL)
    one = {1: LaurentPoly.const(1)}
    assert oracle_arrow(vt).substitute(k=one) == oracle_jones(vt)


def test_cusp_parity_rule():
    assert _cusp_index(["L", "L"]) == 0
    assert _cusp_index(["L", "R"]) == 1
    with pytest.raises(AssertionError):
        _cusp_index(["L"])


def test_capacity_and_knotoid_guards():
    with pytest.raises(OracleCapacityError):
        oracle_kauffman(TREFOIL, capacity=1)
    with pytest.raises(ValueError):
        oracle_arrow(parse_diagram("P[1] Q[1]"))
