from fractions import Fraction

import pytest

from labelbracket import ExponentDomainError, LaurentPoly, parse_poly
from labelbracket.algebra import LOOP_A, A, q


def test_additive_identity_and_cancellation():
    p = parse_poly("-A^2 - A^{-2}")
    assert p + LaurentPoly() == p
    assert (A(2) + A(2, -1)).is_zero()
    assert p + A(2) == A(-2, -1)


def test_multiplication():
    p = parse_poly("A^3 - 2*A^{-1} + 5")
    assert p * LaurentPoly.const(1) == p
    assert A(-3, -1) * A(3, -1) == LaurentPoly.const(1)
    assert q("1/6") * q("-1/3") == q("-1/6")


def test_sixth_exponents_are_exact():
    assert q(Fraction(1, 6)) ** 6 == q(1)
    with pytest.raises(ExponentDomainError):
        q(Fraction(1, 7))


def test_substitute():
    loop_q = q(1) + LaurentPoly.const(1) + q(-1)
    assert loop_q.substitute("A", -6) == A(-6) + LaurentPoly.const(1) + A(6)
    kp = LaurentPoly.K(1) * A(2)
    assert kp.substitute(k={1: LaurentPoly.const(1)}) == A(2)
    p = parse_poly("q^{1/3} - 2*q^{-1/2}")
    assert p.substitute("q", 1) == p
    with pytest.raises(ExponentDomainError):
        q("1/6").substitute("A", Fraction(1, 5))


def test_canonical_text_round_trip():
    p = LaurentPoly.K(1) * A(2) - A(-4)
    assert p.canonical() == "-1*A^{-4} + 1*K1*A^{2}"
    assert parse_poly(p.canonical()) == p
    assert parse_poly(str(p)) == p
    r = parse_poly("q^{7/6} - 3*q^{-1/2} + 2")
    assert parse_poly(r.canonical()) == r


def test_human_text():
    assert str(q(1) + LaurentPoly.const(1) + q(-1)) == "q + 1 + q^{-1}"
    assert str(LaurentPoly.const(1)) == "1"
    assert str(LOOP_A) == "-A^{2} - A^{-2}"


def test_k_variables():
    p = LaurentPoly.K(2) * LaurentPoly.K(1) ** 2 + A(1)
    assert p.uses_k() and p.k_indices() == {1, 2}
    assert not A(4).uses_k()
    with pytest.raises(ValueError):
        LaurentPoly.K(0)


def test_evaluate_matches_kink_identity():
    # -A^{-2} + (-A^{-4})(-A^2 - A^{-2}) = A^{-6}... checked numerically
    p = A(-2, -1) + A(-4, -1) * LOOP_A
    x = 1.3 + 0.2j
    assert abs(p.evaluate(x) - (-(x**-2) + x**-2 + x**-6)) < 1e-9
