import random

import pytest
from corpus import CUT_TREFOIL, NAMED, VIRTUAL_TREFOIL

from labelbracket import (
    UnsupportedError,
    Web,
    apply_move,
    arrow,
    arrow_value,
    braid_closure,
    jones,
    jones_value,
    kuperberg,
    kuperberg_web,
    parse_diagram,
    parse_poly,
    reduce_web,
    smooth,
)
from labelbracket.algebra import BIGON_Q, LOOP_A, LOOP_Q, LaurentPoly, q
from labelbracket.harness import fuzz
from labelbracket.labelgraph import GraphBuilder
from labelbracket.specialize import (
    faces,
    genus,
    kuperberg_raw_factor,
    residual_faces_ok,
)
from labelbracket.statesum import states

ONE = LaurentPoly.const(1)
KINK = parse_diagram(NAMED["positive kink"])


def theta(planar: bool) -> Web:
    b = GraphBuilder()
    u = b.vertex("w", "ooo")
    x = b.vertex("w", "iii")
    for i in range(3):
        b.join(u[i], x[2 - i] if planar else x[i])
    return b.build(Web)


def honeycomb(m: int, n: int) -> Web:
    """Torus quotient of the hexagonal lattice with ``m*n`` hexagons."""
    b = GraphBuilder()
    src = {(i, j): b.vertex("w", "ooo") for i in range(m) for j in range(n)}
    snk = {(i, j): b.vertex("w", "iii") for i in range(m) for j in range(n)}
    for i in range(m):
        for j in range(n):
            up, lower_left, lower_right = src[i, j]
            b.join(up, snk[i, j][2])
            b.join(lower_left, snk[(i - 1) % m, j][0])
            b.join(lower_right, snk[i, (j - 1) % n][1])
    return b.build(Web)


def test_jones_value_examples():
    assert jones_value(smooth(parse_diagram("O[1]"), {})) == ONE
    assert jones_value(smooth(parse_diagram("O[1] O[2]"), {})) == LOOP_A
    a, b = smooth(KINK, {0: "A"}), smooth(KINK, {0: "B"})
    # scalar -A^{-2} on the coherent state, -A^{-4} on the other
    assert jones_value(a) == parse_poly("-A^{-2}") * LOOP_A
    assert jones_value(b) == parse_poly("-A^{-4}")


def test_jones_examples():
    assert jones(parse_diagram("O[1]")) == ONE
    assert jones(KINK) == ONE
    assert jones(parse_diagram(NAMED["negative kink"])) == ONE
    assert jones(parse_diagram(NAMED["right trefoil"])) == parse_poly("-A^{-16} + A^{-12} + A^{-4}")
    assert jones(parse_diagram(NAMED["left trefoil"])) == parse_poly("-A^{16} + A^{12} + A^{4}")
    assert jones(parse_diagram(NAMED["figure-eight"])) == parse_poly("A^8 - A^4 + 1 - A^-4 + A^-8")


def test_knotoid_jones():
    cut = parse_diagram(CUT_TREFOIL)
    assert jones(cut) == jones(parse_diagram(NAMED["right trefoil"]))
    assert jones(parse_diagram("P[1] Q[1]")) == ONE


def test_kuperberg_web_examples():
    scal, w = kuperberg_web(smooth(parse_diagram("O[1]"), {}))
    assert scal == ONE and w.loops == 1 and not w.vtype
    scal, w = kuperberg_web(smooth(KINK, {0: "A"}), normalized=False)
    assert scal == q("-1/3") and not w.vtype
    scal, w = kuperberg_web(smooth(KINK, {0: "B"}), normalized=False)
    assert scal == q("1/6", -1) and len(w.vtype) == 2 and w.loops == 0


def test_reduce_web_loop_and_bigon():
    b = GraphBuilder()
    b.loops = 1
    loop = reduce_web(b.build(Web))
    assert loop.scalar == LOOP_Q and not loop.residuals
    assert reduce_web(theta(planar=True)).scalar == BIGON_Q * LOOP_Q
    assert str(BIGON_Q) == "q^{1/2} + q^{-1/2}"


def test_torus_webs_are_irreducible():
    t = theta(planar=False)
    assert genus(t) == 1 and [len(f) for f in faces(t)] == [6]
    hc = honeycomb(2, 2)
    assert genus(hc) == 1
    assert sorted(len(f) for f in faces(hc)) == [6, 6, 6, 6]
    for w in (t, hc):
        r = reduce_web(w)
        assert r.scalar.is_zero() and len(r.residuals) == 1
        assert residual_faces_ok(r.residuals[0][1])


def test_kuperberg_examples():
    loop = q(1) + ONE + q(-1)
    assert kuperberg(parse_diagram("O[1]")).scalar == loop
    assert kuperberg(KINK).scalar == loop
    assert kuperberg(parse_diagram("")).scalar == ONE
    assert kuperberg(parse_diagram(NAMED["right trefoil"])).scalar == parse_poly("q + q^2 + 2*q^3 + q^4 - q^6 - q^7")


def test_raw_kuperberg_is_writhe_shifted():
    for code in (NAMED["right trefoil"], NAMED["positive kink"], VIRTUAL_TREFOIL):
        d = parse_diagram(code)
        raw, norm = kuperberg(d, normalized=False), kuperberg(d)
        scaled = type(norm)()
        norm.scale_into(scaled, kuperberg_raw_factor(d))
        assert raw == scaled


def test_virtual_trefoil_kuperberg_has_residual():
    k = kuperberg(parse_diagram(VIRTUAL_TREFOIL))
    assert k.scalar == parse_poly("q + q^2 + q^3")
    ((c, w),) = k.residuals
    assert c == parse_poly("q^{7/2} - q^{5/2}")
    assert residual_faces_ok(w)


def test_arrow_examples():
    assert arrow(parse_diagram("O[1]")) == ONE
    t = parse_diagram(NAMED["right trefoil"])
    assert arrow(t) == jones(t) and not arrow(t).uses_k()
    vt = arrow(parse_diagram(VIRTUAL_TREFOIL))
    assert vt == parse_poly("A^{-4} + K1*A^{-6} - K1*A^{-10}")
    assert vt.k_indices() == {1}


def test_arrow_value_zigzag():
    b = smooth(KINK, {0: "B"})
    assert arrow_value(b) == jones_value(b)
    for code in NAMED.values():
        d = parse_diagram(code)
        for s in states(d):
            assert not arrow_value(smooth(d, s)).uses_k()


def test_knotoids_rejected():
    cut = parse_diagram(CUT_TREFOIL)
    with pytest.raises(UnsupportedError):
        arrow(cut)
    with pytest.raises(UnsupportedError):
        kuperberg(cut)


def test_q_to_a_substitution_is_integral():
    k = kuperberg(braid_closure("s1 S2 s1 S2"))
    sub = k.scalar.substitute("A", -6)
    assert all(e % 6 == 0 for e, _ in sub.terms)


def test_knotoid_jones_is_move_invariant():
    rng = random.Random(6)
    for code in (CUT_TREFOIL, "P[1] X[1,2,3,4] X[2,4,5,3] Q[5]"):
        d = parse_diagram(code)
        base = jones(d)
        for _ in range(8):
            cur = d
            for m in fuzz(d, rng, 4, 9):
                cur = apply_move(cur, m)
                assert jones(cur) == base
