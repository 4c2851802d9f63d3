import random

import pytest
from corpus import NAMED, VIRTUAL_TREFOIL, random_diagrams

from labelbracket import (
    MoveSpec,
    NoMatchError,
    apply_move,
    braid_closure,
    enumerate_move_sites,
    parse_diagram,
    serialize,
    writhe,
)
from labelbracket.diagram import check_planar
from labelbracket.moves import CLASSICAL_MOVES, MOVE_TYPES, random_move
from labelbracket.oracle import oracle_arrow, oracle_jones

CIRCLE = parse_diagram("O[1]")
TREFOIL = parse_diagram(NAMED["right trefoil"])


def test_curl_on_circle():
    k = apply_move(CIRCLE, MoveSpec("R1", (1, 1, "L")))
    assert k.n_classical == 1 and writhe(k) == 1
    (undo,) = enumerate_move_sites(k, "R1_inv")
    assert serialize(apply_move(k, undo)) == "O[1]"


def test_site_lists():
    assert enumerate_move_sites(CIRCLE, "R1")
    assert enumerate_move_sites(CIRCLE, "R3") == []
    assert enumerate_move_sites(TREFOIL, "R2")
    assert enumerate_move_sites(TREFOIL, "R2_inv") == []
    assert len(enumerate_move_sites(CIRCLE, "R1", limit=2)) == 2
    with pytest.raises(ValueError):
        enumerate_move_sites(CIRCLE, "R9")


def test_r2_on_trefoil_keeps_writhe():
    sites = [m for m in enumerate_move_sites(TREFOIL, "R2") if m.site[0] != m.site[1]]
    assert sites
    for m in sites[:6]:
        e = apply_move(TREFOIL, m)
        assert e.n_classical == 5 and writhe(e) == 3
        (back,) = [x for x in enumerate_move_sites(e, "R2_inv") if len(x.site) == 2][:1]
        assert apply_move(e, back).n_classical == 3


def test_no_match():
    with pytest.raises(NoMatchError):
        apply_move(TREFOIL, MoveSpec("R1_inv", (0,)))
    with pytest.raises(NoMatchError):
        apply_move(CIRCLE, MoveSpec("R3", (0,)))


def test_braid_closures():
    assert serialize(braid_closure("s1 s1 s1")) == serialize(TREFOIL)
    assert oracle_jones(braid_closure("s1 S2 s1 S2")) == oracle_jones(parse_diagram(NAMED["figure-eight"]))
    assert braid_closure("s1 s1 v1").to_code() == VIRTUAL_TREFOIL


def test_r3_changes_diagram_but_not_oracle():
    d = braid_closure("s1 s2 s1 S2 S2")
    sites = enumerate_move_sites(d, "R3")
    assert sites
    e = apply_move(d, sites[0])
    assert serialize(e) != serialize(d)
    assert oracle_jones(e) == oracle_jones(d)


def test_detour_is_composite():
    d = parse_diagram(VIRTUAL_TREFOIL)
    (m,) = enumerate_move_sites(d, "detour", limit=1)
    assert [x.type for x in m.site] == ["VR2", "VR2", "SVR3"]
    e = apply_move(d, m)
    assert e.n_classical == d.n_classical
    assert oracle_arrow(e) == oracle_arrow(d)


@pytest.mark.parametrize("virtual", [False, True])
def test_moves_keep_oracles(virtual):
    """Every move type, checked against the brute-force evaluators."""
    rng = random.Random(3)
    types = MOVE_TYPES if virtual else CLASSICAL_MOVES
    seen = set()
    for d in random_diagrams(40 + virtual, 25, 4, virtual):
        j, a = oracle_jones(d), oracle_arrow(d)
        for _ in range(3):
            m = random_move(d, rng, types)
            if m is None:
                break
            d = apply_move(d, m)
            check_planar(d) if not virtual else None
            seen.add(m.type)
            assert oracle_jones(d) == j
            assert oracle_arrow(d) == a
    assert len(seen) >= 5
