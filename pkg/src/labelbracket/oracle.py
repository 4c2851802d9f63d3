"""Brute-force reference evaluators used for cross-validation.

Both walk the 2^n smoothings of a diagram directly on crossing slots and
share nothing with the label-graph pipeline except the polynomial type.
Virtual crossings are passed straight through while tracing circles.
"""

from __future__ import annotations

from itertools import product

from .algebra import LOOP_A, A, LaurentPoly
from .diagram import Diagram, writhe

DEFAULT_CAPACITY = 24


class OracleCapacityError(ValueError):
    pass


def _partner_maps(d: Diagram):
    """arc -> the two (node, slot) places; endpoints use node ("e", j)."""
    places: dict[int, list] = {}
    for i, c in enumerate(d.crossings):
        for s, a in enumerate(c.arcs):
            places.setdefault(a, []).append((i, s))
    for j, (_, a) in enumerate(d.endpoints):
        places.setdefault(a, []).append((("e", j), 0))
    return places


def _trace(d: Diagram, state: dict[int, int]):
    """Trace the smoothed curves of one state.

    ``state[i]`` is 0 for the A-smoothing (slots 0-1, 2-3 joined) and 1 for
    the B-smoothing (slots 1-2, 3-0).  Yields ``(closed, tokens)`` per curve,
    where ``tokens`` lists "L"/"R" for each pass through a disoriented
    smoothing, according to the side of the crossing center.
    """
    places = _partner_maps(d)

    def other_place(node, s):
        a = d.crossings[node].arcs[s] if not isinstance(node, tuple) else d.endpoints[node[1]][1]
        p, q = places[a]
        return q if p == (node, s) else p

    def turn(i, s):
        c = d.crossings[i]
        if c.is_virtual:
            return (s + 2) % 4
        if state[i] == 0:
            return s ^ 1
        return {1: 2, 2: 1, 3: 0, 0: 3}[s]

    seen = set()
    curves = []
    starts = [(("e", j), 0) for j, (k, _) in enumerate(d.endpoints) if k == "P"]
    starts += [(i, s) for i in range(len(d.crossings)) for s in range(4)]
    for start in starts:
        if start in seen:
            continue
        tokens = []
        closed = True
        node, s = start
        # walk: we stand at (node, s) and leave along the arc there
        while True:
            seen.add((node, s))
            node, s = other_place(node, s)
            seen.add((node, s))
            if isinstance(node, tuple):
                closed = False
                break
            t = turn(node, s)
            c = d.crossings[node]
            if not c.is_virtual and c.outgoing[s] == c.outgoing[t]:
                tokens.append("L" if t == (s + 1) % 4 else "R")
            s = t
            if (node, s) == start:
                break
        curves.append((closed, tokens))
    return curves


def _states(d: Diagram, capacity: int):
    classical = [i for i, c in enumerate(d.crossings) if not c.is_virtual]
    if len(classical) > capacity:
        raise OracleCapacityError(f"{len(classical)} classical crossings exceed the limit of {capacity}")
    for bits in product((0, 1), repeat=len(classical)):
        yield dict(zip(classical, bits)), bits.count(0) - bits.count(1)


def oracle_kauffman(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> LaurentPoly:
    """Unnormalized Kauffman bracket, one circle = 1.

    For a knotoid the open curve plays the role of the normalizing circle.
    """
    total = LaurentPoly()
    loops = len(d.loops)
    for state, a_minus_b in _states(d, capacity):
        curves = _trace(d, state)
        closed = sum(1 for c, _ in curves if c) + loops
        n = closed if d.endpoints else closed - 1
        if n < 0:
            raise ValueError("the empty diagram has no bracket")
        total = total + A(a_minus_b) * LOOP_A ** n
    return total


def oracle_arrow(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> LaurentPoly:
    """Normalized arrow polynomial by direct cusp counting."""
    if d.endpoints:
        raise ValueError("the arrow polynomial is not defined for knotoids")
    total = LaurentPoly()
    loops = len(d.loops)
    for state, a_minus_b in _states(d, capacity):
        curves = _trace(d, state)
        term = A(a_minus_b) * LOOP_A ** (len(curves) + loops - 1)
        for _, tokens in curves:
            m = _cusp_index(tokens)
            if m:
                term = term * LaurentPoly.K(m)
        total = total + term
    return total * _normalizer(d)


def _cusp_index(tokens: list[str]) -> int:
    """Half the irreducible cusp count of one curve.

    The strand direction flips at every cusp, so a side read off the
    traversal is compared against the alternating parity; two neighbours
    on the same side of the curve form a removable zigzag.
    """
    if len(tokens) % 2:
        raise AssertionError("odd number of cusps on a state curve")
    total = sum((1 if t == "L" else -1) * (-1) ** i for i, t in enumerate(tokens))
    return abs(total) // 2


def _normalizer(d: Diagram) -> LaurentPoly:
    return A(-3, -1) ** writhe(d) if writhe(d) >= 0 else A(3, -1) ** -writhe(d)


def oracle_jones(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> LaurentPoly:
    """``(-A)^{-3w}`` times the Kauffman bracket."""
    return oracle_kauffman(d, capacity) * _normalizer(d)
