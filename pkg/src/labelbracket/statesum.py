"""Smoothing of crossings into label graphs and the state sum."""

from __future__ import annotations

from itertools import product
from typing import Iterator, Mapping

from .diagram import Diagram, Kind
from .labelgraph import FormalSum, GraphBuilder, LabelGraph

DEFAULT_CAPACITY = 24

# slot pairs joined by each smoothing; the second slot is ccw after the first
PAIRS = {"A": ((0, 1), (2, 3)), "B": ((1, 2), (3, 0))}


class CapacityError(ValueError):
    """Too many classical crossings for an exhaustive state sum."""


State = Mapping[int, str]


def context_of(d: Diagram) -> str:
    return {
        Kind.CLASSICAL: "C",
        Kind.VIRTUAL: "V",
        Kind.KNOTOID_PLANAR: "P",
        Kind.KNOTOID_SPHERICAL: "S",
    }[d.kind]


def classical_indices(d: Diagram) -> list[int]:
    return [i for i, c in enumerate(d.crossings) if not c.is_virtual]


def states(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> Iterator[dict[int, str]]:
    """All states in binary-counter order (the last crossing flips fastest)."""
    idx = classical_indices(d)
    if len(idx) > capacity:
        raise CapacityError(f"{len(idx)} classical crossings exceed the limit of {capacity}")
    for bits in product("AB", repeat=len(idx)):
        yield dict(zip(idx, bits))


def smooth(d: Diagram, s: State, arc_halves: dict | None = None) -> LabelGraph:
    """Label graph of one state.

    Each classical crossing becomes two trivalent vertices joined by a thin
    edge: empty circles for marker A, solid for B.  The thin edge is
    oriented, from the source vertex to the sink vertex, when the two arcs
    it joins are not coherently oriented.  ``arc_halves``, if given, is
    filled with ``arc -> (half-edge at the tail, half-edge at the head)``.
    """
    b = GraphBuilder()
    thick: dict[int, dict[bool, int]] = {}

    def attach(arc, h, outgoing):
        thick.setdefault(arc, {})[outgoing] = h

    for i, c in enumerate(d.crossings):
        kinds = ["o" if f else "i" for f in c.outgoing]
        if c.is_virtual:
            hs = b.vertex("v", kinds)
            for sl in range(4):
                attach(c.arcs[sl], hs[sl], c.outgoing[sl])
            continue
        mark = s[i]
        if mark not in PAIRS:
            raise ValueError(f"marker {mark!r} is not A or B")
        color = "e" if mark == "A" else "s"
        thin_halves = []
        for x, y in PAIRS[mark]:
            kx, ky = kinds[x], kinds[y]
            if kx != ky:
                tk = "t"
            else:
                tk = "to" if kx == "o" else "ti"
            hy, ht, hx = b.vertex(color, (ky, tk, kx))
            attach(c.arcs[x], hx, c.outgoing[x])
            attach(c.arcs[y], hy, c.outgoing[y])
            thin_halves.append(ht)
        b.join(*thin_halves)
    for k, a in d.endpoints:
        (h,) = b.vertex(k, ("o" if k == "P" else "i",))
        attach(a, h, k == "P")
    for a, ends in thick.items():
        b.join(ends[True], ends[False])
        if arc_halves is not None:
            arc_halves[a] = (ends[True], ends[False])
    b.loops = len(d.loops)
    return b.build()


def state_sum(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> FormalSum:
    """Sum of all state graphs, each with coefficient one."""
    out = FormalSum(context_of(d))
    for s in states(d, capacity):
        out.add(smooth(d, s), 1)
    return out
