"""Oriented knot, virtual knot and knotoid diagrams.

Text format (one token per node, whitespace separated)::

    X[a,b,c,d]   classical crossing; slots counterclockwise, ``a`` is the
                 incoming under-strand arc, so ``c`` is the outgoing one
    V[a,b,c,d]   virtual crossing; slots counterclockwise, opposite slots
                 belong to one strand
    P[a]         knotoid leg: arc ``a`` starts here
    Q[a]         knotoid head: arc ``a`` ends here
    O[a]         crossing-free closed component

Every arc of a crossing or endpoint occurs exactly twice, once where it
starts and once where it ends.  Directions of strands that are not fixed by
an under-strand slot or an endpoint are propagated along their component;
a component that is never fixed that way (it only passes over, or only
through virtual crossings) is oriented by the usual PD numbering rule: the
strand at slots ``(b, d)`` enters at ``b`` when ``d == b + 1`` or when
``b - d > 1`` (wrap-around).

A crossing with slots ``a, b, c, d`` is positive exactly when the
over-strand leaves through ``b``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class DiagramError(ValueError):
    """Base class for malformed diagram input."""


class DiagramParseError(DiagramError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class StructuralError(DiagramError):
    pass


class PlanarityError(DiagramError):
    pass


class Kind(str, Enum):
    CLASSICAL = "classical"
    VIRTUAL = "virtual"
    KNOTOID_PLANAR = "knotoid-planar"
    KNOTOID_SPHERICAL = "knotoid-spherical"

    @property
    def is_knotoid(self) -> bool:
        return self in (Kind.KNOTOID_PLANAR, Kind.KNOTOID_SPHERICAL)


@dataclass(frozen=True)
class Crossing:
    flavor: str  # "X" classical, "V" virtual
    arcs: tuple[int, int, int, int]
    outgoing: tuple[bool, bool, bool, bool]

    @property
    def is_virtual(self) -> bool:
        return self.flavor == "V"

    @property
    def sign(self) -> int | None:
        if self.is_virtual:
            return None
        return 1 if self.outgoing[1] else -1

    def __str__(self):
        return f"{self.flavor}[{','.join(map(str, self.arcs))}]"


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...] = ()
    endpoints: tuple[tuple[str, int], ...] = ()  # ("P", arc) / ("Q", arc)
    loops: tuple[int, ...] = ()
    kind: Kind = Kind.CLASSICAL
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def n_classical(self) -> int:
        return sum(1 for c in self.crossings if not c.is_virtual)

    def arcs(self) -> list[int]:
        seen = set(self.loops)
        for c in self.crossings:
            seen.update(c.arcs)
        seen.update(a for _, a in self.endpoints)
        return sorted(seen)

    def signs(self) -> list[int]:
        return [c.sign for c in self.crossings if not c.is_virtual]

    def to_code(self) -> str:
        return serialize(self)

    def __str__(self):
        return self.to_code()

    def slot_graph(self) -> "SlotGraph":
        return SlotGraph.from_diagram(self)

    def components(self) -> int:
        """Number of link components (the open arc of a knotoid counts)."""
        return self.slot_graph().count_components()


def writhe(d: Diagram) -> int:
    return sum(c.sign for c in d.crossings if not c.is_virtual)


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*([XVPQO])\[\s*([^\]]*)\]\s*")


def parse_diagram(text: str, spherical: bool = False) -> Diagram:
    """Parse a diagram code; see the module docstring for the grammar."""
    pos = 0
    raw: list[tuple[str, list[int], int]] = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DiagramParseError(f"unexpected input {text[pos:pos + 12]!r}", pos)
        kind, body = m.group(1), m.group(2)
        try:
            nums = [int(t) for t in body.split(",")]
        except ValueError:
            raise DiagramParseError(f"bad arc list {body!r}", m.start(2)) from None
        if any(n <= 0 for n in nums):
            raise DiagramParseError("arc labels must be positive integers", m.start(2))
        want = 4 if kind in "XV" else 1
        if len(nums) != want:
            raise DiagramParseError(f"{kind} takes {want} arcs, got {len(nums)}", m.start(2))
        raw.append((kind, nums, m.start()))
        pos = m.end()
    return _build(raw, spherical)


def _build(raw, spherical: bool) -> Diagram:
    crossings = [(k, n) for k, n, _ in raw if k in "XV"]
    endpoints = [(k, n[0]) for k, n, _ in raw if k in "PQ"]
    loops = [n[0] for k, n, _ in raw if k == "O"]

    occ: dict[int, list[tuple]] = {}
    for i, (_, arcs) in enumerate(crossings):
        for s, a in enumerate(arcs):
            occ.setdefault(a, []).append(("c", i, s))
    for j, (_, a) in enumerate(endpoints):
        occ.setdefault(a, []).append(("e", j, 0))
    for a in loops:
        if a in occ:
            raise StructuralError(f"arc {a} is a closed loop but also used elsewhere")
        if loops.count(a) > 1:
            raise StructuralError(f"loop arc {a} given twice")
    for a, places in occ.items():
        if len(places) != 2:
            raise StructuralError(f"arc {a} occurs {len(places)} times, expected 2")
    if sum(1 for k, _ in endpoints if k == "P") > 1 or sum(1 for k, _ in endpoints if k == "Q") > 1:
        raise StructuralError("a knotoid has one leg and one head")
    if len(endpoints) not in (0, 2):
        raise StructuralError(f"arc {endpoints[0][1]}: a knotoid needs both P and Q endpoints")

    # direction[(i, s)] = True if the arc leaves crossing i through slot s
    direction: dict[tuple[int, int], bool] = {}
    for i, (k, _) in enumerate(crossings):
        if k == "X":
            direction[(i, 0)] = False
            direction[(i, 2)] = True

    def partner_slot(i, s):
        return (i, (s + 2) % 4)

    def other_end(place):
        a = crossings[place[1]][1][place[2]] if place[0] == "c" else endpoints[place[1]][1]
        p1, p2 = occ[a]
        return p2 if p1 == place else p1

    # endpoint constraints
    fixed: list[tuple[int, int]] = []
    for j, (k, a) in enumerate(endpoints):
        other = other_end(("e", j, 0))
        if other[0] == "c":
            want = k == "Q"  # arc ends at the head, so it leaves the crossing
            key = (other[1], other[2])
            if direction.get(key, want) != want:
                raise StructuralError(f"arc {a} has inconsistent orientation at its endpoint")
            direction[key] = want
            fixed.append(key)
        elif k == "P" and endpoints[other[1]][0] != "Q":
            raise StructuralError(f"arc {a} joins two endpoints of the same type")
    fixed.extend(k for k in list(direction))

    def propagate(start):
        stack = [start]
        while stack:
            i, s = stack.pop()
            val = direction[(i, s)]
            for nxt, nval in ((partner_slot(i, s), not val),):
                if nxt in direction:
                    if direction[nxt] != nval:
                        raise StructuralError(
                            f"arc {crossings[i][1][nxt[1]]} cannot be oriented consistently"
                        )
                else:
                    direction[nxt] = nval
                    stack.append(nxt)
            other = other_end(("c", i, s))
            if other[0] == "c":
                key = (other[1], other[2])
                if key in direction:
                    if direction[key] == val:
                        raise StructuralError(
                            f"arc {crossings[i][1][s]} is entered (or left) at both ends"
                        )
                else:
                    direction[key] = not val
                    stack.append(key)

    for key in fixed:
        propagate(key)
    for i, (k, arcs) in enumerate(crossings):
        for s in (1, 0):
            if (i, s) not in direction:
                b, d = arcs[s], arcs[s + 2]
                enters_first = d == b + 1 or b - d > 1
                direction[(i, s)] = not enters_first
                propagate((i, s))

    out = []
    for i, (k, arcs) in enumerate(crossings):
        flags = tuple(direction[(i, s)] for s in range(4))
        arcs_t = tuple(arcs)
        if k == "V" and flags[0]:
            arcs_t = arcs_t[2:] + arcs_t[:2]
            flags = flags[2:] + flags[:2]
        out.append(Crossing(k, arcs_t, flags))

    has_v = any(k == "V" for k, _ in crossings)
    if endpoints:
        if has_v:
            raise StructuralError("virtual knotoids are not supported")
        kind = Kind.KNOTOID_SPHERICAL if spherical else Kind.KNOTOID_PLANAR
    else:
        kind = Kind.VIRTUAL if has_v else Kind.CLASSICAL
    d = Diagram(tuple(out), tuple(endpoints), tuple(loops), kind)
    check_planar(d)
    return d


# --------------------------------------------------------------------------
# faces


def darts(d: Diagram) -> Iterator[tuple[int, bool]]:
    for a in d.arcs():
        if a not in d.loops:
            yield (a, True)
            yield (a, False)


def _ends(d: Diagram) -> dict[int, dict[bool, tuple]]:
    """arc -> {True: place of its head, False: place of its tail}."""
    ends: dict[int, dict[bool, tuple]] = {}
    for i, c in enumerate(d.crossings):
        for s, a in enumerate(c.arcs):
            ends.setdefault(a, {})[not c.outgoing[s]] = ("c", i, s)
    for j, (k, a) in enumerate(d.endpoints):
        ends.setdefault(a, {})[k == "Q"] = ("e", j, 0)
    return ends


def faces(d: Diagram) -> list[list[tuple[int, bool]]]:
    """Faces as cycles of darts ``(arc, forward)`` with the face on the left.

    Arriving at slot ``s`` of a crossing, the walk leaves through slot
    ``s - 1``; at an endpoint it turns back along the same arc.
    """
    if "faces" in d._cache:
        return d._cache["faces"]
    ends = _ends(d)
    seen = set()
    result = []
    for start in darts(d):
        if start in seen:
            continue
        cyc = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            cyc.append(dart)
            arc, fwd = dart
            place = ends[arc][fwd]
            if place[0] == "e":
                dart = (arc, not fwd)
                continue
            _, i, s = place
            c = d.crossings[i]
            t = (s - 1) % 4
            dart = (c.arcs[t], c.outgoing[t])
        result.append(cyc)
    d._cache["faces"] = result
    return result


def check_planar(d: Diagram) -> None:
    """Each connected piece must trace to Euler characteristic 2."""
    sg = SlotGraph.from_diagram(d)
    nodes_of_piece = sg.pieces()
    arc_piece: dict[int, int] = {}
    ends = _ends(d)
    node_index = {("c", i): i for i in range(len(d.crossings))}
    node_index.update({("e", j): len(d.crossings) + j for j in range(len(d.endpoints))})
    piece_of_node = {}
    for p, nodes in enumerate(nodes_of_piece):
        for n in nodes:
            piece_of_node[n] = p
    for a, e in ends.items():
        place = e[True]
        arc_piece[a] = piece_of_node[node_index[(place[0], place[1])]]
    chi = [0] * len(nodes_of_piece)
    for n, p in piece_of_node.items():
        chi[p] += 1
    for a, p in arc_piece.items():
        chi[p] -= 1
    for f in faces(d):
        chi[arc_piece[f[0][0]]] += 1
    for p, x in enumerate(chi):
        if x != 2:
            raise PlanarityError(
                f"rotation system has Euler characteristic {x} on a piece, not 2 (not a sphere diagram)"
            )


# --------------------------------------------------------------------------
# serialization


def serialize(d: Diagram) -> str:
    """Deterministic code with arcs renumbered along components."""
    return " ".join(_tokens(SlotGraph.from_diagram(d).to_diagram(kind=d.kind)))


def _tokens(d: Diagram) -> list[str]:
    toks = [str(c) for c in d.crossings]
    toks.sort(key=lambda t: (t[0] != "X", [int(x) for x in t[2:-1].split(",")]))
    toks += [f"{k}[{a}]" for k, a in sorted(d.endpoints)]
    toks += [f"O[{a}]" for a in sorted(d.loops)]
    return toks


# --------------------------------------------------------------------------
# mutable slot graph used for moves


@dataclass
class _Node:
    flavor: str  # "X", "V", "P", "Q", "pass"
    outgoing: list[bool]


class SlotGraph:
    """Crossings and endpoints joined by arcs, as a slot pairing.

    ``head[(n, s)]`` is the slot where the arc leaving node ``n`` through
    slot ``s`` arrives.  ``pass`` nodes have slot 0 in and slot 1 out and
    vanish when converting back to a :class:`Diagram`.
    """

    def __init__(self):
        self.nodes: list[_Node] = []
        self.head: dict[tuple[int, int], tuple[int, int]] = {}
        self.loops = 0

    @classmethod
    def from_diagram(cls, d: Diagram) -> "SlotGraph":
        g = cls()
        tail: dict[int, tuple[int, int]] = {}
        hd: dict[int, tuple[int, int]] = {}
        for i, c in enumerate(d.crossings):
            g.nodes.append(_Node(c.flavor, list(c.outgoing)))
            for s, a in enumerate(c.arcs):
                (tail if c.outgoing[s] else hd)[a] = (i, s)
        for k, a in d.endpoints:
            n = len(g.nodes)
            g.nodes.append(_Node(k, [k == "P"]))
            (tail if k == "P" else hd)[a] = (n, 0)
        for a, t in tail.items():
            g.head[t] = hd[a]
        g.loops = len(d.loops)
        return g

    def copy(self) -> "SlotGraph":
        g = SlotGraph()
        g.nodes = [_Node(n.flavor, list(n.outgoing)) for n in self.nodes]
        g.head = dict(self.head)
        g.loops = self.loops
        return g

    def add_node(self, flavor: str, outgoing) -> int:
        self.nodes.append(_Node(flavor, list(outgoing)))
        return len(self.nodes) - 1

    def tail_of(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {h: t for t, h in self.head.items()}

    def next_out(self, n: int, s: int) -> tuple[int, int] | None:
        """Slot through which a strand entering ``(n, s)`` leaves."""
        node = self.nodes[n]
        if node.flavor == "pass":
            return (n, 1)
        if node.flavor in "PQ":
            return None
        return (n, (s + 2) % 4)

    def pieces(self) -> list[set[int]]:
        parent = list(range(len(self.nodes)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (n1, _), (n2, _) in self.head.items():
            parent[find(n1)] = find(n2)
        groups: dict[int, set[int]] = {}
        for n in range(len(self.nodes)):
            groups.setdefault(find(n), set()).add(n)
        return list(groups.values())

    def strands(self) -> list[tuple[list[tuple[int, int]], bool]]:
        """Components as lists of out-slots in traversal order; flag = closed."""
        seen = set()
        comps = []
        starts = [(n, 0) for n, node in enumerate(self.nodes) if node.flavor == "P"]
        starts += sorted(self.head)
        for st in starts:
            if st in seen:
                continue
            seq = []
            cur = st
            closed = True
            while True:
                seen.add(cur)
                seq.append(cur)
                h = self.head[cur]
                nxt = self.next_out(*h)
                if nxt is None:
                    closed = False
                    break
                if nxt == st:
                    break
                cur = nxt
            comps.append((seq, closed))
        return comps

    def count_components(self) -> int:
        comps = self.strands()
        real = [s for s, _ in comps if any(self.nodes[n].flavor != "pass" for n, _ in s)]
        pass_only = len(comps) - len(real)
        return len(real) + pass_only + self.loops

    def to_diagram(self, kind: Kind | None = None) -> Diagram:
        keep = [n for n, node in enumerate(self.nodes) if node.flavor != "pass"]
        ep_nodes = [n for n in keep if self.nodes[n].flavor in "PQ"]
        arc_at: dict[tuple[int, int], int] = {}
        next_arc = 1
        loops = []
        for seq, _closed in self.strands():
            real = [sl for sl in seq if self.nodes[sl[0]].flavor != "pass"]
            if not real:
                loops.append(next_arc)
                next_arc += 1
                continue
            for sl in real:
                arc_at[sl] = arc_at[self.follow(sl)] = next_arc
                next_arc += 1
        crossings = []
        for n in keep:
            node = self.nodes[n]
            if node.flavor not in "XV":
                continue
            arcs = tuple(arc_at[(n, s)] for s in range(4))
            crossings.append(Crossing(node.flavor, arcs, tuple(node.outgoing)))
        endpoints = tuple(
            (self.nodes[n].flavor, arc_at[(n, 0)]) for n in ep_nodes
        )
        loops += list(range(next_arc, next_arc + self.loops))
        if kind is None:
            if endpoints:
                kind = Kind.KNOTOID_PLANAR
            elif any(c.is_virtual for c in crossings):
                kind = Kind.VIRTUAL
            else:
                kind = Kind.CLASSICAL
        elif kind in (Kind.CLASSICAL, Kind.VIRTUAL):
            kind = Kind.VIRTUAL if any(c.is_virtual for c in crossings) else kind
        return Diagram(tuple(crossings), endpoints, tuple(loops), kind)

    def follow(self, slot: tuple[int, int]) -> tuple[int, int]:
        """First non-pass in-slot reached from out-slot ``slot``."""
        h = self.head[slot]
        while self.nodes[h[0]].flavor == "pass":
            h = self.head[(h[0], 1)]
        return h
