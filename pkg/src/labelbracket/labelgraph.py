"""Label graphs, canonical keys and integer formal sums of label graphs.

A label graph is stored as a ribbon graph on half-edges.  Each vertex lists
its half-edges counterclockwise; ``twin`` pairs half-edges into edges and
``kind`` records, per half-edge, the edge class seen from its vertex:

    "o" / "i"    thick edge leaving / entering the vertex
    "t"          unoriented thin edge
    "to" / "ti"  oriented thin edge leaving / entering the vertex

Vertex types:

    "e" / "s"    trivalent label vertex with an empty / solid circle
    "v"          4-valent virtual vertex (opposite half-edges continue)
    "P" / "Q"    knotoid leg / head
    "b"          bivalent bead, a label vertex whose thin edge was removed
    "c"          bivalent cusp; the # region sits ccw after rot[0]
    "w"          trivalent web vertex (all edges thick and oriented)
    "p<k>"       univalent port of a fragment, used by the reducer

Vertex-free closed thick curves are kept as a count in ``loops``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

THICK = ("o", "i")
THIN = ("t", "to", "ti")
FLIP = {"o": "i", "i": "o", "t": "t", "to": "ti", "ti": "to"}
CONTEXTS = ("C", "V", "P", "S")


class LabelGraphError(ValueError):
    """A graph violates the label-graph invariants."""


@dataclass(frozen=True, eq=False)
class LabelGraph:
    vtype: tuple[str, ...]
    rot: tuple[tuple[int, ...], ...]
    twin: tuple[int, ...]
    kind: tuple[str, ...]
    loops: int = 0
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    # structure ------------------------------------------------------------
    @property
    def hv(self) -> tuple[int, ...]:
        """Vertex of each half-edge."""
        if "hv" not in self._cache:
            out = [0] * len(self.twin)
            for v, hs in enumerate(self.rot):
                for h in hs:
                    out[h] = v
            self._cache["hv"] = tuple(out)
        return self._cache["hv"]

    @property
    def pos(self) -> tuple[int, ...]:
        """Index of each half-edge inside its vertex rotation."""
        if "pos" not in self._cache:
            out = [0] * len(self.twin)
            for hs in self.rot:
                for i, h in enumerate(hs):
                    out[h] = i
            self._cache["pos"] = tuple(out)
        return self._cache["pos"]

    def ccw_next(self, h: int) -> int:
        r = self.rot[self.hv[h]]
        return r[(self.pos[h] + 1) % len(r)]

    @property
    def n_vertices(self) -> int:
        return len(self.vtype)

    def count(self, *types: str) -> int:
        return sum(1 for t in self.vtype if t in types)

    @property
    def n_label(self) -> int:
        return self.count("e", "s")

    def thin_edges(self) -> Iterator[tuple[int, int]]:
        for h, k in enumerate(self.kind):
            if k in ("t", "to") and (k == "to" or h < self.twin[h]):
                yield h, self.twin[h]

    def thin_half(self, v: int) -> int:
        return next(h for h in self.rot[v] if self.kind[h] in THIN)

    def key(self):
        return canonical_key(self)

    def __eq__(self, other):
        if not isinstance(other, LabelGraph):
            return NotImplemented
        return canonical_key(self) == canonical_key(other)

    def __hash__(self):
        return hash(canonical_key(self))

    def __str__(self):
        return serialize_graph(self)

    def __repr__(self):
        return f"{type(self).__name__}({len(self.vtype)} vertices, {self.loops} loops)"


class Web(LabelGraph):
    """Trivalent graph with every vertex a source or a sink, plus free loops."""

    def validate(self):
        for v, t in enumerate(self.vtype):
            ks = {self.kind[h] for h in self.rot[v]}
            if t != "w" or len(self.rot[v]) != 3 or len(ks) != 1:
                raise LabelGraphError(f"web vertex {v} is not a source or sink")


# --------------------------------------------------------------------------
# construction


class GraphBuilder:
    """Mutable helper: add vertices with half-edge kinds, then join half-edges."""

    def __init__(self):
        self.vtype: list[str] = []
        self.rot: list[list[int]] = []
        self.kind: list[str] = []
        self.twin: list[int | None] = []
        self.loops = 0

    def vertex(self, vtype: str, kinds: Iterable[str]) -> list[int]:
        hs = []
        for k in kinds:
            hs.append(len(self.kind))
            self.kind.append(k)
            self.twin.append(None)
        self.vtype.append(vtype)
        self.rot.append(hs)
        return hs

    def join(self, a: int, b: int) -> None:
        if self.twin[a] is not None or self.twin[b] is not None:
            raise LabelGraphError("half-edge joined twice")
        if FLIP[self.kind[a]] != self.kind[b]:
            raise LabelGraphError(f"cannot join a {self.kind[a]} half-edge to a {self.kind[b]} half-edge")
        self.twin[a], self.twin[b] = b, a

    def build(self, cls=LabelGraph) -> LabelGraph:
        if any(t is None for t in self.twin):
            raise LabelGraphError("unjoined half-edge")
        return cls(tuple(self.vtype), tuple(tuple(r) for r in self.rot), tuple(self.twin), tuple(self.kind), self.loops)


def union(*graphs: LabelGraph) -> tuple[LabelGraph, list[int], list[int]]:
    """Disjoint union; also returns the vertex and half-edge offsets."""
    vtype, rot, twin, kind = [], [], [], []
    voff, hoff = [], []
    loops = 0
    for g in graphs:
        vo, ho = len(vtype), len(twin)
        voff.append(vo)
        hoff.append(ho)
        vtype += g.vtype
        rot += [tuple(h + ho for h in r) for r in g.rot]
        twin += [t + ho for t in g.twin]
        kind += g.kind
        loops += g.loops
    return LabelGraph(tuple(vtype), tuple(rot), tuple(twin), tuple(kind), loops), voff, hoff


def splice(
    g: LabelGraph,
    removed: Iterable[int],
    through: Mapping[int, int],
    retype: Mapping[int, str] | None = None,
    cls=LabelGraph,
) -> LabelGraph:
    """Delete vertices and reconnect the strands passing through them.

    A walk that enters a removed vertex through half-edge ``h`` leaves it
    through ``through[h]``; half-edges of removed vertices without an entry
    are dropped.  Closed walks made only of removed half-edges become free
    loops.  ``through`` should be symmetric.
    """
    gone = set(removed)
    hv = g.hv
    keep_h = [h for h in range(len(g.twin)) if hv[h] not in gone]
    new_id = {h: i for i, h in enumerate(keep_h)}

    def land(h: int) -> int | None:
        t = g.twin[h]
        steps = 0
        while hv[t] in gone:
            if t not in through:
                return None
            t = g.twin[through[t]]
            steps += 1
            if steps > len(g.twin):
                raise LabelGraphError("splice walk does not terminate")
        return t

    twin = [0] * len(keep_h)
    for h in keep_h:
        t = land(h)
        if t is None:
            raise LabelGraphError(f"half-edge {h} leads into a removed vertex with no exit")
        twin[new_id[h]] = new_id[t]

    loops = g.loops
    seen = set()
    for h in through:
        if h in seen or hv[h] not in gone:
            continue
        # follow the walk out of h; it is a free loop if it never meets kept vertices
        cur, closed = h, True
        walk = []
        while True:
            walk.append(cur)
            t = g.twin[cur]
            if hv[t] not in gone:
                closed = False
                break
            walk.append(t)
            if t not in through:
                closed = False
                break
            cur = through[t]
            if cur == h:
                break
            if len(walk) > 2 * len(g.twin):
                raise LabelGraphError("splice walk does not terminate")
        if closed:
            loops += 1
            seen.update(walk)
            seen.update(through[x] for x in walk if x in through)
    keep_v = [v for v in range(len(g.vtype)) if v not in gone]
    retype = retype or {}
    vtype = tuple(retype.get(v, g.vtype[v]) for v in keep_v)
    rot = tuple(tuple(new_id[h] for h in g.rot[v]) for v in keep_v)
    kind = tuple(g.kind[h] for h in keep_h)
    return cls(vtype, rot, tuple(twin), kind, loops)


def erase_virtual(g: LabelGraph, beads: bool = True) -> LabelGraph:
    """Remove virtual vertices (and beads) letting strands pass through."""
    removed, through = [], {}
    for v, t in enumerate(g.vtype):
        if t == "v":
            r = g.rot[v]
            for i in range(4):
                through[r[i]] = r[(i + 2) % 4]
            removed.append(v)
        elif t == "b" and beads:
            a, b = g.rot[v]
            through[a], through[b] = b, a
            removed.append(v)
    if not removed:
        return g
    return splice(g, removed, through, cls=type(g))


# --------------------------------------------------------------------------
# canonical keys


def _component_codes(g: LabelGraph) -> list[tuple]:
    hv, pos = g.hv, g.pos
    seen_v: set[int] = set()
    codes = []
    for v0 in range(len(g.vtype)):
        if v0 in seen_v:
            continue
        best = None
        stack, comp = [v0], {v0}
        while stack:
            v = stack.pop()
            for h in g.rot[v]:
                w = hv[g.twin[h]]
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen_v |= comp
        roots = [h for v in comp for h in g.rot[v]]
        if not roots:
            best = ((g.vtype[v0],),)
        for root in roots:
            code = _code_from(g, root, best, hv, pos)
            if code is not None and (best is None or code < best):
                best = code
        codes.append(best)
    return codes


def _code_from(g: LabelGraph, root: int, bound, hv, pos):
    num = {hv[root]: 0}
    entry = {hv[root]: pos[root]}
    order = [hv[root]]
    code = []
    i = 0
    while i < len(order):
        v = order[i]
        r = g.rot[v]
        n = len(r)
        e = entry[v]
        item = [g.vtype[v], n]
        for j in range(n):
            h = r[(e + j) % n]
            t = g.twin[h]
            w = hv[t]
            if w not in num:
                num[w] = len(order)
                entry[w] = pos[t]
                order.append(w)
            item.append((g.kind[h], num[w], (pos[t] - entry[w]) % len(g.rot[w])))
        code.append(tuple(item))
        if bound is not None:
            # prune: a prefix already larger than the best code loses
            k = len(code) - 1
            if k < len(bound):
                if code[k] > bound[k]:
                    return None
                if code[k] < bound[k]:
                    bound = None
        i += 1
    return tuple(code)


def canonical_key(g: LabelGraph) -> tuple:
    """Isomorphism key of the typed ribbon graph after erasing virtual vertices.

    Orientation-reversing (mirror) isomorphisms are not identified.
    """
    if "key" in g._cache:
        return g._cache["key"]
    h = erase_virtual(g)
    codes = sorted(_component_codes(h))
    key = (tuple(codes), h.loops)
    g._cache["key"] = key
    return key


# --------------------------------------------------------------------------
# invariants


def vertex_class(g: LabelGraph, v: int) -> str:
    """Name V.1 .. V.8 of a trivalent label vertex."""
    t = g.vtype[v]
    th = g.thin_half(v)
    kinds = [g.kind[h] for h in g.rot[v] if h != th]
    solid = t == "s"
    if g.kind[th] == "t":
        h_in = next(h for h in g.rot[v] if g.kind[h] == "i")
        h_out = next(h for h in g.rot[v] if g.kind[h] == "o")
        left = g.ccw_next(h_in) == h_out
        return ("V.2" if solid else "V.1") if left else ("V.4" if solid else "V.3")
    if kinds == ["o", "o"]:
        return "V.6" if solid else "V.5"
    return "V.8" if solid else "V.7"


def validate(g: LabelGraph) -> None:
    """Raise :class:`LabelGraphError` on any violated label-graph invariant."""
    hv = g.hv
    for h, t in enumerate(g.twin):
        if g.twin[t] != h or t == h:
            raise LabelGraphError(f"half-edge {h} has an inconsistent twin")
        if FLIP[g.kind[h]] != g.kind[t]:
            raise LabelGraphError(f"edge {h}-{t} has mismatched orientation data")
    n_label = 0
    for v, t in enumerate(g.vtype):
        ks = [g.kind[h] for h in g.rot[v]]
        if t in ("e", "s"):
            n_label += 1
            thin = [k for k in ks if k in THIN]
            thick = [k for k in ks if k in THICK]
            if len(ks) != 3 or len(thin) != 1:
                raise LabelGraphError(f"label vertex {v} needs one thin and two thick edges")
            other = hv[g.twin[g.thin_half(v)]]
            if g.vtype[other] != t:
                raise LabelGraphError(f"thin edge at vertex {v} joins different circle colors")
            coherent = sorted(thick) == ["i", "o"]
            if coherent != (thin[0] == "t"):
                raise LabelGraphError(f"thin edge at vertex {v} is oriented iff the thick edges are not coherent")
            if not coherent:
                indeg = ks.count("i") + ks.count("ti")
                if indeg not in (0, 3):
                    raise LabelGraphError(f"vertex {v} has in-degree {indeg}")
        elif t == "v":
            if len(ks) != 4 or any(k not in THICK for k in ks):
                raise LabelGraphError(f"virtual vertex {v} must be 4-valent and thick")
            r = g.rot[v]
            for i in (0, 1):
                if {g.kind[r[i]], g.kind[r[i + 2]]} != {"i", "o"}:
                    raise LabelGraphError(f"virtual vertex {v} breaks strand orientation")
        elif t in ("P", "Q"):
            if ks != (["o"] if t == "P" else ["i"]):
                raise LabelGraphError(f"endpoint {v} has wrong valence or orientation")
        else:
            raise LabelGraphError(f"unexpected vertex type {t!r} in a label graph")
    if n_label % 2:
        raise LabelGraphError("odd number of trivalent vertices")


# --------------------------------------------------------------------------
# thin-edge consumption and circle counting


def delete_thin(g: LabelGraph, which: str = "all") -> LabelGraph:
    """Remove thin edges, turning their endpoints into beads or cusps.

    ``which="all"`` removes every thin edge; unoriented edges leave beads,
    oriented ones leave cusps.  ``which="unoriented"`` only removes the
    unoriented thin edges.
    """
    removed = []
    for v, t in enumerate(g.vtype):
        if t not in ("e", "s"):
            continue
        th = g.thin_half(v)
        if which == "unoriented" and g.kind[th] != "t":
            continue
        removed.append(v)
    if not removed:
        return g
    # rebuild with bivalent vertices in place of the label vertices
    b = GraphBuilder()
    hmap = {}
    gone = set(removed)
    for v, t in enumerate(g.vtype):
        if v in gone:
            r = g.rot[v]
            th = g.thin_half(v)
            i = r.index(th)
            # rotation (y, thin, x) becomes (y, x); the # gap follows y
            y, x = r[(i - 1) % 3], r[(i + 1) % 3]
            vt = "b" if g.kind[th] == "t" else "c"
            hs = b.vertex(vt, (g.kind[y], g.kind[x]))
            hmap[y], hmap[x] = hs
        else:
            hs = b.vertex(t, (g.kind[h] for h in g.rot[v]))
            for h, nh in zip(g.rot[v], hs):
                hmap[h] = nh
    for h, t in enumerate(g.twin):
        if h < t and h in hmap and t in hmap:
            b.join(hmap[h], hmap[t])
    b.loops = g.loops
    return b.build()


@dataclass(frozen=True)
class CircleData:
    closed: int
    open: int
    cusps: tuple[tuple[str, ...], ...]  # per component, "L"/"R" per cusp


def circle_count(g: LabelGraph) -> CircleData:
    """Trace the thick curves of a graph whose thin edges were consumed.

    Virtual vertices pass strands straight through, beads are ignored and
    each cusp contributes an "L" or "R" token telling on which side of the
    direction of travel its # region lies.
    """
    if any(k in THIN for k in g.kind):
        raise LabelGraphError("circle_count needs a graph without thin edges")
    hv, pos = g.hv, g.pos
    seen = set()
    closed = g.loops
    opened = 0
    cusps = [()] * g.loops

    def exit_of(t: int) -> int | None:
        v = hv[t]
        vt, r = g.vtype[v], g.rot[v]
        if vt == "v":
            return r[(pos[t] + 2) % 4]
        if vt in ("b", "c"):
            return r[1 - pos[t]]
        if vt in ("P", "Q"):
            return None
        raise LabelGraphError(f"vertex type {vt!r} cannot be traced")

    starts = [g.rot[v][0] for v, t in enumerate(g.vtype) if t == "P"]
    starts += [h for h in range(len(g.twin))]
    for st in starts:
        if st in seen:
            continue
        toks = []
        h = st
        is_open = g.vtype[hv[st]] == "P"
        while True:
            seen.add(h)
            t = g.twin[h]
            seen.add(t)
            if g.vtype[hv[t]] == "c":
                toks.append("L" if pos[t] == 1 else "R")
            nxt = exit_of(t)
            if nxt is None:
                break
            h = nxt
            if h == st:
                break
        if is_open:
            opened += 1
        else:
            closed += 1
        cusps.append(tuple(toks))
    return CircleData(closed, opened, tuple(cusps))


def cusp_index(tokens: Iterable[str]) -> int:
    """Half the number of cusps left after cancelling zigzags."""
    tokens = list(tokens)
    if len(tokens) % 2:
        raise AssertionError("odd number of cusps on one component")
    s = 0
    for i, t in enumerate(tokens):
        s += (1 if t == "L" else -1) * (1 if i % 2 == 0 else -1)
    return abs(s) // 2


# --------------------------------------------------------------------------
# formal sums


class FormalSum:
    """Integer linear combination of graphs, merged by canonical key."""

    def __init__(self, context: str = "C"):
        if context not in CONTEXTS:
            raise ValueError(f"unknown context {context!r}")
        self.context = context
        self.coeffs: dict[tuple, int] = {}
        self.graphs: dict[tuple, LabelGraph] = {}

    def add(self, g: LabelGraph, c: int = 1) -> "FormalSum":
        k = canonical_key(g)
        v = self.coeffs.get(k, 0) + c
        if v:
            self.coeffs[k] = v
            self.graphs.setdefault(k, g)
        else:
            self.coeffs.pop(k, None)
            self.graphs.pop(k, None)
        return self

    def merge(self, other: "FormalSum") -> "FormalSum":
        if other.context != self.context:
            raise ValueError(f"cannot merge {other.context}(G) into {self.context}(G)")
        for k, c in other.coeffs.items():
            self.add(other.graphs[k], c)
        return self

    def copy(self) -> "FormalSum":
        out = FormalSum(self.context)
        out.coeffs = dict(self.coeffs)
        out.graphs = dict(self.graphs)
        return out

    def items(self) -> list[tuple[LabelGraph, int]]:
        return [(self.graphs[k], self.coeffs[k]) for k in sorted(self.coeffs)]

    def mass(self) -> int:
        return sum(self.coeffs.values())

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.context == other.context and self.coeffs == other.coeffs

    def __repr__(self):
        return f"FormalSum({self.context}, {len(self)} terms, mass {self.mass()})"


def sum_add(s: FormalSum, g: LabelGraph, c: int) -> FormalSum:
    return s.add(g, c)


# --------------------------------------------------------------------------
# serialization


def serialize_graph(g: LabelGraph) -> str:
    """Deterministic text: vertices in canonical order, one per line.

    ``3 e: o>1.2 t>4.0 i>2.1`` reads: vertex 3 is an empty label vertex; its
    first half-edge is an outgoing thick edge landing at slot 2 of vertex 1,
    and so on counterclockwise.
    """
    h = erase_virtual(g)
    lines = []
    base = 0
    for code in sorted(_component_codes(h)):
        for i, item in enumerate(code):
            if len(item) == 1:
                continue
            vt = item[0]
            slots = " ".join(f"{k}>{w + base}.{p}" for k, w, p in item[2:])
            lines.append(f"{i + base} {vt}: {slots}")
        base += len(code)
    lines.append(f"loops {h.loops}")
    return "\n".join(lines)
