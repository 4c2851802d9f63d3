"""Reidemeister, virtual, semivirtual and detour moves on diagrams.

Moves are applied to a :class:`~labelbracket.diagram.SlotGraph` copy and the
result is converted back, so every output is renumbered along components.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .diagram import Diagram, SlotGraph, check_planar, faces

CLASSICAL_MOVES = ("R1", "R1_inv", "R2", "R2_inv", "R3")
VIRTUAL_MOVES = ("VR1", "VR1_inv", "VR2", "VR2_inv", "VR3", "SVR3", "detour")
MOVE_TYPES = CLASSICAL_MOVES + VIRTUAL_MOVES


class NoMatchError(ValueError):
    """The site does not match the left-hand side of the move."""


@dataclass(frozen=True)
class MoveSpec:
    type: str
    site: tuple

    def __str__(self):
        if self.type == "detour":
            return "detour(" + "; ".join(map(str, self.site)) + ")"
        return f"{self.type}{self.site}"


_EPS = 1e-6


# --------------------------------------------------------------------------
# slot-graph helpers


def _arc_index(d: Diagram, g: SlotGraph):
    """arc id -> tail out-slot in ``g`` (or ("loop", k) for O components)."""
    index = {}
    for i, c in enumerate(d.crossings):
        for s, a in enumerate(c.arcs):
            if c.outgoing[s]:
                index[a] = (i, s)
    for j, (k, a) in enumerate(d.endpoints):
        if k == "P":
            index[a] = (len(d.crossings) + j, 0)
    for k, a in enumerate(d.loops):
        index[a] = ("loop", k)
    return index


def _subdivide(g: SlotGraph, points) -> None:
    """Insert node slots along arcs.

    ``points`` holds ``(arc_key, position, in_slot, out_slot)``; the strand
    enters the new node at ``in_slot`` and continues from ``out_slot``.
    Positions order the points along the arc orientation.
    """
    by_arc: dict = {}
    for key, pos, ins, outs in points:
        by_arc.setdefault(key, []).append((pos, ins, outs))
    for key, pts in by_arc.items():
        pts.sort(key=lambda p: p[0])
        if key[0] == "loop":
            g.loops -= 1
            for (_, _, o), (_, i, _) in zip(pts, pts[1:] + pts[:1]):
                g.head[o] = i
            continue
        end = g.head[key]
        g.head[key] = pts[0][1]
        for (_, _, o), (_, i, _) in zip(pts, pts[1:]):
            g.head[o] = i
        g.head[pts[-1][2]] = end


def _dissolve(g: SlotGraph, n: int) -> None:
    """Replace crossing ``n`` by two pass nodes, one per strand."""
    node = g.nodes[n]
    mapping = {}
    for s in range(4):
        if not node.outgoing[s]:
            p = g.add_node("pass", [False, True])
            mapping[(n, s)] = (p, 0)
            mapping[(n, (s + 2) % 4)] = (p, 1)
    g.head = {mapping.get(t, t): mapping.get(h, h) for t, h in g.head.items()}
    node.flavor = "gone"
    node.outgoing = []


def _rotate(slots: list, flags: list, k: int):
    return slots[k:] + slots[:k], flags[k:] + flags[:k]


# --------------------------------------------------------------------------
# R1


def _apply_r1(d: Diagram, flavor: str, arc: int, sign: int, side: str) -> Diagram:
    g = d.slot_graph()
    key = _arc_index(d, g)[arc]
    n = len(g.nodes)
    # roles: p1 = first pass (in, out), p2 = second pass (in, out)
    if side == "L":
        order = ["p1in", "p2out", "p1out", "p2in"]
    else:
        order = ["p1in", "p2in", "p1out", "p2out"]
    if flavor == "X":
        under_first = (sign == 1) == (side == "L")
        if not under_first:
            k = order.index("p2in")
            order = order[k:] + order[:k]
    flags = [r.endswith("out") for r in order]
    g.add_node(flavor, flags)
    slot = {r: (n, i) for i, r in enumerate(order)}
    _subdivide(
        g,
        [
            (key, 0.5, slot["p1in"], slot["p1out"]),
            (key, 0.5 + _EPS, slot["p2in"], slot["p2out"]),
        ],
    )
    out = g.to_diagram(kind=d.kind)
    return out


def _r1_inverse_sites(d: Diagram, flavor: str) -> list[int]:
    sites = []
    for i, c in enumerate(d.crossings):
        if c.flavor != flavor:
            continue
        for s in range(4):
            if c.outgoing[s] and any(c.arcs[t] == c.arcs[s] and not c.outgoing[t] for t in ((s + 1) % 4, (s - 1) % 4)):
                sites.append(i)
                break
    return sites


def _apply_r1_inv(d: Diagram, flavor: str, n: int) -> Diagram:
    if n not in _r1_inverse_sites(d, flavor):
        raise NoMatchError(f"crossing {n} is not a removable {flavor} curl")
    g = d.slot_graph()
    _dissolve(g, n)
    return g.to_diagram(kind=d.kind)


# --------------------------------------------------------------------------
# R2


def _r2_sites(d: Diagram, flavor: str) -> list[tuple]:
    sites = []
    fs = [list(f) for f in faces(d)]
    for f in fs:
        for i, de in enumerate(f):
            for j, df in enumerate(f):
                if i != j and de[0] == df[0]:
                    continue
                for top in ("e", "f"):
                    sites.append((de, df, top))
                    if flavor == "V":
                        break
    loop_darts = [(a, fw) for a in d.loops for fw in (True, False)]
    others = [dt for f in fs for dt in f]
    for ld in loop_darts:
        sites_for = [(ld, ld)] + [(ld, o) for o in others] + [(o, ld) for o in others]
        sites_for += [(ld, o) for o in loop_darts if o[0] != ld[0]]
        for de, df in sites_for:
            for top in ("e", "f"):
                sites.append((de, df, top))
                if flavor == "V":
                    break
    return sites


def _apply_r2(d: Diagram, flavor: str, de, df, top: str) -> Diagram:
    (ea, efwd), (fa, ffwd) = de, df
    if ea == fa and de != df:
        raise NoMatchError("two sides of one arc")
    g = d.slot_graph()
    idx = _arc_index(d, g)
    if ea not in idx or fa not in idx:
        raise NoMatchError("unknown arc")
    if de == df:
        te, tf = 1 / 3, 2 / 3
    else:
        te = tf = 0.5
    pe = te if efwd else 1 - te
    pf = tf if ffwd else 1 - tf
    e_lr = not efwd  # e runs left to right in the local picture
    f_lr = ffwd
    x1, x2 = len(g.nodes), len(g.nodes) + 1
    # local ccw slot roles; "e1" is the piece of e left of X1, and so on
    roles = {x1: ["f2", "e1", "f1", "e2"], x2: ["f3", "e3", "f2", "e2"]}

    def incoming(node, role):
        strand, piece = role[0], int(role[1])
        lr = e_lr if strand == "e" else f_lr
        left_piece = 1 if node == x1 else 2
        return (piece == left_piece) == lr

    slots = {}
    for node in (x1, x2):
        order = roles[node]
        flags = [not incoming(node, r) for r in order]
        under = "f" if top == "e" else "e"
        if flavor == "V":
            under = "e"
        k = next(i for i, r in enumerate(order) if r[0] == under and not flags[i])
        order, flags = _rotate(order, flags, k)
        g.add_node(flavor, flags)
        for i, r in enumerate(order):
            slots[(node, r)] = (node, i)

    pts = []
    for strand, arc, pos, lr in (("e", ea, pe, e_lr), ("f", fa, pf, f_lr)):
        seq = [(x1, f"{strand}1", f"{strand}2"), (x2, f"{strand}2", f"{strand}3")]
        if not lr:
            seq = [(x2, f"{strand}3", f"{strand}2"), (x1, f"{strand}2", f"{strand}1")]
        for off, (node, rin, rout) in enumerate(seq):
            pts.append((idx[arc], pos + off * _EPS, slots[(node, rin)], slots[(node, rout)]))
    _subdivide(g, pts)
    return g.to_diagram(kind=d.kind)


def _bigon_sites(d: Diagram, flavor: str) -> list[tuple[int, int]]:
    sites = []
    ends = {}
    for i, c in enumerate(d.crossings):
        for s, a in enumerate(c.arcs):
            ends.setdefault(a, []).append((i, s))
    for f in faces(d):
        if len(f) != 2 or f[0][0] == f[1][0]:
            continue
        s1, s2 = ends.get(f[0][0], []), ends.get(f[1][0], [])
        if len(s1) != 2 or len(s2) != 2:
            continue
        n1 = {i for i, _ in s1}
        if len(n1) != 2 or n1 != {i for i, _ in s2}:
            continue
        if any(d.crossings[i].flavor != flavor for i in n1):
            continue
        if flavor == "X":
            over = [s % 2 == 1 for _, s in s1]
            if over[0] != over[1]:
                continue
        pair = tuple(sorted(n1))
        if pair not in sites:
            sites.append(pair)
    return sites


def _apply_r2_inv(d: Diagram, flavor: str, pair) -> Diagram:
    if tuple(pair) not in _bigon_sites(d, flavor):
        raise NoMatchError(f"crossings {pair} do not bound a removable bigon")
    g = d.slot_graph()
    for n in pair:
        _dissolve(g, n)
    return g.to_diagram(kind=d.kind)


# --------------------------------------------------------------------------
# R3 and the semivirtual move


def _triangle_sides(d: Diagram, f) -> list[tuple[tuple[int, int], tuple[int, int]]] | None:
    """For a 3-dart face: per side, (tail out-slot, head in-slot)."""
    if len(f) != 3 or len({a for a, _ in f}) != 3:
        return None
    tail, head = {}, {}
    for i, c in enumerate(d.crossings):
        for s, a in enumerate(c.arcs):
            (tail if c.outgoing[s] else head)[a] = (i, s)
    sides = []
    for a, _ in f:
        if a not in tail or a not in head:
            return None
        sides.append((tail[a], head[a]))
    nodes = {t[0] for t, _ in sides} | {h[0] for _, h in sides}
    if len(nodes) != 3 or any(t[0] == h[0] for t, h in sides):
        return None
    return sides


def _r3_sites(d: Diagram, move: str) -> list[int]:
    sites = []
    for fi, f in enumerate(faces(d)):
        sides = _triangle_sides(d, f)
        if sides is None:
            continue
        nodes = {t[0] for t, _ in sides} | {h[0] for _, h in sides}
        flav = sorted(d.crossings[n].flavor for n in nodes)
        if move == "R3":
            if flav != ["X"] * 3:
                continue
            if not any((t[1] % 2) == (h[1] % 2) for t, h in sides):
                continue
        elif move == "VR3":
            if flav != ["V"] * 3:
                continue
        elif move == "SVR3":
            if flav != ["V", "V", "X"]:
                continue
            # the side joining the two virtual crossings carries the virtual strand
            if not any(d.crossings[t[0]].is_virtual and d.crossings[h[0]].is_virtual for t, h in sides):
                continue
        sites.append(fi)
    return sites


def _apply_r3(d: Diagram, move: str, face_index: int) -> Diagram:
    if face_index not in _r3_sites(d, move):
        raise NoMatchError(f"face {face_index} is not a {move} triangle")
    sides = _triangle_sides(d, faces(d)[face_index])
    g = d.slot_graph()
    out_map, in_map = {}, {}
    side_tails = set()
    new = []
    for (x, xs), (y, ys) in sides:
        xo, yo = (xs + 2) % 4, (ys + 2) % 4
        out_map[(y, yo)] = (x, xs)
        in_map[(x, xo)] = (y, ys)
        side_tails.add((x, xs))
        new.append(((y, yo), (x, xo)))
    head = {}
    for t, h in g.head.items():
        if t in side_tails:
            continue
        head[out_map.get(t, t)] = in_map.get(h, h)
    for t, h in new:
        head[t] = h
    g.head = head
    return g.to_diagram(kind=d.kind)


# --------------------------------------------------------------------------
# public surface


def enumerate_move_sites(d: Diagram, move_type: str, limit: int | None = None) -> list[MoveSpec]:
    """All (or the first ``limit``) applicable sites of a move type, in a fixed order."""
    if move_type not in MOVE_TYPES:
        raise ValueError(f"unknown move type {move_type!r}")
    specs: list[MoveSpec] = []
    arcs = d.arcs()
    if move_type == "R1":
        specs = [MoveSpec("R1", (a, sg, sd)) for a in arcs for sg in (1, -1) for sd in ("L", "R")]
    elif move_type == "VR1":
        specs = [MoveSpec("VR1", (a, sd)) for a in arcs for sd in ("L", "R")]
    elif move_type in ("R1_inv", "VR1_inv"):
        fl = "X" if move_type == "R1_inv" else "V"
        specs = [MoveSpec(move_type, (n,)) for n in _r1_inverse_sites(d, fl)]
    elif move_type in ("R2", "VR2"):
        fl = "X" if move_type == "R2" else "V"
        specs = [MoveSpec(move_type, s) for s in _r2_sites(d, fl)]
    elif move_type in ("R2_inv", "VR2_inv"):
        fl = "X" if move_type == "R2_inv" else "V"
        specs = [MoveSpec(move_type, p) for p in _bigon_sites(d, fl)]
    elif move_type in ("R3", "VR3", "SVR3"):
        specs = [MoveSpec(move_type, (f,)) for f in _r3_sites(d, move_type)]
    elif move_type == "detour":
        specs = _detour_sites(d, limit or 8)
    if d.kind.is_knotoid and move_type.startswith(("V", "SV", "detour")):
        specs = []
    return specs[:limit] if limit else specs


def apply_move(d: Diagram, m: MoveSpec) -> Diagram:
    """Apply one move; raises :class:`NoMatchError` when the site does not fit."""
    t, s = m.type, m.site
    if t in ("V", "VR1", "VR1_inv", "VR2", "VR2_inv", "VR3", "SVR3", "detour") and d.kind.is_knotoid:
        raise NoMatchError("virtual moves are not defined on knotoid diagrams")
    if t == "R1":
        arc, sign, side = s
        if arc not in d.arcs():
            raise NoMatchError(f"no arc {arc}")
        return _apply_r1(d, "X", arc, sign, side)
    if t == "VR1":
        arc, side = s
        if arc not in d.arcs():
            raise NoMatchError(f"no arc {arc}")
        return _with_virtual_kind(_apply_r1(d, "V", arc, 1, side), d)
    if t == "R1_inv":
        return _apply_r1_inv(d, "X", s[0])
    if t == "VR1_inv":
        return _apply_r1_inv(d, "V", s[0])
    if t in ("R2", "VR2"):
        de, df, top = s
        fl = "X" if t == "R2" else "V"
        if (de, df, top) not in set(_r2_sites(d, fl)):
            raise NoMatchError(f"darts {de}, {df} do not share a face")
        out = _apply_r2(d, fl, de, df, top)
        return _with_virtual_kind(out, d) if fl == "V" else out
    if t == "R2_inv":
        return _apply_r2_inv(d, "X", s)
    if t == "VR2_inv":
        return _apply_r2_inv(d, "V", s)
    if t in ("R3", "VR3", "SVR3"):
        return _apply_r3(d, t, s[0])
    if t == "detour":
        out = d
        for sub in s:
            out = apply_move(out, sub)
        return out
    raise ValueError(f"unknown move type {t!r}")


def _with_virtual_kind(out: Diagram, src: Diagram) -> Diagram:
    return out


def _detour_sites(d: Diagram, limit: int) -> list[MoveSpec]:
    """Finger moves carrying a strand virtually across a classical crossing.

    A detour across one crossing is realized as two virtual second moves
    that pass a finger over both arms at a corner, followed by the
    semivirtual move that slides the finger across the crossing.
    """
    found = []
    if d.n_classical == 0:
        return found
    for s1 in enumerate_move_sites(d, "VR2"):
        d1 = apply_move(d, s1)
        new1 = {len(d1.crossings) - 2, len(d1.crossings) - 1}
        tip = _arcs_between(d1, new1)
        for s2 in enumerate_move_sites(d1, "VR2"):
            if s2.site[0][0] not in tip or s2.site[0] == s2.site[1]:
                continue
            d2 = apply_move(d1, s2)
            new2 = {len(d2.crossings) - 2, len(d2.crossings) - 1}
            for s3 in enumerate_move_sites(d2, "SVR3"):
                sides = _triangle_sides(d2, faces(d2)[s3.site[0]])
                corner = {t[0] for t, _ in sides} | {h[0] for _, h in sides}
                if corner & new2 and corner & new1:
                    found.append(MoveSpec("detour", (s1, s2, s3)))
                    break
            if len(found) >= limit:
                return found
    return found


def _arcs_between(d: Diagram, nodes: set[int]) -> set[int]:
    arcs = []
    for i in nodes:
        arcs.extend(d.crossings[i].arcs)
    return {a for a in arcs if arcs.count(a) == 2}


def random_move(d: Diagram, rng: random.Random, types: Sequence[str]) -> MoveSpec | None:
    """Uniform choice of a type that has sites, then a uniform site."""
    types = list(types)
    rng.shuffle(types)
    for t in types:
        if t == "detour":
            sites = _random_detour(d, rng)
        else:
            sites = enumerate_move_sites(d, t)
        if sites:
            return rng.choice(sites)
    return None


def _random_detour(d: Diagram, rng: random.Random, attempts: int = 6) -> list[MoveSpec]:
    if d.n_classical == 0 or d.kind.is_knotoid:
        return []
    first = enumerate_move_sites(d, "VR2")
    for _ in range(attempts):
        if not first:
            return []
        s1 = rng.choice(first)
        d1 = apply_move(d, s1)
        new1 = {len(d1.crossings) - 2, len(d1.crossings) - 1}
        tip = _arcs_between(d1, new1)
        second = [s for s in enumerate_move_sites(d1, "VR2") if s.site[0][0] in tip and s.site[0] != s.site[1]]
        rng.shuffle(second)
        for s2 in second[:10]:
            d2 = apply_move(d1, s2)
            new2 = {len(d2.crossings) - 2, len(d2.crossings) - 1}
            for s3 in enumerate_move_sites(d2, "SVR3"):
                sides = _triangle_sides(d2, faces(d2)[s3.site[0]])
                corner = {t[0] for t, _ in sides} | {h[0] for _, h in sides}
                if corner & new2 and corner & new1:
                    return [MoveSpec("detour", (s1, s2, s3))]
    return []


# --------------------------------------------------------------------------
# braid closures, used as a corpus generator

_BRAID_TOKEN = {"s": ([False, True, True, False], 3, 0, 2, 1),
                "S": ([False, False, True, True], 0, 1, 3, 2),
                "v": ([False, False, True, True], 0, 1, 3, 2)}


def braid_closure(word: str, strands: int | None = None) -> Diagram:
    """Closure of a (virtual) braid word such as ``"s1 S2 v1"``.

    ``s<i>`` is the positive generator on columns ``i, i+1``, ``S<i>`` its
    inverse and ``v<i>`` the virtual generator.  Strands run upward and
    close on the right.
    """
    letters = []
    for tok in word.split():
        if tok[0] not in _BRAID_TOKEN or not tok[1:].isdigit() or int(tok[1:]) < 1:
            raise ValueError(f"bad braid letter {tok!r}")
        letters.append((tok[0], int(tok[1:])))
    n = max([strands or 1] + [i + 1 for _, i in letters])
    g = SlotGraph()
    base = [g.add_node("pass", [False, True]) for _ in range(n)]
    cur = [(b, 1) for b in base]
    for kind, i in letters:
        flags, in_left, in_right, out_left, out_right = _BRAID_TOKEN[kind]
        x = g.add_node("V" if kind == "v" else "X", flags)
        g.head[cur[i - 1]] = (x, in_left)
        g.head[cur[i]] = (x, in_right)
        cur[i - 1], cur[i] = (x, out_left), (x, out_right)
    for j in range(n):
        g.head[cur[j]] = (base[j], 0)
    d = g.to_diagram()
    check_planar(d)
    return d
