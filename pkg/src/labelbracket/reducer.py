"""Greedy rewriting of formal sums by the first and second move relations.

A relation is stored as a family of fragments: the state graphs of a small
diagram with one arc per strand cut open into ports.  The left side of a
relation is the sum of all state fragments; the right side is the fragment
with the ports joined straight through.  A term of a formal sum matches a
state fragment when the fragment embeds as a local ribbon subgraph; the
rewrite fires only if the sibling terms (same outside, other local states)
are present with a common coefficient.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .diagram import Diagram, parse_diagram
from .labelgraph import (
    FormalSum,
    GraphBuilder,
    LabelGraph,
    canonical_key,
    splice,
    union,
)
from .moves import MoveSpec, apply_move, enumerate_move_sites
from .specialize import WebSum, arrow_value, jones_value, kuperberg_web, reduce_web
from .statesum import smooth, states


@dataclass(frozen=True)
class Fragment:
    name: str
    states: tuple[LabelGraph, ...]
    identity: LabelGraph


@dataclass(frozen=True)
class Candidate:
    relation: str
    keys: tuple  # canonical keys of the consumed terms
    coefficient: int
    replacement: LabelGraph
    site: tuple  # (term index in key order, matched vertices)


# --------------------------------------------------------------------------
# fragment construction


def _arc_components(d: Diagram) -> list[list[int]]:
    parent = {a: a for a in d.arcs()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in d.crossings:
        for s in (0, 1):
            parent[find(c.arcs[s])] = find(c.arcs[s + 2])
    groups: dict[int, list[int]] = {}
    for a in d.arcs():
        groups.setdefault(find(a), []).append(a)
    return [sorted(g) for _, g in sorted(groups.items())]


def _cut(g: LabelGraph, halves: dict, arcs: list[int]) -> LabelGraph:
    """Replace each listed arc by a pair of ports ``p<2k>`` (in) and ``p<2k+1>`` (out)."""
    b = GraphBuilder()
    hmap = {}
    for v, t in enumerate(g.vtype):
        for h, nh in zip(g.rot[v], b.vertex(t, (g.kind[x] for x in g.rot[v]))):
            hmap[h] = nh
    cut = set()
    for k, a in enumerate(arcs):
        tail, head = halves[a]
        (pin,) = b.vertex(f"p{2 * k}", ("o",))
        (pout,) = b.vertex(f"p{2 * k + 1}", ("i",))
        b.join(pin, hmap[head])
        b.join(pout, hmap[tail])
        cut |= {tail, head}
    for h, t in enumerate(g.twin):
        if h < t and h not in cut:
            b.join(hmap[h], hmap[t])
    b.loops = g.loops
    return b.build()


def _identity(n_strands: int) -> LabelGraph:
    b = GraphBuilder()
    for k in range(n_strands):
        (pin,) = b.vertex(f"p{2 * k}", ("o",))
        (pout,) = b.vertex(f"p{2 * k + 1}", ("i",))
        b.join(pin, pout)
    return b.build()


def _fragments_of(name: str, d: Diagram) -> list[Fragment]:
    comps = _arc_components(d)
    out = []
    choices = [[]]
    for comp in comps:
        choices = [c + [a] for c in choices for a in comp]
    for arcs in choices:
        graphs = []
        for s in states(d):
            halves: dict = {}
            g = smooth(d, s, halves)
            graphs.append(_cut(g, halves, arcs))
        out.append(Fragment(name, tuple(graphs), _identity(len(arcs))))
    return out


@lru_cache(maxsize=None)
def r1_fragments() -> tuple[Fragment, ...]:
    circle = parse_diagram("O[1]")
    out = []
    for sign in (1, -1):
        for side in ("L", "R"):
            d = apply_move(circle, MoveSpec("R1", (1, sign, side)))
            out += _fragments_of("R1.1" if sign == 1 else "R1.2", d)
    return _dedupe(out)


@lru_cache(maxsize=None)
def r2_fragments() -> tuple[Fragment, ...]:
    two = parse_diagram("O[1] O[2]")
    out = []
    for m in enumerate_move_sites(two, "R2"):
        de, df, top = m.site
        if de[0] == df[0]:
            continue
        parallel = (not de[1]) == df[1]
        name = {(True, "e"): "R2.1", (True, "f"): "R2.2", (False, "e"): "R2.3", (False, "f"): "R2.4"}[(parallel, top)]
        out += _fragments_of(name, apply_move(two, m))
    return _dedupe(out)


def _dedupe(frags: list[Fragment]) -> tuple[Fragment, ...]:
    seen = set()
    out = []
    for f in frags:
        k = frozenset(canonical_key(g) for g in f.states)
        if k not in seen:
            seen.add(k)
            out.append(f)
    return tuple(out)


# --------------------------------------------------------------------------
# matching


def _is_port(t: str) -> bool:
    return t.startswith("p")


def find_matches(pattern: LabelGraph, g: LabelGraph) -> Iterator[tuple[dict, dict]]:
    """Embeddings of the non-port part of ``pattern`` into ``g``.

    Yields ``(vertex_map, port_map)`` where ``port_map[p]`` is the half-edge
    of ``g`` that the pattern half-edge attached to port ``p`` maps to.
    Rotations are matched up to cyclic shift only (no mirror images).
    """
    internal = [v for v, t in enumerate(pattern.vtype) if not _is_port(t)]
    if not internal:
        return
    root_v = internal[0]
    root_h = pattern.rot[root_v][0]
    ppos, gpos, phv, ghv = pattern.pos, g.pos, pattern.hv, g.hv
    seen = set()
    for h in range(len(g.twin)):
        if g.kind[h] != pattern.kind[root_h] or g.vtype[ghv[h]] != pattern.vtype[root_v]:
            continue
        vmap = {root_v: ghv[h]}
        off = {root_v: (gpos[h] - ppos[root_h]) % len(g.rot[ghv[h]])}
        if len(g.rot[ghv[h]]) != len(pattern.rot[root_v]):
            continue
        hmap: dict[int, int] = {}
        ports: dict[str, int] = {}
        queue = [root_v]
        ok = True
        used = {ghv[h]}
        while queue and ok:
            v = queue.pop()
            w = vmap[v]
            pr, gr = pattern.rot[v], g.rot[w]
            for i, x in enumerate(pr):
                y = gr[(i + off[v]) % len(gr)]
                if g.kind[y] != pattern.kind[x]:
                    ok = False
                    break
                hmap[x] = y
                tx = pattern.twin[x]
                u = phv[tx]
                if _is_port(pattern.vtype[u]):
                    ports[pattern.vtype[u]] = y
                    continue
                ty = g.twin[y]
                z = ghv[ty]
                if u in vmap:
                    if vmap[u] != z or (ppos[tx] + off[u]) % len(g.rot[z]) != gpos[ty]:
                        ok = False
                        break
                    continue
                if z in used or g.vtype[z] != pattern.vtype[u] or len(g.rot[z]) != len(pattern.rot[u]):
                    ok = False
                    break
                vmap[u] = z
                used.add(z)
                off[u] = (gpos[ty] - ppos[tx]) % len(g.rot[z])
                queue.append(u)
        if not ok or len(vmap) != len(internal):
            continue
        sig = (frozenset(vmap.values()), tuple(sorted(ports.items())))
        if sig in seen:
            continue
        seen.add(sig)
        yield vmap, ports


def replace(g: LabelGraph, vmap: dict, ports: dict, fragment: LabelGraph) -> LabelGraph:
    """Swap the matched local part of ``g`` for another fragment with the same ports."""
    u, voff, hoff = union(g, fragment)
    removed = set(vmap.values())
    through = {}
    for v, t in enumerate(fragment.vtype):
        if _is_port(t):
            removed.add(v + voff[1])
            ph = fragment.rot[v][0] + hoff[1]
            gh = ports[t]
            through[gh], through[ph] = ph, gh
    return splice(u, removed, through)


# --------------------------------------------------------------------------
# candidates and reduction


def _candidates(s: FormalSum, fragments, first_only: bool) -> list[Candidate]:
    out = []
    seen = set()
    keys = sorted(s.coeffs)
    for idx, k in enumerate(keys):
        g = s.graphs[k]
        if g.n_label == 0:
            continue
        c0 = s.coeffs[k]
        for frag in fragments:
            for j, pat in enumerate(frag.states):
                for vmap, ports in find_matches(pat, g):
                    group = []
                    for i, other in enumerate(frag.states):
                        group.append(k if i == j else canonical_key(replace(g, vmap, ports, other)))
                    if len(set(group)) != len(group):
                        continue
                    coeffs = [s.coeffs.get(x, 0) for x in group]
                    if not all(c and (c > 0) == (c0 > 0) for c in coeffs):
                        continue
                    sig = frozenset(group)
                    if sig in seen:
                        continue
                    seen.add(sig)
                    c = min(abs(x) for x in coeffs) * (1 if c0 > 0 else -1)
                    rep = replace(g, vmap, ports, frag.identity)
                    out.append(Candidate(frag.name, tuple(group), c, rep, (idx, tuple(sorted(vmap.values())))))
                    if first_only:
                        return out
    return out


def match_r1(s: FormalSum) -> list[Candidate]:
    return _candidates(s, r1_fragments(), first_only=False)


def match_r2(s: FormalSum) -> list[Candidate]:
    return _candidates(s, r2_fragments(), first_only=False)


def apply_candidate(s: FormalSum, cand: Candidate) -> FormalSum:
    out = s.copy()
    for k in cand.keys:
        out.add(out.graphs[k], -cand.coefficient)
    out.add(cand.replacement, cand.coefficient)
    return out


def reduce(s: FormalSum, log: list | None = None) -> FormalSum:
    """Apply the first R2 candidate, else the first R1 candidate, until none is left."""
    cur = s.copy()
    while True:
        cands = _candidates(cur, r2_fragments(), True) or _candidates(cur, r1_fragments(), True)
        if not cands:
            return cur
        if log is not None:
            log.append(cands[0].relation)
        cur = apply_candidate(cur, cands[0])


# --------------------------------------------------------------------------
# third-move verification


@dataclass
class R3Check:
    diagram: str
    site: int
    samples: int
    jones: bool
    kuperberg: bool
    arrow: bool

    @property
    def ok(self) -> bool:
        return self.jones and self.kuperberg and self.arrow

    def __str__(self):
        flag = "confirmed" if self.ok else "FAILED"
        return (
            f"R3.1 {flag} on {self.diagram} (triangle {self.site}, {self.samples} outside states): "
            f"jones={self.jones} kuperberg={self.kuperberg} arrow={self.arrow}"
        )


def verify_r3(d: Diagram, site: int, rng: random.Random | None = None, samples: int = 4) -> R3Check:
    """Compare the eight local-state sums on both sides of a third move.

    The crossings outside the triangle keep a common random state; the sum
    over the eight states of the triangle is evaluated under all three
    specializations (sl3 with its literal scalars) on each side.
    """
    from .diagram import faces as diagram_faces
    from .moves import _triangle_sides  # local import keeps the public surface small

    rng = rng or random.Random(0)
    d2 = apply_move(d, MoveSpec("R3", (site,)))
    sides = _triangle_sides(d, diagram_faces(d)[site])
    tri = sorted({t[0] for t, _ in sides} | {h[0] for _, h in sides})
    outside = [i for i, c in enumerate(d.crossings) if not c.is_virtual and i not in tri]
    ok = {"jones": True, "kuperberg": True, "arrow": True}
    n = min(samples, 2 ** len(outside))
    picks = set()
    while len(picks) < n:
        picks.add(tuple(rng.choice("AB") for _ in outside))
    for pick in sorted(picks):
        base = dict(zip(outside, pick))
        vals = []
        for dd in (d, d2):
            j = a = None
            web = WebSum()
            for local in states(Diagram(tuple(dd.crossings[i] for i in tri))):
                st = dict(base)
                st.update({tri[i]: m for i, m in local.items()})
                g = smooth(dd, st)
                jv, av = jones_value(g), arrow_value(g)
                j = jv if j is None else j + jv
                a = av if a is None else a + av
                scal, w = kuperberg_web(g, normalized=False)
                reduce_web(w).scale_into(web, scal)
            vals.append((j, web, a))
        ok["jones"] &= vals[0][0] == vals[1][0]
        ok["kuperberg"] &= vals[0][1] == vals[1][1]
        ok["arrow"] &= vals[0][2] == vals[1][2]
    return R3Check(d.to_code(), site, n, **ok)
