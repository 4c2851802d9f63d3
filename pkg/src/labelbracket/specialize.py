"""Jones, Kuperberg and normalized arrow evaluations of label graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .algebra import BIGON_Q, LOOP_A, LOOP_Q, A, LaurentPoly, q, sum_polys
from .diagram import Diagram, writhe
from .labelgraph import (
    LabelGraph,
    Web,
    canonical_key,
    circle_count,
    cusp_index,
    delete_thin,
    erase_virtual,
    serialize_graph,
    splice,
)
from .statesum import DEFAULT_CAPACITY, smooth, states


class UnsupportedError(ValueError):
    """The invariant is not defined for this kind of diagram."""


# thin-edge scalars keyed by (circle color, thin edge oriented)
JONES_STEP = {
    ("e", False): A(-2, -1),
    ("s", True): A(-4, -1),
    ("e", True): A(4, -1),
    ("s", False): A(2, -1),
}
# literal sl3 scalars, invariant under regular isotopy only
KUPERBERG_STEP_RAW = {
    ("e", False): q("-1/3"),
    ("s", True): q("1/6", -1),
    ("e", True): q("-1/6", -1),
    ("s", False): q("1/3"),
}
# the same scalars times q^{4/3} per positive and q^{-4/3} per negative site
KUPERBERG_STEP = {
    ("e", False): q(1),
    ("s", True): q("3/2", -1),
    ("e", True): q("-3/2", -1),
    ("s", False): q(-1),
}


def _thin_types(g: LabelGraph) -> list[tuple[str, bool]]:
    hv = g.hv
    return [(g.vtype[hv[h]], g.kind[h] != "t") for h, _ in g.thin_edges()]


def _product(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for p in polys:
        out = out * p
    return out


def _loop_power(closed: int, opened: int) -> LaurentPoly:
    n = closed if opened else closed - 1
    if n < 0:
        raise ValueError("the empty diagram has no normalized value")
    return LOOP_A ** n


# --------------------------------------------------------------------------
# Jones


def jones_value(g: LabelGraph) -> LaurentPoly:
    """Thin-edge scalars times the loop value per extra closed circle."""
    scal = _product(JONES_STEP[t] for t in _thin_types(g))
    cd = circle_count(delete_thin(g))
    return scal * _loop_power(cd.closed, cd.open)


def jones(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> LaurentPoly:
    """Writhe-normalized Jones polynomial in ``A`` (knotoids included)."""
    return sum_polys(jones_value(smooth(d, s)) for s in states(d, capacity))


# --------------------------------------------------------------------------
# Kuperberg


def kuperberg_web(g: LabelGraph, normalized: bool = True) -> tuple[LaurentPoly, Web]:
    """Scalar from the thin edges and the web left after deleting unoriented ones."""
    if g.count("P", "Q"):
        raise UnsupportedError("the sl3 bracket is not defined for knotoids")
    table = KUPERBERG_STEP if normalized else KUPERBERG_STEP_RAW
    scal = _product(table[t] for t in _thin_types(g))
    h = erase_virtual(delete_thin(g, "unoriented"))
    kinds = tuple({"to": "o", "ti": "i"}.get(k, k) for k in h.kind)
    web = Web(tuple("w" for _ in h.vtype), h.rot, h.twin, kinds, h.loops)
    web.validate()
    return scal, web


def faces(w: LabelGraph) -> list[list[int]]:
    """Face boundaries as cycles of darts (half-edges)."""
    seen = set()
    out = []
    for h0 in range(len(w.twin)):
        if h0 in seen:
            continue
        cyc = []
        h = h0
        while h not in seen:
            seen.add(h)
            cyc.append(h)
            h = w.ccw_next(w.twin[h])
        out.append(cyc)
    return out


def genus(w: LabelGraph) -> int:
    """Genus of the closed surface carrying the connected web ``w``."""
    v, e, f = len(w.vtype), len(w.twin) // 2, len(faces(w))
    return (2 - (v - e + f)) // 2


EMPTY_WEB = Web((), (), (), (), 0)


@dataclass
class WebSum:
    """Linear combination of irreducible webs keyed by canonical key."""

    terms: dict = field(default_factory=dict)  # key -> [coefficient, web]

    def add(self, coeff: LaurentPoly, web: LabelGraph) -> None:
        k = canonical_key(web)
        if k in self.terms:
            c = self.terms[k][0] + coeff
            if c.is_zero():
                del self.terms[k]
            else:
                self.terms[k][0] = c
        elif not coeff.is_zero():
            self.terms[k] = [coeff, web]

    def scale_into(self, other: "WebSum", factor: LaurentPoly) -> None:
        for c, w in self.terms.values():
            other.add(c * factor, w)

    @property
    def scalar(self) -> LaurentPoly:
        t = self.terms.get(canonical_key(EMPTY_WEB))
        return t[0] if t else LaurentPoly()

    @property
    def residuals(self) -> list[tuple[LaurentPoly, LabelGraph]]:
        empty = canonical_key(EMPTY_WEB)
        return [(c, w) for k, (c, w) in sorted(self.terms.items()) if k != empty]

    def multiset(self) -> frozenset:
        return frozenset((k, c.canonical()) for k, (c, _) in self.terms.items())

    def substitute_a(self) -> "WebSum":
        """Apply ``q -> A^{-6}`` to every coefficient."""
        out = WebSum()
        for c, w in self.terms.values():
            out.add(c.substitute("A", -6), w)
        return out

    def __eq__(self, other):
        return isinstance(other, WebSum) and self.multiset() == other.multiset()

    def _text(self, fmt) -> str:
        parts = [fmt(self.scalar)] if self.scalar.terms or not self.residuals else []
        for c, w in self.residuals:
            parts.append(f"({fmt(c)}) * web[{serialize_graph(w).replace(chr(10), '; ')}]")
        return " + ".join(parts)

    def canonical(self) -> str:
        return self._text(LaurentPoly.canonical)

    def __str__(self):
        return self._text(str)


_REDUCE_CACHE: dict = {}


def reduce_web(w: LabelGraph) -> WebSum:
    """Apply loop, bigon and square relations until none applies."""
    key = canonical_key(w)
    if key in _REDUCE_CACHE:
        return _REDUCE_CACHE[key]
    out = WebSum()
    if w.loops:
        stripped = Web(w.vtype, w.rot, w.twin, w.kind, 0)
        reduce_web(stripped).scale_into(out, LOOP_Q ** w.loops)
    else:
        step = _reduction_step(w)
        if step is None:
            out.add(LaurentPoly.const(1), w)
        else:
            for coeff, nxt in step:
                reduce_web(nxt).scale_into(out, coeff)
    if len(_REDUCE_CACHE) > 200000:
        _REDUCE_CACHE.clear()
    _REDUCE_CACHE[key] = out
    return out


def _reduction_step(w: LabelGraph):
    hv = w.hv
    fs = faces(w)
    for f in fs:
        if len(f) == 2 and hv[f[0]] != hv[f[1]]:
            d0, d1 = f
            u, x = hv[d0], hv[d1]
            u3 = _third(w, u, (d0, w.twin[d1]))
            x3 = _third(w, x, (d1, w.twin[d0]))
            through = {u3: d0, d0: u3, w.twin[d0]: x3, x3: w.twin[d0]}
            return [(BIGON_Q, splice(w, (u, x), through, cls=Web))]
    for f in fs:
        if len(f) == 4 and len({hv[h] for h in f}) == 4:
            vs = [hv[h] for h in f]
            ext = [_third(w, vs[i], (f[i], w.twin[f[i - 1]])) for i in range(4)]
            out = []
            for start in (0, 1):
                through = {}
                for i in (start, start + 2):
                    j = (i + 1) % 4
                    d = f[i]
                    through.update({ext[i]: d, d: ext[i], w.twin[d]: ext[j], ext[j]: w.twin[d]})
                out.append((LaurentPoly.const(1), splice(w, vs, through, cls=Web)))
            return out
    return None


def _third(w: LabelGraph, v: int, used) -> int:
    (h,) = [x for x in w.rot[v] if x not in used]
    return h


def residual_faces_ok(w: LabelGraph) -> bool:
    """True when no loop, bigon or square face with distinct corners remains."""
    return w.loops == 0 and _reduction_step(w) is None


def kuperberg(d: Diagram, normalized: bool = True, capacity: int = DEFAULT_CAPACITY) -> WebSum:
    """sl3 bracket as scalar plus irreducible webs.

    ``normalized=True`` (default) uses writhe-corrected thin-edge scalars,
    which makes the value invariant under the first Reidemeister move;
    ``normalized=False`` uses the literal scalars and equals
    ``q^{-4w/3}`` times the normalized value.
    """
    if d.kind.is_knotoid:
        raise UnsupportedError("the sl3 bracket is not defined for knotoids")
    out = WebSum()
    for s in states(d, capacity):
        scal, web = kuperberg_web(smooth(d, s), normalized)
        reduce_web(web).scale_into(out, scal)
    return out


def kuperberg_raw_factor(d: Diagram) -> LaurentPoly:
    """``q^{-4w/3}``: raw value = factor * normalized value."""
    return q(f"{-4 * writhe(d)}/3")


# --------------------------------------------------------------------------
# arrow


def arrow_value(g: LabelGraph) -> LaurentPoly:
    """Jones-type scalars, one K_m per irreducible component with 2m cusps."""
    if g.count("P", "Q"):
        raise UnsupportedError("the arrow polynomial is not defined for knotoids")
    scal = _product(JONES_STEP[t] for t in _thin_types(g))
    cd = circle_count(delete_thin(g))
    for toks in cd.cusps:
        m = cusp_index(toks)
        if m:
            scal = scal * LaurentPoly.K(m)
    return scal * _loop_power(cd.closed, 0)


def arrow(d: Diagram, capacity: int = DEFAULT_CAPACITY) -> LaurentPoly:
    """Normalized arrow polynomial."""
    if d.kind.is_knotoid:
        raise UnsupportedError("the arrow polynomial is not defined for knotoids")
    return sum_polys(arrow_value(smooth(d, s)) for s in states(d, capacity))
