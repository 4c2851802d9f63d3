"""Seeded diagram corpora shared by the tests."""

from __future__ import annotations

import random

from labelbracket import braid_closure, parse_diagram

NAMED = {
    "circle": "O[1]",
    "positive kink": "X[1,1,2,2]",
    "negative kink": "X[2,1,1,2]",
    "right trefoil": "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]",
    "left trefoil": "X[1,4,2,5] X[5,2,6,3] X[3,6,4,1]",
    "figure-eight": "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
}
VIRTUAL_TREFOIL = "X[1,5,2,4] X[3,1,4,6] V[2,5,3,6]"
CUT_TREFOIL = "X[1,5,2,4] X[3,7,4,6] X[5,3,6,2] P[1] Q[7]"


def random_word(rng: random.Random, strands: int, length: int, virtual: bool) -> str:
    letters = "sSv" if virtual else "sS"
    return " ".join(f"{rng.choice(letters)}{rng.randint(1, strands - 1)}" for _ in range(length))


def random_diagrams(seed: int, count: int, max_crossings: int, virtual: bool = False):
    """Braid closures with at most ``max_crossings`` classical crossings."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        strands = rng.randint(2, 4)
        word = random_word(rng, strands, rng.randint(1, max_crossings), virtual)
        d = braid_closure(word, strands)
        if d.n_classical <= max_crossings and (not virtual or len(d.crossings) > d.n_classical):
            out.append(d)
    return out


def classical_corpus(seed: int = 2024, count: int = 200):
    return [parse_diagram(c) for c in NAMED.values()] + random_diagrams(seed, count, 8)


def specializations(s):
    """Jones, arrow and sl3 values of a formal sum of label graphs."""
    from labelbracket.algebra import sum_polys
    from labelbracket.specialize import (
        WebSum,
        arrow_value,
        jones_value,
        kuperberg_web,
        reduce_web,
    )

    items = s.items()
    j = sum_polys(jones_value(g) * c for g, c in items)
    out = {"jones": j}
    if s.context in ("C", "V"):
        out["arrow"] = sum_polys(arrow_value(g) * c for g, c in items)
        web = WebSum()
        for g, c in items:
            scal, w = kuperberg_web(g)
            reduce_web(w).scale_into(web, scal * c)
        out["kuperberg"] = web
    return out
