"""Command line interface: compute, verify and census.

Exit codes: 0 success, 1 parse or structural error, 2 capacity exceeded,
3 unsupported combination, 10 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from .diagram import Diagram, DiagramError, parse_diagram, writhe
from .moves import CLASSICAL_MOVES, MOVE_TYPES, MoveSpec, apply_move, random_move
from .oracle import OracleCapacityError, oracle_arrow, oracle_jones
from .reducer import reduce
from .specialize import UnsupportedError, arrow, jones, kuperberg
from .statesum import CapacityError, state_sum

log = logging.getLogger("labelbracket")

EXIT_OK, EXIT_PARSE, EXIT_CAPACITY, EXIT_UNSUPPORTED, EXIT_MISMATCH = 0, 1, 2, 3, 10
INVARIANTS = ("jones", "kuperberg", "arrow", "statesum", "reduce")


class Mismatch(Exception):
    pass


# --------------------------------------------------------------------------
# helpers


def read_codes(path: str) -> list[str]:
    """Diagram codes, one per line; blank lines and ``#`` comments are skipped."""
    lines = Path(path).read_text().splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


def _check_capacity(d: Diagram, limit: int) -> None:
    if d.n_classical > limit:
        raise CapacityError(f"{d.n_classical} classical crossings exceed the limit of {limit}")


def evaluate(d: Diagram, invariant: str, limit: int, canonical: bool = False) -> str:
    """Text of one invariant; polynomials in human form unless ``canonical``."""
    _check_capacity(d, limit)
    if invariant in ("jones", "arrow", "kuperberg"):
        fn = {"jones": jones, "arrow": arrow, "kuperberg": lambda x, n: kuperberg(x, capacity=n)}[invariant]
        value = fn(d, limit)
        return value.canonical() if canonical else str(value)
    if invariant in ("statesum", "reduce"):
        s = state_sum(d, limit)
        if invariant == "reduce":
            s = reduce(s)
        lines = [f"{s.context}(G): {len(s)} terms"]
        for g, c in s.items():
            lines.append(f"{c} * [{str(g).replace(chr(10), '; ')}]")
        return "\n".join(lines)
    raise ValueError(f"unknown invariant {invariant!r}")


def invariants_of(d: Diagram, limit: int) -> dict:
    """All invariants that apply to the kind of ``d``, as canonical text."""
    out = {"jones": jones(d, limit).canonical()}
    if not d.kind.is_knotoid:
        out["arrow"] = arrow(d, limit).canonical()
        out["kuperberg"] = sorted(_kuperberg_multiset(d, limit))
    return out


def _kuperberg_multiset(d: Diagram, limit: int):
    return [f"{c}|{w}" for c, w in sorted(kuperberg(d, capacity=limit).multiset(), key=str)]


def _error_exit(exc: Exception) -> int:
    if isinstance(exc, (DiagramError, ValueError)) and not isinstance(
        exc, (CapacityError, OracleCapacityError, UnsupportedError)
    ):
        return EXIT_PARSE
    if isinstance(exc, (CapacityError, OracleCapacityError)):
        return EXIT_CAPACITY
    return EXIT_UNSUPPORTED


# --------------------------------------------------------------------------
# compute


def cli_compute(args) -> int:
    if args.code is None and args.input is None:
        print("error: give --code or --input", file=sys.stderr)
        return EXIT_PARSE
    codes = [args.code] if args.code is not None else read_codes(args.input)
    status = EXIT_OK
    for code in codes:
        try:
            d = parse_diagram(code, spherical=args.spherical)
            if args.invariant in ("arrow", "kuperberg") and d.kind.is_knotoid:
                raise UnsupportedError(f"{args.invariant} is not defined for knotoids")
            value = evaluate(d, args.invariant, args.max_crossings, canonical=args.format == "json")
        except (DiagramError, CapacityError, UnsupportedError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = status or _error_exit(exc)
            continue
        if args.format == "json":
            print(json.dumps({"code": code, "invariant": args.invariant, "value": value}))
        else:
            print(value)
    return status


# --------------------------------------------------------------------------
# verify


def fuzz(d: Diagram, rng: random.Random, depth: int, limit: int) -> list[MoveSpec]:
    types = CLASSICAL_MOVES if d.kind.value != "virtual" else MOVE_TYPES
    seq = []
    cur = d
    for _ in range(depth):
        m = random_move(cur, rng, types)
        if m is None:
            break
        nxt = apply_move(cur, m)
        if nxt.n_classical > limit:
            continue
        seq.append(m)
        cur = nxt
    return seq


def verify_one(code: str, rng: random.Random, depth: int, limit: int, expected: dict | None, report: list) -> None:
    d = parse_diagram(code)
    _check_capacity(d, limit)
    base = invariants_of(d, limit)
    if expected:
        for name, value in expected.items():
            if name in base and name != "kuperberg" and base[name] != _canon(value):
                raise Mismatch(f"{code}: {name} is {base[name]}, expected {value}")
    # oracle equivalence
    oj = oracle_jones(d, limit).canonical()
    if oj != base["jones"]:
        raise Mismatch(f"{code}: jones {base['jones']} differs from oracle {oj}")
    if "arrow" in base:
        oa = oracle_arrow(d, limit).canonical()
        if oa != base["arrow"]:
            raise Mismatch(f"{code}: arrow {base['arrow']} differs from oracle {oa}")
    report.append(f"{code}: oracle agreement ok")
    # move fuzz; the first failing prefix is the minimal counterexample
    seq = fuzz(d, rng, depth, limit)
    cur = d
    for i, m in enumerate(seq):
        cur = apply_move(cur, m)
        now = invariants_of(cur, limit)
        for name, value in base.items():
            if now[name] != value:
                moves = "; ".join(str(x) for x in seq[: i + 1])
                raise Mismatch(f"{code}: {name} changed after moves [{moves}] giving {cur.to_code()}")
    report.append(f"{code}: invariant under {len(seq)} moves [{'; '.join(map(str, seq))}]")


def _canon(text: str) -> str:
    from .algebra import parse_poly

    return parse_poly(text).canonical()


def cli_verify(args) -> int:
    codes = read_codes(args.input) if args.input else []
    expected: dict[str, dict] = {}
    if args.expected:
        for line in Path(args.expected).read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                expected[rec.pop("code")] = rec
        if not args.input:
            codes = list(expected)
    rng = random.Random(args.seed)
    report: list[str] = [f"{len(codes)} diagrams, depth {args.depth}, seed {args.seed}"]
    status = EXIT_OK
    for code in codes:
        try:
            verify_one(code, rng, args.depth, args.max_crossings, expected.get(code), report)
        except Mismatch as exc:
            report.append(f"MISMATCH {exc}")
            status = EXIT_MISMATCH
            break
        except (DiagramError, CapacityError, OracleCapacityError, UnsupportedError, ValueError) as exc:
            report.append(f"ERROR {code}: {exc}")
            status = status or _error_exit(exc)
    if args.format == "json":
        print(json.dumps({"status": status, "report": report}))
    else:
        print("\n".join(report))
    return status


# --------------------------------------------------------------------------
# census


def census_record(code: str, limit: int = 24) -> dict:
    rec: dict = {"code": code}
    t0 = time.perf_counter()
    try:
        d = parse_diagram(code)
        _check_capacity(d, limit)
        rec["writhe"] = writhe(d)
        rec["jones"] = jones(d, limit).canonical()
        if d.kind.is_knotoid:
            rec["arrow"] = rec["kuperberg"] = None
            rec["residual_webs"] = None
        else:
            rec["arrow"] = arrow(d, limit).canonical()
            k = kuperberg(d, capacity=limit)
            rec["kuperberg"] = k.scalar.canonical()
            rec["residual_webs"] = len(k.residuals)
    except (DiagramError, CapacityError, UnsupportedError, ValueError) as exc:
        rec["error"] = f"{type(exc).__name__}: {exc}"
    rec["seconds"] = round(time.perf_counter() - t0, 6)
    return rec


def _done_codes(path: Path) -> set[str]:
    done = set()
    if path.exists():
        for line in path.read_text().splitlines():
            try:
                done.add(json.loads(line)["code"])
            except (ValueError, KeyError):
                continue
    return done


def run_census(codes: Iterable[str], output: Path, workers: int = 1, limit: int = 24) -> int:
    done = _done_codes(output)
    todo = [c for c in dict.fromkeys(codes) if c not in done]
    output.parent.mkdir(parents=True, exist_ok=True)
    with output.open("a") as fh:
        if workers > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(census_record, todo, [limit] * len(todo))
                for rec in results:
                    fh.write(json.dumps(rec) + "\n")
                    fh.flush()
        else:
            for code in todo:
                fh.write(json.dumps(census_record(code, limit)) + "\n")
                fh.flush()
    return len(todo)


def cli_census(args) -> int:
    try:
        codes = read_codes(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    n = run_census(codes, Path(args.output), args.workers, args.max_crossings)
    log.info("wrote %d records", n)
    return EXIT_OK


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="labelbracket", description=__doc__.splitlines()[0])
    p.add_argument("--verbose", "-v", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--max-crossings", type=int, default=24, help="capacity guard on classical crossings")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("compute", help="evaluate one invariant")
    c.add_argument("--invariant", choices=INVARIANTS, required=True)
    c.add_argument("--code")
    c.add_argument("--input")
    c.add_argument("--spherical", action="store_true", help="read knotoids as spherical")
    common(c)
    c.set_defaults(func=cli_compute)

    v = sub.add_parser("verify", help="oracle and move-invariance checks")
    v.add_argument("--input", help="corpus file, one diagram code per line")
    v.add_argument("--expected", help="JSON lines with code and expected invariant values")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--depth", type=int, default=5)
    common(v)
    v.set_defaults(func=cli_verify)

    s = sub.add_parser("census", help="batch invariants to JSON lines (resumable)")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--workers", type=int, default=1)
    common(s)
    s.set_defaults(func=cli_census)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
