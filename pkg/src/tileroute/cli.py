"""Command line interface: ``tileroute {gen,check,route,bench}``.

Instance files may be given as paths or as ``@name`` for a bundled fixture.
Exit codes: 0 success, 1 invalid input or failed check, 2 search failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .bench import MODES, run_benchmark
from .instance import (InstanceError, bundled, generate_instance, load_instance, save_instance,
                       serialize_instance)
from .model import INF, TargetSet
from .router import FLAVORS, check_potential, make_potential

log = logging.getLogger("tileroute")

OK, INVALID, SEARCH_FAILED = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None
    if not 0 < f <= 1:
        raise argparse.ArgumentTypeError("must lie in (0, 1]")
    return f


def _flavors(text: str) -> list[str]:
    names = list(FLAVORS) if text == "all" else [s.strip() for s in text.split(",") if s.strip()]
    bad = [n for n in names if n not in FLAVORS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown flavors {bad}; choose from {', '.join(FLAVORS)}")
    return names


def _load(spec: str):
    return bundled(spec[1:]) if spec.startswith("@") else load_instance(spec)


def cmd_gen(a) -> int:
    try:
        inst = generate_instance(a.seed, p=a.p, q=a.q, l=a.l, t=a.t, nets=a.nets,
                                 block_density=a.block_density, cost_max=a.cost_max, size=a.size)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return INVALID
    if a.output:
        save_instance(inst, a.output)
        log.info("wrote %s with %d nets", a.output, len(inst.nets))
    else:
        print(serialize_instance(inst))
    return OK


def cmd_check(a) -> int:
    inst = _load(a.file)
    points = list(inst.window.points())
    problems = 0
    for net in inst.nets:
        T = TargetSet(r for pin in net.pins[1:] for r in pin)
        for flavor in a.flavors:
            pot = make_potential(flavor, inst.costs, T, inst.epsilon)
            bad = check_potential(inst.costs, T, pot, points, inst.window.l)
            problems += len(bad)
            for b in bad[:5]:
                print(f"{net.name} {flavor}: {b}")
    print(f"{inst.name}: {len(inst.nets)} nets, {len(points)} window vertices, "
          f"{problems} feasibility violations")
    return OK if problems == 0 else INVALID


def cmd_route(a) -> int:
    inst = _load(a.file)
    mode = "incremental" if a.delta is not None else "bulk"
    rep = run_benchmark(inst, [a.flavor], mode, delta=a.delta, epsilon=a.epsilon)
    for r in rep.rows:
        cost = "inf" if r.cost == INF else str(r.cost)
        status = f"  FAILED ({r.error})" if r.error else ""
        print(f"{r.net}: cost {cost}, labeled {r.labeled}, popped {r.popped}{status}")
    return SEARCH_FAILED if rep.failures() else OK


def cmd_bench(a) -> int:
    inst = _load(a.file)
    rep = run_benchmark(inst, a.flavors, a.mode, timing=not a.no_timing,
                        delta=a.delta, epsilon=a.epsilon)
    text = rep.to_csv()
    if a.output:
        Path(a.output).write_text(text)
    else:
        sys.stdout.write(text)
    if a.figure:
        from .plotting import plot_report
        plot_report(rep, a.figure, title=f"{inst.name}, {a.mode}")
    for r in rep.failures():
        print(f"{r.net} {r.flavor}: {r.error}", file=sys.stderr)
    if rep.inconsistent_nets():
        print(f"cost mismatch across flavors: {rep.inconsistent_nets()}", file=sys.stderr)
        return SEARCH_FAILED
    return SEARCH_FAILED if rep.failures() else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tileroute", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sp = ap.add_subparsers(dest="command", required=True)

    g = sp.add_parser("gen", help="generate a random instance")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--p", type=int, default=4, help="vertical tile lines")
    g.add_argument("--q", type=int, default=4, help="horizontal tile lines")
    g.add_argument("--l", type=int, default=3, help="layers")
    g.add_argument("--t", type=int, default=3, help="pins per net")
    g.add_argument("--nets", type=int, default=6)
    g.add_argument("--block-density", type=float, default=0.05)
    g.add_argument("--cost-max", type=int, default=20)
    g.add_argument("--size", type=int, default=None, help="window side length")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sp.add_parser("check", help="validate an instance and sweep potential feasibility")
    c.add_argument("file")
    c.add_argument("--flavors", type=_flavors, default=list(FLAVORS))
    c.set_defaults(func=cmd_check)

    r = sp.add_parser("route", help="route all nets with one potential")
    r.add_argument("file")
    r.add_argument("--flavor", choices=FLAVORS, default="general")
    r.add_argument("--epsilon", type=_fraction, default=None)
    r.add_argument("--delta", type=_fraction, default=None,
                   help="honor reservations with this discount")
    r.set_defaults(func=cmd_route)

    b = sp.add_parser("bench", help="compare potentials, write CSV")
    b.add_argument("file")
    b.add_argument("--flavors", type=_flavors, default=list(FLAVORS))
    b.add_argument("--mode", choices=MODES, default="bulk")
    b.add_argument("--no-timing", action="store_true", help="zero the timing columns")
    b.add_argument("--epsilon", type=_fraction, default=None)
    b.add_argument("--delta", type=_fraction, default=None)
    b.add_argument("-o", "--output")
    b.add_argument("--figure", help="also write a PNG bar chart")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return INVALID if e.code else OK
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return a.func(a)
    except InstanceError as e:
        for line in e.errors:
            print(f"error: {line}", file=sys.stderr)
        return INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
