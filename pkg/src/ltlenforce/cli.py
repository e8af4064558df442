"""Replay a recorded trace through the simulated enforcers.

Exit status: 0 on success, 1 for usage or input format errors, 2 when the
formula is unsatisfiable, 3 when ``--check-oracle`` finds a mismatch and 4
for internal protocol errors.
"""
from __future__ import annotations

import argparse
import logging
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .enforcement import ALGORITHMS, GLOBAL, EnforcementError, RejectedSpecificationError
from .ltl.events import AlphabetPartition, format_event, parse_event
from .ltl.syntax import FormulaSyntaxError, UnknownAtomError, parse_formula
from .netsim import Network
from .oracle import is_bad, min_safe_distance

log = logging.getLogger("ltlenforce")

EXIT_OK, EXIT_USAGE, EXIT_REJECTED, EXIT_ORACLE, EXIT_PROTOCOL = 0, 1, 2, 3, 4


class InputFormatError(ValueError):
    pass


class OracleMismatch(AssertionError):
    pass


@dataclass
class RunConfig:
    formula: str
    partition: str
    trace: str
    algorithm: str = GLOBAL
    out: Optional[str] = None
    log: Optional[str] = None
    stats: Optional[str] = None
    check_oracle: bool = False
    loop_bound: int = 3


# input formats --------------------------------------------------------------

_COMPONENT = re.compile(r"^\s*M(\d+)\s*:\s*(.*)$")


def parse_partition(text: str) -> AlphabetPartition:
    """One ``M<i>: a, b`` line per component; ``#`` starts a comment."""
    comps = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _COMPONENT.match(line)
        if not m:
            raise InputFormatError(f"partition line {lineno}: expected 'M<i>: a, b', got {raw!r}")
        idx = int(m.group(1))
        if idx in comps:
            raise InputFormatError(f"partition line {lineno}: M{idx} declared twice")
        names = [a.strip() for a in m.group(2).split(",") if a.strip()]
        comps[idx] = frozenset(names)
    if sorted(comps) != list(range(1, len(comps) + 1)):
        raise InputFormatError(f"components must be numbered M1..M{len(comps)}")
    try:
        return AlphabetPartition(tuple(comps[i] for i in range(1, len(comps) + 1)))
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def parse_trace(text: str, alphabet=None) -> list:
    trace = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            ev = parse_event(line)
        except ValueError as exc:
            raise InputFormatError(f"trace line {lineno}: {exc}") from None
        if alphabet is not None and not ev <= alphabet:
            raise InputFormatError(f"trace line {lineno}: unknown atoms {sorted(ev - alphabet)}")
        trace.append(ev)
    return trace


def format_trace(trace) -> str:
    return "".join(format_event(e) + "\n" for e in trace)


def format_stats(outcomes, distances) -> str:
    rows = [("round", "distance", "messages", "max_entries", "max_domain")]
    for t, (o, d) in enumerate(zip(outcomes, distances), start=1):
        s = o.stats
        rows.append((str(t), str(d), str(s.messages_sent), str(s.max_message_entries),
                     str(s.max_domain_size)))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    table = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows]
    keys = [
        f"rounds={len(outcomes)}",
        f"messages_total={sum(o.stats.messages_sent for o in outcomes)}",
        "messages_per_round=" + ",".join(str(o.stats.messages_sent) for o in outcomes),
        f"max_domain_size={max((o.stats.max_domain_size for o in outcomes), default=0)}",
        "distances=" + ",".join(str(d) for d in distances),
    ]
    return "\n".join(table) + "\n\n" + "\n".join(keys) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None


# driver ---------------------------------------------------------------------

def check_step(formula, history, sigma, output, algorithm, loop_bound) -> None:
    """Raise OracleMismatch when one output step is unsound, opaque or, in global mode, not closest."""
    if is_bad(formula, history + [output], loop_bound):
        raise OracleMismatch(f"output {format_event(output)} makes a bad prefix")
    if output != sigma and not is_bad(formula, history + [sigma], loop_bound):
        raise OracleMismatch(f"input {format_event(sigma)} was safe but changed")
    if algorithm == GLOBAL:
        best = min_safe_distance(formula, history, sigma, loop_bound)
        if len(output ^ sigma) != best:
            raise OracleMismatch(
                f"output distance {len(output ^ sigma)} but closest safe event is at {best}"
            )


def run(config: RunConfig) -> int:
    text = config.formula
    if text.startswith("@"):
        text = _read(text[1:])
    partition = parse_partition(_read(config.partition))
    formula = parse_formula(text.strip(), alphabet=partition.atoms)
    trace = parse_trace(_read(config.trace), partition.atoms)

    net = Network(formula, partition, config.algorithm)
    outcomes, distances, history = [], [], []
    for sigma in trace:
        outcome = net.run_round(sigma)
        output = outcome.chosen_event
        if config.check_oracle:
            check_step(formula, history, sigma, output, config.algorithm, config.loop_bound)
        outcomes.append(outcome)
        distances.append(len(output ^ sigma))
        history.append(output)

    if config.out:
        out = Path(config.out)
        out.write_text(format_trace(history))
        for i in range(1, len(partition) + 1):
            local = [o.local_outputs[i - 1] for o in outcomes]
            out.with_name(f"{out.name}.M{i}").write_text(format_trace(local))
    else:
        sys.stdout.write(format_trace(history))
    if config.log:
        Path(config.log).write_text("\n\n".join(r.to_text() for r in net.logs) + "\n")
    stats = format_stats(outcomes, distances)
    if config.stats:
        Path(config.stats).write_text(stats)
    else:
        sys.stderr.write(stats)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ltlenforce", description="Decentralized LTL enforcement over a recorded trace.")
    p.add_argument("--formula", required=True, help="formula text, or @path to read it from a file")
    p.add_argument("--partition", required=True, help="file with one 'M<i>: a, b' line per component")
    p.add_argument("--trace", required=True, help="file with one '{p,q}' event per line")
    p.add_argument("--algorithm", choices=ALGORITHMS, default=GLOBAL)
    p.add_argument("--out", help="corrected trace; local traces go to <out>.M<i> (default: stdout)")
    p.add_argument("--log", help="write per-round message logs here")
    p.add_argument("--stats", help="write statistics here (default: stderr)")
    p.add_argument("--check-oracle", action="store_true",
                   help="check every step against the brute-force reference")
    p.add_argument("--loop-bound", type=int, default=3, help="continuation bound for the oracle")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.loop_bound < 1:
        print("ltlenforce: --loop-bound must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    config = RunConfig(
        formula=args.formula, partition=args.partition, trace=args.trace,
        algorithm=args.algorithm, out=args.out, log=args.log, stats=args.stats,
        check_oracle=args.check_oracle, loop_bound=args.loop_bound,
    )
    try:
        return run(config)
    except (InputFormatError, FormulaSyntaxError, UnknownAtomError) as exc:
        print(f"ltlenforce: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RejectedSpecificationError as exc:
        print(f"ltlenforce: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except OracleMismatch as exc:
        print(f"ltlenforce: oracle check failed: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except EnforcementError as exc:
        print(f"ltlenforce: protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL


if __name__ == "__main__":
    sys.exit(main())
