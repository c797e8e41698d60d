"""``symbreak`` command line.

Exit codes: 0 solvable / success, 1 invalid configuration, 2 unsolvable,
3 unknown, 4 enumeration cap exceeded or a ``--strict`` simulation dominated
by timeouts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .analysis import (
    decide_blackboard,
    decide_message_passing_fixed_ports,
    decide_message_passing_worst_case,
    solvability_curve,
    t_range,
)
from .complexes import ChromaticComplex, Simplex, Vertex, export_dot, project_pi_complex
from .errors import CapExceeded, InvalidConfiguration, SymbreakError
from .knowledge import Model, PortAssignment, adversarial_ports, project_pi_tilde, random_ports, validate_ports
from .protocols import PROTOCOLS, max_task, output_complex_task, run_trials, summarize
from .randomness import DEFAULT_CAP, RandomnessConfiguration, Realization, enumerate_all
from .tasks import OutputComplex, make_leader_election, make_m_leader_election

EXIT_OK, EXIT_INVALID, EXIT_UNSOLVABLE, EXIT_UNKNOWN, EXIT_CAP = 0, 1, 2, 3, 4


class ConfigError(Exception):
    pass


# -- config ingestion -------------------------------------------------------


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def load_alpha(args) -> RandomnessConfiguration | None:
    if args.sources and args.assignment:
        raise ConfigError("give either --sources or --assignment, not both")
    if args.sources:
        try:
            counts = [int(x) for x in args.sources.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --sources {args.sources!r}") from exc
        alpha = RandomnessConfiguration.from_counts(counts)
    elif args.assignment:
        alpha = RandomnessConfiguration.from_json(_load_json(args.assignment))
    else:
        return None
    if getattr(args, "n", None) is not None and args.n != alpha.n:
        raise ConfigError(f"--n {args.n} disagrees with the configuration's {alpha.n} parties")
    return alpha


def require_alpha(args) -> RandomnessConfiguration:
    alpha = load_alpha(args)
    if alpha is None:
        raise ConfigError("a randomness configuration is required (--sources or --assignment)")
    return alpha


def load_ports(arg: str | None, n: int, alpha: RandomnessConfiguration | None) -> tuple[PortAssignment, str]:
    """Returns the port table and its kind: ``adversarial`` or ``fixed``."""
    if arg is None or arg == "adversarial":
        if alpha is None:
            raise ConfigError("adversarial ports need a randomness configuration")
        ports, _ = adversarial_ports(alpha)
        return ports, "adversarial"
    if arg.startswith("random:"):
        try:
            seed = int(arg.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad port seed in {arg!r}") from exc
        return random_ports(n, seed), "fixed"
    ports = PortAssignment.from_json(_load_json(arg))
    if ports.n != n:
        raise ConfigError(f"port table is for n={ports.n}, configuration has n={n}")
    if not validate_ports(ports):
        raise ConfigError("port table is not a bijection onto the other parties")
    return ports, "fixed"


def load_model(args, n: int, alpha) -> tuple[Model, str]:
    if args.model == "blackboard":
        return Model.blackboard(), "blackboard"
    ports, kind = load_ports(args.ports, n, alpha)
    return Model.message_passing(ports), kind


def load_task(arg: str, n: int) -> OutputComplex:
    if arg == "le":
        return make_leader_election(n)
    if arg.startswith("mle:"):
        try:
            m = int(arg[4:])
        except ValueError as exc:
            raise ConfigError(f"bad task {arg!r}") from exc
        return make_m_leader_election(n, m)
    O = OutputComplex.from_json(_load_json(arg))
    if O.n != n:
        raise ConfigError(f"task is for n={O.n}, configuration has n={n}")
    return O


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, name: str, text: str) -> None:
    if args.out:
        write_atomic(Path(args.out) / name, text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def cmd_decide(args) -> int:
    alpha = require_alpha(args)
    if args.task not in (None, "le"):
        raise ConfigError("decide covers leader election only")
    if args.model == "blackboard":
        verdict = decide_blackboard(alpha)
    else:
        _, kind = load_ports(args.ports, alpha.n, alpha)
        verdict = (decide_message_passing_worst_case if kind == "adversarial" else decide_message_passing_fixed_ports)(alpha)
    print(verdict.label)
    if verdict.solvable is None:
        return EXIT_UNKNOWN
    return EXIT_OK if verdict.solvable else EXIT_UNSOLVABLE


def cmd_analyze(args) -> int:
    alpha = require_alpha(args)
    model, kind = load_model(args, alpha.n, alpha)
    O = load_task(args.task or "le", alpha.n)
    curve = solvability_curve(model, alpha, O, t_range(args.t), cap=args.cap)
    data = curve.to_json()
    data["ports"] = kind
    if args.out:
        write_atomic(Path(args.out) / "curve.csv", curve.to_csv())
        write_atomic(Path(args.out) / "curve.json", json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(curve.to_csv())
    return EXIT_OK


def _parties(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad party list {text!r}") from exc


def cmd_simulate(args) -> int:
    protocol = args.protocol
    alpha = load_alpha(args)
    v1, v2 = _parties(args.v1), _parties(args.v2)
    task = inputs = ports = None
    if protocol == "matching":
        if not v1 or not v2:
            raise ConfigError("matching needs --v1 and --v2")
        if set(v1) & set(v2):
            raise ConfigError("--v1 and --v2 must be disjoint")
        n = alpha.n if alpha else max(v1 + v2) + 1
        if max(v1 + v2) >= n or min(v1 + v2) < 0:
            raise ConfigError("party index out of range")
        if args.ports:
            ports, _ = load_ports(args.ports, n, alpha)
    else:
        if alpha is None:
            raise ConfigError("a randomness configuration is required (--sources or --assignment)")
        n = alpha.n
        if protocol == "bb-le" and args.model == "mp":
            raise ConfigError("bb-le runs on the blackboard model")
        if protocol == "gcd-le" and args.ports:
            ports, _ = load_ports(args.ports, n, alpha)
        if protocol == "task-by-leader":
            if args.model == "mp":
                ports, _ = load_ports(args.ports, n, alpha)
            if args.inputs:
                inputs = tuple(json.loads(f"[{args.inputs}]"))
                if len(inputs) != n:
                    raise ConfigError(f"{len(inputs)} inputs for {n} parties")
            arg = args.task or "le"
            task = max_task if arg == "max" else output_complex_task(load_task(arg, n), name=arg)
    if protocol == "matching" and alpha is None:
        src = [3] * n
        for p in v1:
            src[p] = 1
        for p in v2:
            src[p] = 2
        alpha = RandomnessConfiguration(tuple(src))

    rows = run_trials(protocol, alpha, args.trials, args.seed, ports, args.max_rounds, task, inputs,
                      v1, v2, workers=args.workers, keep_traces=args.trace)
    summary = summarize(protocol, alpha, args.seed, rows)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out:
        write_atomic(Path(args.out) / "summary.json", text)
        if args.trace:
            lines = []
            for i, row in enumerate(rows):
                for rec in row["trace"] or []:
                    lines.append(json.dumps({"trial": i, **rec}, sort_keys=True))
            write_atomic(Path(args.out) / "traces.jsonl", "\n".join(lines) + ("\n" if lines else ""))
    else:
        sys.stdout.write(text)
    if args.strict:
        failed = sum(r["status"] in ("timeout", "stuck") for r in rows)
        if 2 * failed > len(rows):
            return EXIT_CAP
    return EXIT_OK


def _parse_realization(text: str) -> Realization:
    strings = tuple(s.strip() for s in text.split(","))
    if any(set(s) - {"0", "1"} for s in strings) or len({len(s) for s in strings}) != 1:
        raise ConfigError(f"bad realization {text!r}: need equal-length bit strings")
    return Realization(strings)


def cmd_complex(args) -> int:
    what = args.what
    if what == "pi-tilde":
        if not args.realization:
            raise ConfigError("pi-tilde needs --realization")
        rho = _parse_realization(args.realization)
        alpha = load_alpha(args)
        model, _ = load_model(args, rho.n, alpha)
        K = project_pi_tilde(model, rho)
    elif what == "pi-O":
        alpha = load_alpha(args)
        n = args.n if args.n is not None else (alpha.n if alpha else None)
        if n is None:
            raise ConfigError("pi-O needs --n")
        K = project_pi_complex(load_task(args.task or "le", n).complex())
    else:
        if args.n is None:
            raise ConfigError("R needs --n")
        t = int(args.t)
        if args.n * t > args.cap:
            raise CapExceeded(f"n*t = {args.n * t} exceeds cap {args.cap}")
        facets = [Simplex(frozenset(Vertex.of(i + 1, s) for i, s in enumerate(rho.strings)))
                  for rho in enumerate_all(args.n, t, args.cap)]
        K = ChromaticComplex(args.n, facets)
    if args.format == "dot":
        text = export_dot(K, what.replace("-", "_"))
        if not text.endswith("\n"):
            text += "\n"
    else:
        text = json.dumps(K.to_json(), indent=2, sort_keys=True) + "\n"
    _emit(args, f"complex.{args.format}", text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=("blackboard", "mp"), default="blackboard")
    common.add_argument("--sources", help="source counts n_1,...,n_k")
    common.add_argument("--assignment", help="JSON file with source_of")
    common.add_argument("--ports", help="adversarial | random:SEED | FILE.json")
    common.add_argument("--task", help="le | mle:M | FILE.json (simulate also takes max)")
    common.add_argument("--n", type=int)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP)
    common.add_argument("--out", help="output directory (default: stdout)")

    p = argparse.ArgumentParser(prog="symbreak", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("decide", parents=[common], help="eventual leader-election verdict")

    a = sub.add_parser("analyze", parents=[common], help="exact solvability curve")
    a.add_argument("--t", default="1..3", help="A..B inclusive")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo protocol runs")
    s.add_argument("--protocol", choices=PROTOCOLS, required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-rounds", type=int)
    s.add_argument("--v1", help="matching: comma-separated parties")
    s.add_argument("--v2", help="matching: comma-separated parties")
    s.add_argument("--inputs", help="task-by-leader: comma-separated JSON values")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--strict", action="store_true")

    c = sub.add_parser("complex", parents=[common], help="emit a complex as DOT or JSON")
    c.add_argument("--what", choices=("pi-tilde", "pi-O", "R"), required=True)
    c.add_argument("--realization", help="comma-separated bit strings, party 1 first")
    c.add_argument("--t", default="1")
    c.add_argument("--format", choices=("dot", "json"), default="json")
    return p


COMMANDS = {"decide": cmd_decide, "analyze": cmd_analyze, "simulate": cmd_simulate, "complex": cmd_complex}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ConfigError, SymbreakError, InvalidConfiguration, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
