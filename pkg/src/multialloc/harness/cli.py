"""Command-line interface.

Exit status: 0 when every certification passes, 2 when a certified bound
fails (a witness instance is printed), 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from ..errors import MultiallocError, ProviderError
from ..game import P, Q, PickSequence, omega
from ..itemsets import as_mask, members
from ..mms import FileProvider, brute_multi_provider, guarantee_for_n, mms_partition, sampling_pipeline
from ..multigraph import allocate_graph, certify_graph_allocation
from ..reduction import transform, transform_vector
from ..valuations import fmt_fraction, to_fraction
from . import io
from .generate import FAMILIES, generate
from .search import search_d3
from .suite import CHECKS, DEFAULT_TRIALS, run_suite

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected an integer ratio like 1/2: {exc}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _f(x: Fraction) -> str:
    return fmt_fraction(x)


def _load(path: str) -> tuple[io.Instance, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return io.loads(text), text


def _report(args, command: str, text: str, rows: list[dict], started: float, **extra) -> dict:
    rep = {
        "command": command,
        "input": args.instance,
        "input_digest": io.digest(text),
        "seed": getattr(args, "seed", None),
        "agents": rows,
        "trace": getattr(args, "trace", None),
        "elapsed_ms": round((time.perf_counter() - started) * 1000),
    }
    rep.update(extra)
    return rep


def _finish(args, rep: dict, witness: io.Instance) -> int:
    if getattr(args, "report", None):
        Path(args.report).write_text(json.dumps(rep, indent=1) + "\n")
    if io.report_passes(rep):
        print("PASS")
        return EXIT_OK
    print("FAIL")
    for row in rep["agents"]:
        for chk in row["checks"]:
            if not chk["pass"]:
                print(f"  agent {row['agent']}: {chk['name']}: {chk['value']} < {chk['bound']}")
    print("witness:")
    sys.stdout.write(io.dumps(witness))
    return EXIT_FAILED


def _table(header: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(str(r[k])) for r in [header] + rows) for k in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(c).rjust(w) for c, w in zip(r, widths)))


# -- subcommands -------------------------------------------------------------


def cmd_omega(args) -> int:
    inst, _ = _load(args.instance)
    if not 0 <= args.agent < inst.n:
        raise UsageError(f"agent {args.agent} out of range 0..{inst.n - 1}")
    items = as_mask(args.items) if args.items is not None else inst.items
    if items >> inst.m:
        raise UsageError("--items references unknown items")
    if args.sequence is not None:
        seq = PickSequence.parse(args.sequence)
    else:
        seq = PickSequence.alternating(args.first, items.bit_count())
    if len(seq) != items.bit_count():
        raise UsageError(f"sequence has {len(seq)} turns for {items.bit_count()} items")
    res = omega(seq, items, inst.valuations[args.agent])
    print(_f(res.omega))
    return EXIT_OK


def cmd_graph_allocate(args) -> int:
    started = time.perf_counter()
    inst, text = _load(args.instance)
    g = inst.graph()
    if not 0 <= args.start < max(inst.n, 1):
        raise UsageError(f"start vertex {args.start} out of range")
    padded, orient, trace = allocate_graph(g, inst.valuations, args.start)
    if args.trace:
        Path(args.trace).write_text(trace.to_text())
    certs = certify_graph_allocation(padded, inst.valuations, orient)
    bundles = orient.bundles(padded)
    rows = []
    for c in certs:
        rows.append({
            "agent": c.agent,
            "bundle": members(bundles[c.agent]),
            "value": _f(c.value),
            "local_value": _f(c.local_value),
            "delta": _f(c.delta),
            "checks": [
                io.check_row("omega(S_q)", c.value, c.omega_q),
                io.check_row("(v - delta)/2", c.value, c.half_gap),
                io.check_row("MMS2/2", c.value, c.half_mms2),
            ],
        })
    _table(["agent", "value", "omega_q", "(v-delta)/2", "MMS2/2", "ok"],
           [[c.agent, _f(c.value), _f(c.omega_q), _f(c.half_gap), _f(c.half_mms2),
             "yes" if c.ok else "NO"] for c in certs])
    rep = _report(args, "graph-allocate", text, rows, started, start=args.start)
    return _finish(args, rep, inst)


def cmd_transform(args) -> int:
    started = time.perf_counter()
    inst, text = _load(args.instance)
    if inst.multi_allocation is None:
        raise UsageError("instance has no multi_allocation")
    alloc = inst.multi_allocation
    if args.d_vector is not None:
        if len(args.d_vector) != inst.n:
            raise UsageError(f"--d-vector has {len(args.d_vector)} entries for {inst.n} agents")
        final, report = transform_vector(alloc, inst.valuations, args.d_vector, args.start)
    else:
        d = args.d if args.d is not None else (inst.d or max(alloc.width, 1))
        final, report = transform(alloc, inst.valuations, d, args.start)
    rows = []
    for a in report.agents:
        rows.append({
            "agent": a.agent,
            "bundle": members(final.bundles[a.agent]),
            "initial": _f(a.initial),
            "final": _f(a.final),
            "delta": _f(a.delta),
            "d_hat": a.d_used,
            "levels": [_f(x) for x in a.levels],
            "checks": [io.check_row("transform bound", a.final, a.bound)],
        })
    _table(["agent", "initial", "final", "delta", "d_hat", "bound", "ok"],
           [[a.agent, _f(a.initial), _f(a.final), _f(a.delta), a.d_used, _f(a.bound),
             "yes" if a.passed else "NO"] for a in report.agents])
    print(f"widths per level: {' -> '.join(map(str, report.widths))}")
    if args.output:
        io.save(io.Instance(inst.m, inst.valuations, inst.item_names, final, 1), args.output)
    rep = _report(args, "transform", text, rows, started, widths=list(report.widths))
    if not report.widths_halve() or not final.is_allocation or not final.contained_in(alloc):
        rep["agents"].append({"agent": None, "checks": [
            {"name": "structure", "value": "0", "bound": "1", "pass": False}]})
    return _finish(args, rep, inst)


def cmd_mms(args) -> int:
    inst, _ = _load(args.instance)
    parts = args.parts if args.parts is not None else inst.n
    agents = [args.agent] if args.agent is not None else range(inst.n)
    for i in agents:
        if not 0 <= i < inst.n:
            raise UsageError(f"agent {i} out of range 0..{inst.n - 1}")
        share, bundles = mms_partition(inst.items, inst.valuations[i], parts)
        print(f"agent {i}: MMS = {_f(share)}  partition = {[members(b) for b in bundles]}")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    started = time.perf_counter()
    inst, text = _load(args.instance)
    if args.provider == "brute":
        provider = brute_multi_provider
    else:
        source = inst
        if args.provider_file:
            source, _ = _load(args.provider_file)
        if source.multi_allocation is None or source.n != inst.n:
            raise UsageError("file provider needs a multi_allocation with one bundle per agent")
        provider = FileProvider(source.multi_allocation)
    try:
        rep_p = sampling_pipeline(inst.valuations, inst.items, provider, args.rho, args.d)
    except ProviderError as exc:
        raise UsageError(f"provider failed: {exc}") from None
    print(f"d_hat = {rep_p.d_hat}  alpha = {_f(rep_p.alpha)}")
    print(f"peeled: {[(i, e) for i, e in rep_p.peeled] or 'none'}")
    rows = []
    for a in rep_p.agents:
        checks = [io.check_row("alpha * MMS", a.final, a.threshold)]
        if a.chain is not None:
            checks.append(io.check_row("chain bound", a.chain, a.threshold))
        rows.append({
            "agent": a.agent,
            "bundle": members(rep_p.allocation.bundles[a.agent]),
            "mms": _f(a.mms),
            "final": _f(a.final),
            "peeled_item": a.peeled_item,
            "checks": checks,
        })
    _table(["agent", "MMS", "final", "alpha*MMS", "peeled", "ok"],
           [[a.agent, _f(a.mms), _f(a.final), _f(a.threshold),
             "-" if a.peeled_item is None else a.peeled_item, "yes" if a.passed else "NO"]
            for a in rep_p.agents])
    rep = _report(args, "pipeline", text, rows, started, rho=_f(rep_p.rho), d=rep_p.d,
                  alpha=_f(rep_p.alpha), peeled=[list(p) for p in rep_p.peeled])
    return _finish(args, rep, inst)


def cmd_guarantee(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    g = guarantee_for_n(args.n)
    print(f"n = {g.n}")
    print(f"d = {g.d}")
    print(f"d_hat = {g.d_hat}")
    print(f"alpha = {_f(g.alpha)}")
    print(f"guarantee = {_f(g.guarantee)}")
    if g.floor_check is None:
        print("loglog floor: not defined for n < 4")
    else:
        print(f"loglog floor: {'holds' if g.floor_check else 'FAILS'}")
    return EXIT_OK if g.floor_check is not False else EXIT_FAILED


def cmd_gen(args) -> int:
    inst = generate(args.family, args.agents, args.items, args.seed, args.d)
    text = io.dumps(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    trials = {name: _default(name, args.scale) for name in CHECKS}
    if args.only:
        trials = {name: (n if name in args.only else 0) for name, n in trials.items()}
    for spec in args.check or []:
        name, _, count = spec.partition("=")
        if name not in CHECKS or not count.isdigit():
            raise UsageError(f"--check expects NAME=COUNT with NAME in {sorted(CHECKS)}")
        trials[name] = int(count)
    rep = run_suite(args.seed, trials, args.jobs)
    for c in rep.checks:
        status = "ok" if not c.violations else f"{len(c.violations)} VIOLATIONS"
        skipped = f" ({c.skipped} skipped)" if c.skipped else ""
        print(f"{c.check:18} {c.trials:5} trials{skipped}  {status}")
    if args.report:
        Path(args.report).write_text(json.dumps(rep.to_json(), indent=1) + "\n")
    if rep.ok:
        print("PASS")
        return EXIT_OK
    print("FAIL")
    for v in rep.violations():
        print(f"{v.check} trial {v.trial}: {v.message}")
        print("witness:")
        sys.stdout.write(v.witness)
    return EXIT_FAILED


def _default(name: str, scale: float) -> int:
    return max(1, round(DEFAULT_TRIALS[name] * scale))


def cmd_search_d3(args) -> int:
    rep = search_d3(args.budget, args.seed, args.max_agents, args.max_items,
                    not args.no_exhaustive, args.jobs)
    print(f"random trials: {rep.random_trials}  exhaustive cases: {rep.exhaustive_cases}")
    print(rep.summary)
    for f in rep.findings:
        print(f"{f.source} {f.index}: optimum slack {f.slack}")
        sys.stdout.write(f.witness)
    if args.report:
        Path(args.report).write_text(json.dumps(rep.to_json(), indent=1) + "\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multialloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("omega", help="solve a picking game for one agent")
    p.add_argument("instance")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--sequence", help="picking sequence over {p,q}, e.g. pqpq")
    grp.add_argument("--first", choices=(P, Q), help="alternating sequence starting with p or q")
    p.add_argument("--agent", type=int, default=0)
    p.add_argument("--items", type=_int_list, help="comma-separated item indices (default: all)")
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("graph-allocate", help="token game on a width-2 instance, with certificates")
    p.add_argument("instance")
    p.add_argument("--start", type=int, default=0, help="initial token vertex")
    p.add_argument("--trace", help="write the JUMP/PICK event log here")
    p.add_argument("--report", help="write a JSON run report here")
    p.set_defaults(func=cmd_graph_allocate)

    p = sub.add_parser("transform", help="turn a d-multi-allocation into an allocation")
    p.add_argument("instance")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--d", type=int, help="width bound (default: the declared d)")
    grp.add_argument("--d-vector", type=_int_list, help="per-agent width bounds, comma-separated")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--output", help="write the resulting allocation as an instance file")
    p.add_argument("--report", help="write a JSON run report here")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("mms", help="exact maximin shares")
    p.add_argument("instance")
    p.add_argument("--agent", type=int)
    p.add_argument("--parts", type=int, help="number of bundles (default: number of agents)")
    p.set_defaults(func=cmd_mms)

    p = sub.add_parser("pipeline", help="peel, obtain a multi-allocation, transform, certify")
    p.add_argument("instance")
    p.add_argument("--rho", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--provider", choices=("brute", "file"), default="brute")
    p.add_argument("--provider-file", help="instance file holding the multi-allocation "
                                           "(default: the input instance)")
    p.add_argument("--report", help="write a JSON run report here")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("guarantee", help="guarantee arithmetic for n agents")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_guarantee)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--agents", type=int, default=3)
    p.add_argument("--items", type=int, default=6)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--d", type=int, help="also draw a multi-allocation of width at most d")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--scale", type=float, default=1.0, help="multiply every trial count")
    p.add_argument("--check", action="append", metavar="NAME=COUNT", help="override one trial count")
    p.add_argument("--only", action="append", choices=sorted(CHECKS), help="run only these checks")
    p.add_argument("--report", help="write a JSON suite report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search-d3", help="search for instances beating the exact d=3 bound")
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-agents", type=int, default=4)
    p.add_argument("--max-items", type=int, default=5)
    p.add_argument("--no-exhaustive", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="write a JSON findings report here")
    p.set_defaults(func=cmd_search_d3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MultiallocError, ValueError) as exc:
        print(f"multialloc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
