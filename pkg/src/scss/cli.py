"""Command-line front end: ``solve``, ``kernelize``, ``reduce``, ``gen``,
``verify`` and ``bench``."""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import generators
from .bench import join_scaling
from .cutcount import DEFAULT_WIDTH_CAP, decide
from .errors import BadParams, NoApplicableEngine, SCSSError
from .exact import DEFAULT_VERTEX_CAP, solve_exact
from .formats import (Instance, ResultRecord, emit_instance, emit_result, emit_td,
                      parse_instance, parse_result, parse_td)
from .graph import Digraph, is_two_edge_connected, terminals_mutually_reachable
from .kernel import kernelize, lift_solution, trace_from_json, trace_to_json
from .oracle import brute_scss, brute_scss_solution
from .reductions import ecss_to_scsps, setcover_to_scss, solve_2ecss, solve_meg
from .treedecomp import heuristic_td, make_nice

ENGINES = ("auto", "cutcount", "exact", "brute")
AUTO_EXACT_CAP = 14
BRUTE_ARC_LIMIT = 22
TRACE_TAG = "kernel-trace"


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    td: Optional[str] = None
    engine: str = "auto"
    trials: int = 30
    seed: int = 0
    emit_solution: bool = False
    json: bool = False
    width_cap: int = DEFAULT_WIDTH_CAP
    exact_cap: int = AUTO_EXACT_CAP
    params: list = field(default_factory=list)


# -- engines ------------------------------------------------------------------

@dataclass
class Outcome:
    verdict: str
    engine: str
    optimum: Optional[float] = None
    solution: Optional[list] = None  # arc or edge pairs
    trials: Optional[int] = None
    error_bound: Optional[float] = None
    notes: list = field(default_factory=list)


def _exact(d: Digraph, cfg: RunConfig) -> tuple:
    r = solve_exact(d, cap=max(DEFAULT_VERTEX_CAP, cfg.exact_cap))
    return r.optimum, r.solution


def _brute(d: Digraph, cfg: RunConfig) -> tuple:
    opt = brute_scss(d, BRUTE_ARC_LIMIT)
    if opt == math.inf:
        return opt, None
    return opt, d.arc_set(brute_scss_solution(d, BRUTE_ARC_LIMIT))


def _decomposition(d: Digraph, cfg: RunConfig, notes: list):
    if cfg.td:
        return parse_td(_read(cfg.td), d)
    td = heuristic_td(d)
    notes.append(f"no --td given; using a min-fill heuristic decomposition of width {td.width}")
    return td


def _pick_engine(d: Digraph, cfg: RunConfig, notes: list, decision_only: bool = True) -> str:
    if cfg.engine != "auto":
        return cfg.engine
    if d.n <= cfg.exact_cap:
        return "exact"
    if decision_only:
        td = _decomposition(d, cfg, notes)
        if td.width <= cfg.width_cap:
            return "cutcount"
    if d.m <= BRUTE_ARC_LIMIT:
        return "brute"
    raise NoApplicableEngine(
        f"n = {d.n} exceeds the exact cap {cfg.exact_cap}, the decomposition is too wide "
        f"for cap {cfg.width_cap} and {d.m} arcs exceed the brute-force limit {BRUTE_ARC_LIMIT}")


def _cutcount(d: Digraph, cfg: RunConfig, notes: list) -> Outcome:
    td = _decomposition(d, cfg, notes)
    v = decide(d, make_nice(td, d), trials=cfg.trials, seed=cfg.seed, width_cap=cfg.width_cap)
    return Outcome(v.verdict, "cutcount", None, None, cfg.trials, v.error_bound, notes)


def _optimize(d: Digraph, engine: str, cfg: RunConfig, notes: list) -> Outcome:
    opt, sol = (_exact if engine == "exact" else _brute)(d, cfg)
    yes = opt <= d.budget
    pairs = d.arcs_of(sol) if yes and sol is not None else None
    return Outcome("yes" if yes else "no", engine, None if opt == math.inf else opt,
                   pairs, None, 0.0, notes)


def solve_instance(inst: Instance, cfg: RunConfig) -> Outcome:
    notes = []
    if inst.problem in ("scss", "scsps"):
        d = inst.graph
        engine = _pick_engine(d, cfg, notes)
        if engine == "cutcount":
            return _cutcount(d, cfg, notes)
        return _optimize(d, engine, cfg, notes)
    if inst.problem == "2ecss":
        g = inst.graph
        if not is_two_edge_connected(g):
            notes.append("the graph is not 2-edge-connected")
            return Outcome("no", "reduction", None, None, None, 0.0, notes)
        d = ecss_to_scsps(g)
        engine = _pick_engine(d, cfg, notes)
        if engine == "cutcount":
            return _cutcount(d, cfg, notes)
        opt, edges = solve_2ecss(g, lambda x: (_exact if engine == "exact" else _brute)(x, cfg))
        yes = opt <= g.budget
        return Outcome("yes" if yes else "no", engine, opt, edges if yes else None, None, 0.0, notes)
    d = inst.graph  # meg
    engine = _pick_engine(d, cfg, notes, decision_only=False)
    if engine == "cutcount":
        raise NoApplicableEngine("meg needs per-component optima; use the exact or brute engine")
    opt, arcs = solve_meg(d, lambda x: (_exact if engine == "exact" else _brute)(x, cfg))
    yes = opt <= d.budget
    return Outcome("yes" if yes else "no", engine, opt, d.arcs_of(arcs) if yes else None,
                   None, 0.0, notes)


def _record(out: Outcome, cfg: RunConfig, elapsed_ms: float) -> ResultRecord:
    return ResultRecord(out.verdict, out.engine, out.optimum,
                        out.solution if cfg.emit_solution else None,
                        out.trials, cfg.seed, out.error_bound, round(elapsed_ms, 3), out.notes)


def _human(r: ResultRecord) -> str:
    verdict = r.verdict
    if r.verdict == "no" and r.error_bound:
        verdict = f"no (one-sided, error ≤ 2^-{r.trials})"
    lines = [f"verdict: {verdict}", f"engine: {r.engine}"]
    if r.optimum is not None:
        lines.append(f"optimum: {r.optimum}")
    if r.trials is not None:
        lines.append(f"trials: {r.trials}")
        lines.append(f"seed: {r.seed}")
    lines.extend(f"note: {n}" for n in r.notes)
    if r.solution is not None:
        lines.append(f"solution: {len(r.solution)}")
        lines.extend(f"{u} {v}" for u, v in r.solution)
    return "\n".join(lines)


def cmd_solve(cfg: RunConfig, out) -> ResultRecord:
    inst = parse_instance(_read(_need_input(cfg)))
    start = time.perf_counter()
    result = solve_instance(inst, cfg)
    record = _record(result, cfg, (time.perf_counter() - start) * 1e3)
    if cfg.json:
        for n in record.notes:
            print(f"note: {n}", file=sys.stderr)
        print(emit_result(record), file=out)
    else:
        print(_human(record), file=out)
    return record


# -- kernelize / reduce -------------------------------------------------------

def cmd_kernelize(cfg: RunConfig, out) -> None:
    inst = parse_instance(_read(_need_input(cfg)))
    if inst.problem not in ("scsps", "scss"):
        raise BadParams("kernelize expects a scsps instance")
    d = inst.graph
    if inst.problem == "scss" and len(d.terminals) != d.n:
        raise BadParams("kernelize needs every vertex to be a terminal")
    reduced, trace = kernelize(d)
    payload = trace_to_json(trace)
    payload["original_n"] = d.n
    payload["original_budget"] = d.budget
    comments = [f"{TRACE_TAG} {json.dumps(payload, sort_keys=True)}"]
    out.write(emit_instance(Instance("scsps", reduced), comments))


def read_trace(text: str) -> Optional[dict]:
    prefix = f"c {TRACE_TAG} "
    for line in text.splitlines():
        if line.startswith(prefix):
            return json.loads(line[len(prefix):])
    return None


def cmd_reduce(cfg: RunConfig, out) -> None:
    inst = parse_instance(_read(_need_input(cfg)))
    if inst.problem != "2ecss":
        raise BadParams("reduce expects a 2ecss instance (set-cover gadgets come from 'gen setcover')")
    d = ecss_to_scsps(inst.graph)
    note = "bidirected image of a 2ecss instance"
    if not is_two_edge_connected(inst.graph):
        note += "; the source graph has a bridge, so the answer is no"
    out.write(emit_instance(Instance("scsps", d), [note]))


# -- gen ----------------------------------------------------------------------

def _kv(params: list) -> dict:
    out = {}
    for p in params:
        if "=" not in p:
            raise BadParams(f"expected key=value, got {p!r}")
        k, v = p.split("=", 1)
        out[k] = v
    return out


def _take(kv: dict, key: str, cast, default=None):
    if key not in kv:
        if default is None:
            raise BadParams(f"missing parameter {key}=")
        return default
    try:
        return cast(kv.pop(key))
    except ValueError:
        raise BadParams(f"bad value for {key}") from None


def cmd_gen(cfg: RunConfig, out) -> None:
    if not cfg.params:
        raise BadParams("gen needs a kind: random, ktree or setcover")
    kind, kv = cfg.params[0], _kv(cfg.params[1:])
    seed = cfg.seed
    header = [f"generated by gen {kind} seed={seed}"]
    if kind == "random":
        n = _take(kv, "n", int)
        p = _take(kv, "p", float)
        terms = _take(kv, "terminals", int, n)
        d = generators.random_digraph(n, p, seed, terminals=terms)
        d = d.with_budget(_take(kv, "budget", int, d.m))
        inst = Instance("scss", d)
    elif kind == "ktree":
        n = _take(kv, "n", int)
        k = _take(kv, "k", int)
        terms = _take(kv, "terminals", int, n)
        d, td = generators.partial_ktree(n, k, seed, keep=_take(kv, "keep", float, 0.8),
                                         both=_take(kv, "both", float, 0.4), terminals=terms)
        d = d.with_budget(_take(kv, "budget", int, d.m))
        if not cfg.td:
            raise BadParams("gen ktree writes its decomposition to --td PATH")
        Path(cfg.td).write_text(emit_td(td, n))
        inst = Instance("scss", d)
    elif kind == "setcover":
        n = _take(kv, "n", int)
        m = _take(kv, "m", int)
        sc = generators.random_set_cover(n, m, seed, density=_take(kv, "density", float, 0.4))
        k = _take(kv, "k", int, m)
        sc = type(sc)(sc.n, sc.sets, k)
        header += [f"set {i}: {' '.join(map(str, sorted(s)))}" for i, s in enumerate(sc.sets, 1)]
        inst = Instance("scss", setcover_to_scss(sc))
    else:
        raise BadParams(f"unknown generator {kind!r}")
    if kv:
        raise BadParams(f"unknown parameters: {', '.join(sorted(kv))}")
    out.write(emit_instance(inst, header))


# -- verify -------------------------------------------------------------------

@dataclass
class Check:
    name: str
    subject: str
    ok: bool
    detail: str = ""


def _suite_files() -> list:
    root = resources.files("scss") / "suite"
    return sorted((p for p in root.iterdir() if p.name.endswith(".txt")), key=lambda p: p.name)


def _differential(name: str, text: str, cfg: RunConfig) -> list:
    inst = parse_instance(text)
    if inst.problem not in ("scss", "scsps"):
        raise BadParams(f"{name}: verify compares engines on scss/scsps instances")
    d = inst.graph
    checks = []
    truth = brute_scss(d, BRUTE_ARC_LIMIT) if d.m <= BRUTE_ARC_LIMIT else None
    if d.n <= max(DEFAULT_VERTEX_CAP, cfg.exact_cap):
        r = solve_exact(d, cap=max(DEFAULT_VERTEX_CAP, cfg.exact_cap))
        if truth is not None:
            checks.append(Check("exact-vs-brute", name, r.optimum == truth,
                                f"exact {r.optimum}, brute {truth}"))
        if r.solution is not None:
            ok = len(r.solution) == r.optimum and terminals_mutually_reachable(d, r.solution, d.terminals)
            checks.append(Check("exact-solution-verifies", name, ok, f"arcs {d.arcs_of(r.solution)}"))
        if truth is None:
            truth = r.optimum
    if truth is not None:
        td = heuristic_td(d)
        if td.width <= cfg.width_cap:
            v = decide(d, make_nice(td, d), trials=cfg.trials, seed=cfg.seed, width_cap=cfg.width_cap)
            expect = "yes" if truth <= d.budget else "no"
            checks.append(Check("cutcount-vs-oracle", name, v.verdict == expect,
                                f"cutcount {v.verdict}, oracle {expect}"))
        if len(d.terminals) == d.n and d.n <= DEFAULT_VERTEX_CAP:
            reduced, trace = kernelize(d)
            red = solve_exact(reduced)
            same = (red.optimum <= reduced.budget) == (truth <= d.budget)
            checks.append(Check("kernel-preserves-verdict", name, same,
                                f"reduced {red.optimum} vs budget {reduced.budget}"))
            if red.solution is not None and red.optimum <= reduced.budget:
                lifted = lift_solution(d, red.solution, trace, reduced)
                ok = len(lifted) <= d.budget and terminals_mutually_reachable(d, lifted, d.terminals)
                checks.append(Check("kernel-lift-verifies", name, ok, f"{len(lifted)} arcs"))
    return checks


def _check_results(cfg: RunConfig, paths: list) -> list:
    orig = parse_instance(_read(cfg.input))
    d = orig.graph
    if orig.problem not in ("scss", "scsps"):
        raise BadParams("result checks need a scss or scsps instance")
    kernel_text = None
    results = []
    for p in paths:
        text = _read(p)
        if read_trace(text) is not None:
            kernel_text = text
        else:
            results.append((p, text))
    checks = []
    for p, text in results:
        try:
            rec = parse_result(text.strip().splitlines()[0] if text.strip() else "")
        except (ValueError, SCSSError, IndexError) as exc:
            checks.append(Check("result-parses", p, False, str(exc)))
            continue
        checks.append(Check("result-parses", p, True))
        if rec.solution is None:
            continue
        pairs = [tuple(a) for a in rec.solution]
        if kernel_text is not None:
            reduced = parse_instance(kernel_text).graph
            trace = trace_from_json(read_trace(kernel_text))
            missing = [a for a in pairs if not reduced.has_arc(*a)]
            checks.append(Check("solution-arcs-exist", p, not missing, f"unknown arcs {missing}"))
            if missing:
                continue
            try:
                lifted = lift_solution(d, pairs, trace, reduced)
            except SCSSError as exc:
                checks.append(Check("lifted-solution-verifies", p, False, str(exc)))
                continue
            ok = terminals_mutually_reachable(d, lifted, d.terminals)
            checks.append(Check("lifted-solution-verifies", p, ok, f"{len(lifted)} arcs"))
            checks.append(Check("lifted-within-budget", p, len(lifted) <= d.budget,
                                f"{len(lifted)} arcs, budget {d.budget}"))
            continue
        missing = [a for a in pairs if not d.has_arc(*a)]
        checks.append(Check("solution-arcs-exist", p, not missing, f"unknown arcs {missing}"))
        if missing:
            continue
        arcs = d.arc_set(pairs)
        checks.append(Check("solution-verifies", p, terminals_mutually_reachable(d, arcs, d.terminals),
                            "terminals are not strongly connected"))
        checks.append(Check("solution-within-budget", p, len(arcs) <= d.budget,
                            f"{len(arcs)} arcs, budget {d.budget}"))
        if rec.optimum is not None:
            checks.append(Check("solution-size-matches-optimum", p, len(arcs) == rec.optimum,
                                f"{len(arcs)} arcs, optimum {rec.optimum}"))
    return checks


def cmd_verify(cfg: RunConfig, out) -> list:
    if cfg.input:
        checks = _check_results(cfg, cfg.params)
        sources = {}
    else:
        if cfg.params:
            items = [(p, _read(p)) for p in cfg.params]
        else:
            items = [(p.name, p.read_text()) for p in _suite_files()]
        sources = dict(items)
        checks = []
        for name, text in items:
            checks.extend(_differential(name, text, cfg))
    failed = 0
    for c in checks:
        if c.ok:
            print(f"PASS {c.name} {c.subject}", file=out)
        else:
            failed += 1
            print(f"FAIL {c.name} {c.subject}: {c.detail}", file=out)
            if c.subject in sources:
                print("counterexample:", file=out)
                out.write("".join(f"  {line}\n" for line in sources[c.subject].splitlines()))
    print(f"{len(checks) - failed} passed, {failed} failed", file=out)
    return checks


# -- bench --------------------------------------------------------------------

def cmd_bench(cfg: RunConfig, out) -> None:
    kv = _kv(cfg.params)
    widths = tuple(int(w) for w in kv.pop("widths", "2,3,4,5").split(","))
    if kv:
        raise BadParams(f"unknown parameters: {', '.join(sorted(kv))}")
    report = join_scaling(widths, seed=cfg.seed)
    if cfg.json:
        print(json.dumps({"widths": list(report.widths),
                          "ms_per_join": [round(s * 1e3, 3) for s in report.seconds],
                          "log_ratios": [round(r, 3) for r in report.log_ratios],
                          "within": report.within}), file=out)
    else:
        print("\n".join(report.lines()), file=out)


# -- plumbing -----------------------------------------------------------------

def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _need_input(cfg: RunConfig) -> str:
    if not cfg.input:
        raise BadParams(f"{cfg.command} needs --input PATH")
    return cfg.input


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="instance file")
    common.add_argument("--td", help="PACE .td file (gen ktree writes it here)")
    common.add_argument("--engine", choices=ENGINES, default="auto")
    common.add_argument("--trials", type=_positive, default=30)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--emit-solution", action="store_true")
    common.add_argument("--json", action="store_true")
    common.add_argument("--width-cap", type=int, default=DEFAULT_WIDTH_CAP)
    common.add_argument("--exact-cap", type=int, default=AUTO_EXACT_CAP,
                        help="largest n for which engine=auto picks the exact engine")
    parser = argparse.ArgumentParser(prog="scss", description="Strongly connected Steiner subgraph toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="decide or optimize an instance")
    sub.add_parser("kernelize", parents=[common], help="shrink a scsps instance")
    sub.add_parser("reduce", parents=[common], help="turn a 2ecss instance into scsps")
    g = sub.add_parser("gen", parents=[common], help="generate instances")
    g.add_argument("params", nargs="*", help="kind followed by key=value pairs")
    v = sub.add_parser("verify", parents=[common], help="differential checks")
    v.add_argument("params", nargs="*", help="instance files, or result/kernel files with --input")
    b = sub.add_parser("bench", parents=[common], help="join scaling benchmark")
    b.add_argument("params", nargs="*", help="widths=2,3,4,5")
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "kernelize": cmd_kernelize,
    "reduce": cmd_reduce,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, args.input, args.td, args.engine, args.trials, args.seed,
                    args.emit_solution, args.json, args.width_cap, args.exact_cap,
                    list(getattr(args, "params", []) or []))
    try:
        COMMANDS[cfg.command](cfg, out)
    except (SCSSError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
