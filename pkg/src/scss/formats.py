"""Text formats: problem instances, PACE 2017 ``.td`` files and result lines.

Instance grammar::

    c <comment>
    p scss <n> <m> <|T|> <t>
    p scsps|meg|2ecss <n> <m> <t>
    t <v>            (scss only)
    a <u> <v>        (scss, scsps, meg)
    e <u> <v>        (2ecss)
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (ConnectivityViolation, CountMismatch, CoverageViolation,
                     InstanceSyntaxError, NotATree, RangeError)
from .graph import Digraph, Graph
from .treedecomp import TreeDecomposition, validate

PROBLEMS = ("scss", "scsps", "meg", "2ecss")
VERDICTS = ("yes", "no", "unknown")


@dataclass(frozen=True)
class Instance:
    problem: str
    graph: Union[Digraph, Graph]

    @property
    def budget(self):
        return self.graph.budget


def _ints(tokens, lineno):
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise InstanceSyntaxError(f"expected integers, got {' '.join(tokens)!r}", lineno)


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        yield lineno, line.split()


def parse_instance(text: str) -> Instance:
    header = None
    terminals, arcs = [], []
    for lineno, tok in _lines(text):
        kind = tok[0]
        if kind == "p":
            if header is not None:
                raise InstanceSyntaxError("second problem line", lineno)
            if len(tok) < 2 or tok[1] not in PROBLEMS:
                raise InstanceSyntaxError(f"unknown problem tag in {' '.join(tok)!r}", lineno)
            want = 6 if tok[1] == "scss" else 5
            if len(tok) != want:
                raise InstanceSyntaxError(f"problem line needs {want} fields", lineno)
            nums = _ints(tok[2:], lineno)
            if min(nums) < 0:
                raise InstanceSyntaxError("negative header field", lineno)
            header = (tok[1], nums)
            continue
        if header is None:
            raise InstanceSyntaxError(f"{kind!r} line before problem line", lineno)
        problem = header[0]
        if kind == "t" and problem == "scss":
            if len(tok) != 2:
                raise InstanceSyntaxError("terminal line needs one vertex", lineno)
            terminals.append((lineno, _ints(tok[1:], lineno)[0]))
        elif (kind == "a" and problem != "2ecss") or (kind == "e" and problem == "2ecss"):
            if len(tok) != 3:
                raise InstanceSyntaxError(f"{kind} line needs two vertices", lineno)
            arcs.append((lineno, tuple(_ints(tok[1:], lineno))))
        else:
            raise InstanceSyntaxError(f"unexpected {kind!r} line for {problem}", lineno)
    if header is None:
        raise InstanceSyntaxError("missing problem line")
    problem, nums = header
    if problem == "scss":
        n, m, nt, t = nums
    else:
        n, m, t = nums
        nt = None
    if len(arcs) != m:
        raise CountMismatch(f"header declares {m} arcs/edges, found {len(arcs)}")
    if nt is not None and len(terminals) != nt:
        raise CountMismatch(f"header declares {nt} terminals, found {len(terminals)}")
    for lineno, (u, v) in arcs:
        if not (1 <= u <= n and 1 <= v <= n):
            raise RangeError(f"line {lineno}: vertex out of range 1..{n}")
    for lineno, v in terminals:
        if not 1 <= v <= n:
            raise RangeError(f"line {lineno}: terminal out of range 1..{n}")
    pairs = [p for _, p in arcs]
    if problem == "2ecss":
        return Instance(problem, Graph(n, tuple(pairs), t))
    terms = [v for _, v in terminals] if problem == "scss" else None
    if terms is not None and len(set(terms)) != len(terms):
        raise RangeError("duplicate terminal")
    return Instance(problem, Digraph(n, tuple(pairs), terms, t))


def emit_instance(inst: Instance, comments=()) -> str:
    g = inst.graph
    lines = [f"c {c}" for c in comments]
    if inst.problem == "scss":
        lines.append(f"p scss {g.n} {g.m} {len(g.terminals)} {g.budget}")
        lines.extend(f"t {v}" for v in g.terminals)
        lines.extend(f"a {u} {v}" for u, v in g.arcs)
    elif inst.problem == "2ecss":
        lines.append(f"p 2ecss {g.n} {len(g.edges)} {g.budget}")
        lines.extend(f"e {u} {v}" for u, v in g.edges)
    else:
        lines.append(f"p {inst.problem} {g.n} {g.m} {g.budget}")
        lines.extend(f"a {u} {v}" for u, v in g.arcs)
    return "\n".join(lines) + "\n"


def read_td(text: str) -> tuple:
    """Parse PACE 2017 ``.td`` text without validating it; returns
    ``(TreeDecomposition, n)``."""
    header = None
    bags, edges = {}, []
    for lineno, tok in _lines(text):
        if tok[0] == "s":
            if header is not None or len(tok) != 5 or tok[1] != "td":
                raise InstanceSyntaxError("malformed solution line", lineno)
            header = _ints(tok[2:], lineno)
        elif tok[0] == "b":
            if header is None:
                raise InstanceSyntaxError("bag before solution line", lineno)
            if len(tok) < 2:
                raise InstanceSyntaxError("bag line needs an id", lineno)
            ids = _ints(tok[1:], lineno)
            if ids[0] in bags:
                raise InstanceSyntaxError(f"bag {ids[0]} defined twice", lineno)
            bags[ids[0]] = frozenset(ids[1:])
        else:
            if header is None:
                raise InstanceSyntaxError("tree edge before solution line", lineno)
            if len(tok) != 2:
                raise InstanceSyntaxError("tree edge line needs two bag ids", lineno)
            edges.append(tuple(_ints(tok, lineno)))
    if header is None:
        raise InstanceSyntaxError("missing 's td' line")
    nbags, maxbag, n = header
    if len(bags) != nbags:
        raise CountMismatch(f"header declares {nbags} bags, found {len(bags)}")
    if bags and max(len(b) for b in bags.values()) > maxbag:
        raise CountMismatch("a bag exceeds the declared maximum size")
    for a, b in edges:
        if a not in bags or b not in bags:
            raise NotATree(f"tree edge {a} {b} references an unknown bag")
    return TreeDecomposition(bags, tuple(edges)), n


def parse_td(text: str, g) -> TreeDecomposition:
    """Parse and validate a ``.td`` file against the underlying graph of ``g``."""
    td, n = read_td(text)
    if n != g.n:
        raise CountMismatch(f".td declares {n} vertices, instance has {g.n}")
    problems = validate(td, g)
    for kind, exc in (("tree", NotATree), ("range", RangeError),
                      ("coverage", CoverageViolation), ("connectivity", ConnectivityViolation)):
        hits = [p.detail for p in problems if p.kind == kind]
        if hits:
            raise exc("; ".join(hits))
    return td


def emit_td(td: TreeDecomposition, n: int) -> str:
    maxbag = max((len(b) for b in td.bags.values()), default=0)
    lines = [f"s td {len(td.bags)} {maxbag} {n}"]
    for k in sorted(td.bags):
        lines.append(" ".join(["b", str(k)] + [str(v) for v in sorted(td.bags[k])]))
    lines.extend(f"{a} {b}" for a, b in td.edges)
    return "\n".join(lines) + "\n"


RESULT_KEYS = ("verdict", "optimum", "solution", "engine", "trials", "seed",
               "error_bound", "elapsed_ms")


@dataclass
class ResultRecord:
    verdict: str
    engine: str
    optimum: Optional[int] = None
    solution: Optional[list] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    error_bound: Optional[float] = None
    elapsed_ms: Optional[float] = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"verdict must be one of {VERDICTS}")
        if self.solution is not None:
            if self.verdict != "yes":
                raise ValueError("a solution is only reported with verdict yes")
            self.solution = [tuple(a) for a in self.solution]


def emit_result(r: ResultRecord) -> str:
    payload = {
        "verdict": r.verdict,
        "optimum": r.optimum,
        "solution": None if r.solution is None else [list(a) for a in r.solution],
        "engine": r.engine,
        "trials": r.trials,
        "seed": r.seed,
        "error_bound": r.error_bound,
        "elapsed_ms": r.elapsed_ms,
    }
    return json.dumps(payload, separators=(", ", ": "))


def parse_result(line: str) -> ResultRecord:
    data = json.loads(line)
    missing = [k for k in RESULT_KEYS if k not in data]
    if missing:
        raise InstanceSyntaxError(f"result line lacks keys {missing}")
    return ResultRecord(verdict=data["verdict"], engine=data["engine"],
                        optimum=data["optimum"], solution=data["solution"],
                        trials=data["trials"], seed=data["seed"],
                        error_bound=data["error_bound"], elapsed_ms=data["elapsed_ms"])
