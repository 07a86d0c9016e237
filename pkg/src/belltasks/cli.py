"""Command-line surface: evaluate one game, reproduce reference tables,
list the graph catalog.

Exit codes encode the verdict for scripting: 0 success, 2 inconclusive,
1 error.  The environment variable BELLTASKS_SOLVER overrides --solver.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict
from fractions import Fraction
from threading import Lock

from . import __version__, classical, graphs, npa, sdp, seesaw, tables, tasks

CSV_HEADER = ("graph,task,agents,start,symmetric,R,C,seesaw,npa,level,"
              "advantage_pct,status")
VALUE_EPS = 1e-6
ORDERING_SLACK = 1e-5


class UndefinedAdvantageError(ValueError):
    pass


def advantage(r, c, q):
    """Quantum gain over classical, normalized by the classical-over-random
    gain, in percent.  Undefined when classical does not beat random.

    Exact inputs give an exact percent (so 12.5 stays a true half and
    rounds half-up to 13 in table display, not down to 12)."""
    if float(c) <= float(r):
        raise UndefinedAdvantageError(
            f"advantage undefined: classical {float(c)} does not exceed "
            f"random {float(r)}")
    try:
        return float(100 * (Fraction(q) - Fraction(c)) / (Fraction(c) - Fraction(r)))
    except (TypeError, ValueError):
        return 100.0 * (float(q) - float(c)) / (float(c) - float(r))


def display_advantage(pct):
    """Integer percent for table display; halves round up (12.5 -> 13)."""
    # solver output sits within ~1e-7 of the ideal value; snap before
    # rounding so a half reached from below still rounds up
    return int(math.floor(round(pct, 6) + 0.5))


@dataclass(frozen=True)
class ResultRecord:
    graph: str
    task: str
    agents: int
    start: str
    symmetric: bool
    steps: int
    random_exact: str       # "num/den"
    random_value: float
    classical_exact: str
    classical_value: float
    classical_lower_bound: bool
    seesaw_value: float     # None when not run
    npa_value: float        # None when not run
    npa_level: str
    npa_certified: bool
    advantage_pct: float    # None when undefined or nothing quantum ran
    status: str             # advantage | no-advantage | inconclusive | export-only
    ordering_violation: bool
    timings: dict
    seed: int
    version: str = __version__

    def csv_row(self):
        def num(v, exact=None):
            if exact is not None:
                return exact
            return "" if v is None else repr(float(v))
        return [self.graph, self.task, str(self.agents), self.start,
                str(self.symmetric).lower(),
                num(self.random_value, self.random_exact),
                num(self.classical_value, self.classical_exact),
                num(self.seesaw_value), num(self.npa_value),
                self.npa_level or "",
                num(self.advantage_pct), self.status]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER.split(","))
        w.writerow(self.csv_row())
        return buf.getvalue()

    def to_json(self):
        payload = {"schema": 1}
        payload.update(asdict(self))
        return json.dumps(payload, indent=1)


def record_from_json(text):
    payload = json.loads(text)
    if payload.pop("schema", None) != 1:
        raise ValueError("unsupported result schema")
    return ResultRecord(**payload)


def record_from_csv(text):
    """Rebuild the CSV-visible fields of a record; the rest default."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER.split(","):
        raise ValueError(f"expected header {CSV_HEADER!r}")
    vals = dict(zip(rows[0], rows[1]))

    def frac(s):
        return Fraction(s) if s else None

    return ResultRecord(
        graph=vals["graph"], task=vals["task"], agents=int(vals["agents"]),
        start=vals["start"], symmetric=vals["symmetric"] == "true",
        steps=1,
        random_exact=vals["R"], random_value=float(frac(vals["R"])),
        classical_exact=vals["C"], classical_value=float(frac(vals["C"])),
        classical_lower_bound=False,
        seesaw_value=float(vals["seesaw"]) if vals["seesaw"] else None,
        npa_value=float(vals["npa"]) if vals["npa"] else None,
        npa_level=vals["level"] or None,
        npa_certified=bool(vals["npa"]),
        advantage_pct=float(vals["advantage_pct"]) if vals["advantage_pct"] else None,
        status=vals["status"], ordering_violation=False, timings={},
        seed=0)


def _fmt_exact(v):
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else \
            f"{v.numerator}/{v.denominator}"
    return repr(v)


def resolve_graph(spec):
    """Catalog name first, then a path to an edge-list file."""
    try:
        return graphs.catalog_lookup(spec).graph
    except KeyError as exc:
        if os.path.exists(spec):
            return graphs.load_graph(spec)
        raise SystemExit(f"error: {exc.args[0]}") from exc


def build_game(args):
    g = resolve_graph(args.graph)
    spec = tasks.TaskSpec(kind=args.task, r=args.agents, h=args.steps,
                          start=args.start,
                          symmetric_only=args.symmetric)
    return tasks.build_game(g, spec)


def run_eval(args):
    game = build_game(args)
    timings = {}
    t0 = time.time()
    R = classical.random_value(game)
    timings["random"] = round(time.time() - t0, 3)

    t0 = time.time()
    c_lower = False
    try:
        C, _ = classical.classical_optimum(game, symmetric_only=args.symmetric)
    except classical.BudgetExceededError:
        # symmetric enumeration is exponentially smaller and still a valid
        # lower bound on the unrestricted optimum
        C, _ = classical.classical_optimum(game, symmetric_only=True)
        c_lower = True
    timings["classical"] = round(time.time() - t0, 3)

    solver = os.environ.get("BELLTASKS_SOLVER", args.solver)
    export_only = args.export_sdpa_only or solver == "external"

    npa_value = npa_level = None
    certified = False
    if args.export_sdpa or export_only:
        t0 = time.time()
        _, problem = npa.build_relaxation(game, args.npa_level)
        path = args.export_sdpa or f"{args.graph.replace(' ', '-')}.dat-s"
        with open(path, "w") as f:
            f.write(sdp.export_sdpa(problem))
        timings["export"] = round(time.time() - t0, 3)
        print(f"wrote {path} (m={problem.m}, block {problem.blocks[0]})",
              file=sys.stderr)
    if not export_only:
        t0 = time.time()
        bound = npa.npa_bound(game, args.npa_level)
        npa_value, npa_level = bound.value, bound.level
        certified = bound.certified
        timings["npa"] = round(time.time() - t0, 3)

    q_value = None
    if not export_only:
        t0 = time.time()
        cfg = seesaw.SeesawConfig(d=args.seesaw_dim, restarts=args.restarts,
                                  seed=args.seed, symmetric=args.symmetric)
        q_value, _, _ = seesaw.optimize(game, cfg, classical_value=C,
                                        relaxation_bound=npa_value)
        timings["seesaw"] = round(time.time() - t0, 3)

    if export_only:
        status = "export-only"
    elif q_value is not None and q_value > float(C) + VALUE_EPS:
        status = "advantage"
    elif npa_value is not None and npa_value <= float(C) + VALUE_EPS:
        status = "no-advantage"
    else:
        status = "inconclusive"

    adv = None
    if not export_only and float(C) > float(R):
        q_for_adv = q_value if q_value is not None else npa_value
        if q_for_adv is not None:
            adv = advantage(R, C, q_for_adv)

    chain = [float(R), float(C)]
    if q_value is not None:
        chain.append(q_value)
    if npa_value is not None:
        chain.append(npa_value)
    violation = any(a > b + ORDERING_SLACK for a, b in zip(chain, chain[1:]))

    return ResultRecord(
        graph=args.graph, task=args.task, agents=args.agents,
        start=args.start, symmetric=args.symmetric, steps=args.steps,
        random_exact=_fmt_exact(R), random_value=float(R),
        classical_exact=_fmt_exact(C), classical_value=float(C),
        classical_lower_bound=c_lower,
        seesaw_value=q_value, npa_value=npa_value, npa_level=npa_level,
        npa_certified=certified, advantage_pct=adv, status=status,
        ordering_violation=violation, timings=timings, seed=args.seed)


def _emit(record, args):
    if args.format == "json":
        text = record.to_json()
    elif args.format == "csv":
        text = record.to_csv()
    else:
        lines = [f"{record.graph}  {record.task}  agents={record.agents}  "
                 f"start={record.start}"
                 + ("  symmetric" if record.symmetric else "")]
        lines.append(f"  R = {record.random_exact} = {record.random_value:.6f}")
        c_note = " (lower bound)" if record.classical_lower_bound else ""
        lines.append(f"  C = {record.classical_exact} = "
                     f"{record.classical_value:.6f}{c_note}")
        if record.seesaw_value is not None:
            lines.append(f"  seesaw = {record.seesaw_value:.6f}")
        if record.npa_value is not None:
            lines.append(f"  npa[{record.npa_level}] = {record.npa_value:.6f}")
        if record.advantage_pct is not None:
            pct = record.advantage_pct
            pct = 0.0 if abs(pct) < 1e-9 else pct
            lines.append(f"  advantage = {pct:.1f}% "
                         f"(displays {display_advantage(pct)})")
        lines.append(f"  status = {record.status}")
        if record.ordering_violation:
            lines.append("  WARNING: ordering R <= C <= seesaw <= npa violated")
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _reproduce_row(table, row, outdir):
    """Compare one reference row cell by cell.

    Returns CSV lines (graph, column, reference, computed, diff, status).
    """
    g = graphs.catalog_lookup(row.graph).graph
    game = tasks.build_game(g, tasks.TaskSpec(
        kind=table.kind, r=2, h=1, start=table.start,
        symmetric_only=table.symmetric))
    lines = []

    R = classical.random_value(game)
    ok = tables.cell_matches(row.random, R)
    lines.append((row.graph, "R", tables.cell_float(row.random), float(R),
                  abs(float(R) - tables.cell_float(row.random)),
                  "ok" if ok else "mismatch"))

    C, _ = classical.classical_optimum(game, symmetric_only=table.symmetric)
    ok = tables.cell_matches(row.classical, C)
    lines.append((row.graph, "C", tables.cell_float(row.classical), float(C),
                  abs(float(C) - tables.cell_float(row.classical)),
                  "ok" if ok else "mismatch"))

    try:
        rel, problem = npa.build_relaxation(game, row.level)
        fits = (problem.m <= sdp.MAX_VARIABLES
                and max(problem.blocks) <= sdp.MAX_DIMENSION)
    except npa.NpaSizeError:
        rel = problem = None
        fits = False
    if fits:
        bound = npa.npa_bound(game, row.level)
        ok = tables.npa_matches(row.npa, bound.value)
        lines.append((row.graph, "npa", tables.cell_float(row.npa),
                      bound.value, abs(bound.value - tables.cell_float(row.npa)),
                      "ok" if ok else "mismatch"))
    else:
        name = row.graph.replace(" ", "-")
        path = os.path.join(outdir, f"table{table.number}-{name}-"
                                    f"level{row.level.replace('+', 'p')}.dat-s")
        if problem is None:
            _, problem = npa.build_relaxation(game, row.level,
                                              max_letters=10 ** 6)
        with open(path, "w") as f:
            f.write(sdp.export_sdpa(problem))
        lines.append((row.graph, "npa", tables.cell_float(row.npa), "",
                      "", "export-only"))

    rec, printed, bad = tables.audit_row(row)
    lines.append((row.graph, "advantage", printed, round(rec, 2),
                  round(abs(rec - printed), 2), "mismatch" if bad else "ok"))
    return lines


def run_reproduce(args):
    table = tables.TABLES[args.table]
    outdir = args.out or "."
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, f"table{args.table}.csv")
    lock = Lock()
    results = {}

    def work(idx_row):
        idx, row = idx_row
        lines = _reproduce_row(table, row, outdir)
        with lock:
            results[idx] = lines
        return lines

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        list(pool.map(work, enumerate(table.rows)))

    counts = {"ok": 0, "mismatch": 0, "export-only": 0}
    with open(csv_path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["graph", "column", "reference", "computed", "diff", "status"])
        for idx in range(len(table.rows)):
            for line in results[idx]:
                w.writerow(line)
                counts[line[-1]] += 1
    print(f"table {args.table}: {counts['ok']} ok, "
          f"{counts['mismatch']} mismatch, {counts['export-only']} export-only "
          f"-> {csv_path}")
    return 0


def run_list_graphs(args):
    lines = []
    for name in sorted(graphs.CATALOG):
        entry = graphs.CATALOG[name]
        g = entry.graph
        tag = entry.provenance
        if entry.references:
            report = graphs.verify_catalog_entry(entry)
            tag += ", verified" if report["ok"] else ", REFERENCE MISMATCH"
        elif entry.provenance == "figure-derived":
            tag += ", no reference cells"
        lines.append(f"{name} ({tag}): {g.n} vertices, {len(g.edges)} edges")
    lines.append("n-gon (parametric): cycle on n vertices "
                 "(triangle, square, pentagon, ...)")
    lines.append("n-line (parametric): path on n vertices")
    lines.append("n-line curly (parametric): path with loops at both ends")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    return 0


def make_parser():
    p = argparse.ArgumentParser(
        prog="belltasks",
        description="classical and quantum values of rendezvous and "
                    "domination games on graphs")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate one graph/task combination")
    e.add_argument("--graph", required=True,
                   help="catalog name or edge-list file")
    e.add_argument("--task", choices=("rendezvous", "domination"),
                   default="rendezvous")
    e.add_argument("--agents", type=int, choices=(2, 3), default=2)
    e.add_argument("--start", choices=("any", "distinct"), default="any")
    e.add_argument("--steps", type=int, default=1, metavar="H")
    e.add_argument("--symmetric", action="store_true",
                   help="restrict classical and quantum search to "
                        "symmetric strategies")
    e.add_argument("--npa-level", choices=npa.LEVELS, default="1+ab")
    e.add_argument("--seesaw-dim", type=int, default=None, metavar="D")
    e.add_argument("--restarts", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--export-sdpa", metavar="PATH",
                   help="also write the relaxation in sparse SDPA format")
    e.add_argument("--export-sdpa-only", action="store_true",
                   help="write the export and skip in-process solving")
    e.add_argument("--solver", choices=("embedded", "external"),
                   default="embedded",
                   help="external = export for an outside solver, do not "
                        "solve in-process")
    e.add_argument("--out", metavar="PATH")
    e.add_argument("--format", choices=("table", "json", "csv"),
                   default="table")

    r = sub.add_parser("reproduce", help="recompute one reference table")
    r.add_argument("--table", type=int, choices=sorted(tables.TABLES),
                   required=True)
    r.add_argument("--out", metavar="DIR",
                   help="directory for the CSV and any SDPA exports")
    r.add_argument("--jobs", type=int, default=1)

    sub.add_parser("list-graphs", help="print the graph catalog")
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        if args.command == "eval":
            record = run_eval(args)
            _emit(record, args)
            return 2 if record.status == "inconclusive" else 0
        if args.command == "reproduce":
            return run_reproduce(args)
        return run_list_graphs(args)
    except (ValueError, KeyError, npa.NpaSizeError, sdp.SdpSizeError,
            classical.BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
