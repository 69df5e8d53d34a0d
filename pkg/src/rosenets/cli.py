"""Command line: ingest datasets, run (k, tau) sweeps, print bound tables, validate."""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import datasets
from .algorithms import ALGORITHMS, run_algorithm
from .bounds import BoundConstants, DomainError, theorem1_terms, theorem2_terms
from .datasets import EvalTask, IngestError
from .graph import DirectedGraph, degree_stats
from .metrics import accuracy_score, sequence_score
from .robustness import InfeasibleError, prefix_removal, worst_case_removal
from .utility import make_utility, sequence_value
from . import validation

log = logging.getLogger("rosenets")

RESULT_COLUMNS = (
    "algorithm", "k", "tau", "accuracy", "sequence_score", "utility",
    "n_tasks", "eval_calls_mean", "status",
)
BOUND_COLUMNS = (
    "k", "tau", "d_in", "d_out", "alpha", "beta", "gamma", "eta",
    "term1", "term2", "ratio", "note",
)
REMOVAL_MODES = ("exact", "prefix", "none")


def parse_int_list(text: str) -> list[int]:
    """``3,5,7`` or ``11..20`` or a mix like ``1,3..5``."""
    out: list[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def fmt(x: float) -> str:
    return f"{x:.6f}"


def _write_csv(rows: list[list], columns, out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    if out:
        Path(out).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())


# --- ingest ------------------------------------------------------------------

def cmd_ingest(args) -> int:
    src = Path(args.input)
    out = Path(args.out)
    if args.kind == "edgelist":
        g = datasets.load_graph_file(src)
        tasks: list[EvalTask] = []
    elif args.kind == "amazon":
        g, tasks = datasets.build_purchase_graph(
            datasets.read_interactions(src), args.min_item_count, args.min_user_items
        )
    else:
        g, tasks = datasets.build_path_graph(
            datasets.read_paths(src, resolve=not args.unresolved),
            args.min_path_len, args.length_unit,
        )
    datasets.save_graph_file(g, out)
    if args.kind != "edgelist":
        datasets.save_tasks(tasks, out.with_suffix(".tasks"))
        if g.labels is not None:
            out.with_suffix(".labels").write_text(
                "".join(f"{lab}\n" for lab in g.labels), encoding="utf-8"
            )
    print(f"n_elements={g.n_elements} n_edges={g.n_edges} n_tasks={len(tasks)}")
    return 0


# --- run ---------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    graph: str
    tasks: str | None = None
    algorithms: list[str] = field(default_factory=lambda: ["rosenets", "sequence"])
    k_values: list[int] = field(default_factory=lambda: [5])
    tau_values: list[int] = field(default_factory=lambda: [0])
    removal_mode: str = "prefix"
    utility_kind: str = "coverage"
    out: str | None = None
    jobs: int = 1
    seed: int = 0
    seed_history: bool = True

    def validate(self) -> None:
        if not self.k_values:
            raise ValueError("k_values must not be empty")
        if any(k < 0 for k in self.k_values) or any(t < 0 for t in self.tau_values):
            raise ValueError("k and tau values must be non-negative")
        if not self.tau_values:
            raise ValueError("tau_values must not be empty")
        if max(self.tau_values) > max(self.k_values):
            raise ValueError(f"tau {max(self.tau_values)} exceeds the largest k {max(self.k_values)}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
        if self.removal_mode not in REMOVAL_MODES:
            raise ValueError(f"removal mode must be one of {REMOVAL_MODES}")
        make_utility(self.utility_kind, DirectedGraph(0, []))
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


def load_graph(source: str) -> DirectedGraph:
    if source in datasets.FIXTURES:
        return datasets.FIXTURES[source]()
    return datasets.load_graph_file(source)


_worker: dict = {}


def _init_worker(graph: DirectedGraph, config: ExperimentConfig) -> None:
    _worker["graph"] = graph
    _worker["config"] = config
    _worker["h"] = make_utility(config.utility_kind, graph)


def _cells(config: ExperimentConfig) -> list[tuple[str, int, int]]:
    return sorted(
        {(a, k, t) for a in config.algorithms for k in config.k_values for t in config.tau_values}
    )


def _score_task(task: EvalTask) -> dict:
    """Per-cell (accuracy, sequence score, utility, eval calls, status) for one task."""
    g, h, cfg = _worker["graph"], _worker["h"], _worker["config"]
    out = {}
    cache: dict = {}
    for algo, k, tau in _cells(cfg):
        if tau > k:
            out[(algo, k, tau)] = None
            continue
        # only rosenets depends on tau
        key = (algo, k, tau if algo == "rosenets" else None)
        if key not in cache:
            cache[key] = run_algorithm(algo, g, h, k, tau, task.history, cfg.seed_history)
        res = cache[key]
        status = "ok"
        if cfg.removal_mode == "none":
            pred = res.sequence
        elif cfg.removal_mode == "exact":
            try:
                pred = worst_case_removal(g, h, res.sequence, tau).remaining
            except InfeasibleError:
                pred = prefix_removal(g, h, res.sequence, tau).remaining
                status = "exact_capped"
        else:
            pred = prefix_removal(g, h, res.sequence, tau).remaining
        out[(algo, k, tau)] = (
            accuracy_score(pred, task.truth),
            sequence_score(pred, task.truth),
            sequence_value(h, g, pred),
            res.eval_calls,
            status,
        )
    return out


def run_experiment(config: ExperimentConfig) -> list[list]:
    config.validate()
    g = load_graph(config.graph)
    tasks = datasets.load_tasks(config.tasks) if config.tasks else [EvalTask((), ())]
    for t in tasks:
        for v in t.history + t.truth:
            if not 0 <= v < g.n_elements:
                raise IngestError(f"task element {v} not in graph")
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(config.jobs, initializer=_init_worker,
                                 initargs=(g, config)) as pool:
            per_task = list(pool.map(_score_task, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))
    else:
        _init_worker(g, config)
        per_task = [_score_task(t) for t in tasks]

    rows = []
    for cell in _cells(config):
        algo, k, tau = cell
        vals = [r[cell] for r in per_task]
        if any(v is None for v in vals):
            rows.append([algo, k, tau, "", "", "", len(tasks), "", "tau>k"])
            continue
        n = len(vals)
        capped = sum(1 for v in vals if v[4] != "ok")
        rows.append([
            algo, k, tau,
            fmt(sum(v[0] for v in vals) / n),
            fmt(sum(v[1] for v in vals) / n),
            fmt(sum(v[2] for v in vals) / n),
            n,
            fmt(sum(v[3] for v in vals) / n),
            f"exact_capped:{capped}" if capped else "ok",
        ])
    return rows


def read_config_file(path: str) -> dict:
    """``key = value`` lines; keys match the long flag names."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def config_from_args(args) -> ExperimentConfig:
    raw = read_config_file(args.config) if args.config else {}

    def pick(name, default=None):
        cli_val = getattr(args, name, None)
        return cli_val if cli_val is not None else raw.get(name, default)

    graph = pick("graph")
    if graph is None:
        raise ValueError("--graph is required (file path or fixture name: fig1, fig2)")
    no_seed = args.no_history_seed or str(raw.get("no_history_seed", "false")).lower() in ("1", "true", "yes")
    return ExperimentConfig(
        graph=graph,
        tasks=pick("tasks"),
        algorithms=[a.strip() for a in str(pick("algos", "rosenets,sequence")).split(",") if a.strip()],
        k_values=parse_int_list(pick("k", "5")),
        tau_values=parse_int_list(pick("tau", "0")),
        removal_mode=pick("removal", "prefix"),
        utility_kind=pick("utility", "coverage"),
        out=pick("out"),
        jobs=int(pick("jobs", 1)),
        seed=int(pick("seed", 0)),
        seed_history=not no_seed,
    )


def cmd_run(args) -> int:
    config = config_from_args(args)
    rows = run_experiment(config)
    _write_csv(rows, RESULT_COLUMNS, config.out)
    return 0


# --- bounds ------------------------------------------------------------------

def bound_rows(k_values, tau_values, d_in: int, d_out: int) -> list[list]:
    rows = []
    for k in k_values:
        for tau in tau_values:
            try:
                c = BoundConstants.from_params(k, tau, d_in, d_out)
                if tau == 1:
                    t1, t2 = theorem1_terms(c)
                    note = "tau=1 bound"
                else:
                    t1, t2 = theorem2_terms(c)
                    note = "general bound"
                    if c.eta is None:
                        note += "; eta n/a at k-tau-1=0"
                    elif t2 is None:
                        note += "; term2 n/a (denominator <= 0)"
            except DomainError as exc:
                rows.append([k, tau, d_in, d_out, "", "", "", "", "", "", "", f"domain error: {exc}"])
                continue
            ratio = t1 if t2 is None else max(t1, t2)
            rows.append([
                k, tau, d_in, d_out, int(c.alpha), int(c.beta), fmt(c.gamma),
                "n/a" if c.eta is None else fmt(c.eta),
                fmt(t1), "n/a" if t2 is None else fmt(t2), fmt(ratio), note,
            ])
    return rows


def cmd_bounds(args) -> int:
    d_in, d_out = args.d_in, args.d_out
    if args.graph:
        d_in, d_out = degree_stats(load_graph(args.graph), args.include_self_loops)
    rows = bound_rows(parse_int_list(args.k), parse_int_list(args.tau), d_in, d_out)
    _write_csv(rows, BOUND_COLUMNS, args.out)
    return 0


# --- validate ----------------------------------------------------------------

def cmd_validate(args) -> int:
    k_lo, k_hi = _span(args.k)
    t_lo, t_hi = _span(args.tau)
    reports = [
        validation.ratio_suite(args.seed, args.instances, args.max_n, (k_lo, k_hi), (t_lo, t_hi),
                               scale=args.corrupt_ratio),
        validation.lemma1_suite(args.seed, args.lemma1_draws, args.max_n + 1),
        validation.lemma2_suite(args.seed, args.lemma_instances, args.max_n),
        validation.lemma3_suite(args.seed, args.lemma_instances, args.max_n, (k_lo, k_hi), t_hi),
    ]
    failed = False
    for rep in reports:
        print(rep.summary())
        if rep.violations:
            failed = True
            print(f"  first witness: lhs={rep.violations[0].lhs!r} rhs={rep.violations[0].rhs!r} "
                  f"{rep.violations[0].witness}")
    return 1 if failed else 0


def _span(text: str) -> tuple[int, int]:
    vals = parse_int_list(text)
    if not vals:
        raise ValueError(f"empty range {text!r}")
    return min(vals), max(vals)


# --- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rosenets", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("ingest", help="build a graph and task file from raw data")
    q.add_argument("kind", choices=("amazon", "wikispeedia", "edgelist"))
    q.add_argument("input")
    q.add_argument("out", help="graph file to write; tasks go next to it as .tasks")
    q.add_argument("--min-item-count", type=int, default=50)
    q.add_argument("--min-user-items", type=int, default=29)
    q.add_argument("--min-path-len", type=int, default=29)
    q.add_argument("--length-unit", choices=("pages", "clicks"), default="pages")
    q.add_argument("--unresolved", action="store_true", help="drop back-clicks instead of expanding them")
    q.set_defaults(func=cmd_ingest)

    q = sub.add_parser("run", help="sweep algorithms over (k, tau) and write a CSV")
    q.add_argument("--config")
    q.add_argument("--graph", help="graph file or fixture name (fig1, fig2)")
    q.add_argument("--tasks")
    q.add_argument("--algos", help="comma list from: " + ", ".join(ALGORITHMS))
    q.add_argument("--k", help="comma list or a..b range")
    q.add_argument("--tau", help="comma list or a..b range")
    q.add_argument("--removal", choices=REMOVAL_MODES)
    q.add_argument("--utility", choices=("coverage", "modular"))
    q.add_argument("--out")
    q.add_argument("--jobs", type=int)
    q.add_argument("--seed", type=int)
    q.add_argument("--no-history-seed", action="store_true",
                   help="history items are excluded but do not seed marginals")
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("bounds", help="tabulate the approximation ratios")
    q.add_argument("--k", default="3..10")
    q.add_argument("--tau", default="1..2")
    q.add_argument("--d-in", type=int, default=1)
    q.add_argument("--d-out", type=int, default=1)
    q.add_argument("--graph", help="take d_in/d_out from this graph instead")
    q.add_argument("--include-self-loops", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=cmd_bounds)

    q = sub.add_parser("validate", help="random-instance campaign for the ratio and lemmas")
    q.add_argument("--instances", type=int, default=200)
    q.add_argument("--lemma-instances", type=int, default=50)
    q.add_argument("--lemma1-draws", type=int, default=1000)
    q.add_argument("--max-n", type=int, default=6)
    q.add_argument("--k", default="3..5")
    q.add_argument("--tau", default="1..2")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--corrupt-ratio", type=float, default=1.0, help=argparse.SUPPRESS)
    q.set_defaults(func=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (IngestError, ValueError, OSError, InfeasibleError) as exc:
        print(f"rosenets {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
