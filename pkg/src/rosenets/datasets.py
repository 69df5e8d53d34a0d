"""Graph construction from purchase logs and navigation paths, file formats, fixtures."""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence as SeqType

from .graph import DirectedGraph, Edge, GraphError, Sequence

HISTORY_LEN = 4


class IngestError(ValueError):
    """Malformed input record; the message carries the line number."""


@dataclass(frozen=True)
class EvalTask:
    history: Sequence
    truth: Sequence

    def __post_init__(self):
        if set(self.history) & set(self.truth):
            raise ValueError("task history and truth overlap")


@dataclass
class InteractionLog:
    records: list[tuple[str, str, int]]


@dataclass
class PathLog:
    paths: list[list[str]]


# --- readers -----------------------------------------------------------------

def read_interactions(path: str | Path) -> InteractionLog:
    """TSV lines ``user<TAB>item<TAB>timestamp``; blank and ``#`` lines skipped."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise IngestError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(parts)}")
            user, item, ts = parts
            try:
                records.append((user, item, int(ts)))
            except ValueError:
                raise IngestError(f"{path}:{lineno}: timestamp {ts!r} is not an integer") from None
    return InteractionLog(records)


def resolve_back_clicks(tokens: SeqType[str], resolve: bool = True) -> list[str]:
    """Expand ``<`` markers into the page the user went back to, or drop them.

    ``a;b;<;c`` becomes ``a, b, a, c`` when resolved and ``a, b, c`` otherwise.
    """
    out: list[str] = []
    stack: list[str] = []
    for tok in tokens:
        if tok == "<":
            if not stack:
                raise IngestError("back-click with nothing to go back to")
            stack.pop()
            if resolve:
                if not stack:
                    raise IngestError("back-click past the first page")
                out.append(stack[-1])
            continue
        stack.append(tok)
        out.append(tok)
    return out


def read_paths(path: str | Path, resolve: bool = True) -> PathLog:
    """One path per line, pages separated by ``;``."""
    paths = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = [t.strip() for t in line.split(";")]
            if any(not t for t in tokens):
                raise IngestError(f"{path}:{lineno}: empty page name")
            try:
                paths.append(resolve_back_clicks(tokens, resolve))
            except IngestError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
    return PathLog(paths)


# --- graph builders ----------------------------------------------------------

def _dedupe(items: Iterable) -> list:
    seen: set = set()
    out = []
    for x in items:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _make_task(order: list[int], history_len: int) -> EvalTask | None:
    if len(order) <= history_len:
        return None
    return EvalTask(tuple(order[:history_len]), tuple(order[history_len:]))


def build_purchase_graph(
    log: InteractionLog,
    min_item_count: int = 50,
    min_user_items: int = 29,
    history_len: int = HISTORY_LEN,
) -> tuple[DirectedGraph, list[EvalTask]]:
    """Conditional purchase graph.

    w_ij = users who bought i and later j / users who bought i;
    w_ii = users who bought i / all users. Items bought by fewer than
    ``min_item_count`` users are dropped first.
    """
    if not log.records:
        raise IngestError("empty interaction log")
    by_user: dict[str, list[tuple[int, int, str]]] = defaultdict(list)
    for n, (user, item, ts) in enumerate(log.records):
        by_user[user].append((ts, n, item))
    orders = {u: _dedupe(item for _, _, item in sorted(recs)) for u, recs in by_user.items()}
    buyers = Counter(item for order in orders.values() for item in order)
    kept = sorted(item for item, c in buyers.items() if c >= min_item_count)
    ids = {item: i for i, item in enumerate(kept)}

    pair_users: Counter = Counter()
    filtered: dict[str, list[int]] = {}
    for user in sorted(orders):
        order = [ids[i] for i in orders[user] if i in ids]
        filtered[user] = order
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                pair_users[(order[a], order[b])] += 1

    n_users = len(orders)
    edges = [Edge(i, i, buyers[item] / n_users) for item, i in ids.items()]
    edges += [Edge(i, j, c / buyers[kept[i]]) for (i, j), c in pair_users.items()]
    g = DirectedGraph(len(kept), edges, labels=kept)

    tasks = []
    for user in sorted(filtered):
        order = filtered[user]
        if len(order) >= min_user_items:
            task = _make_task(order, history_len)
            if task is not None:
                tasks.append(task)
    return g, tasks


def build_path_graph(
    log: PathLog,
    min_path_len: int = 29,
    length_unit: str = "pages",
    history_len: int = HISTORY_LEN,
) -> tuple[DirectedGraph, list[EvalTask]]:
    """Navigation graph: w_ij = moves i->j / visits of i, no self-loops.

    Every occurrence of a page counts as a visit, path ends included. Path
    length is counted in pages or in clicks (pages - 1).
    """
    if not log.paths:
        raise IngestError("empty path log")
    if length_unit not in ("pages", "clicks"):
        raise ValueError(f"length_unit must be 'pages' or 'clicks', got {length_unit!r}")
    pages = sorted({p for path in log.paths for p in path})
    ids = {p: i for i, p in enumerate(pages)}
    visits: Counter = Counter()
    moves: Counter = Counter()
    for path in log.paths:
        if not path:
            raise IngestError("path of length 0")
        visits.update(path)
        for a, b in zip(path, path[1:]):
            if a != b:
                moves[(ids[a], ids[b])] += 1
    edges = [Edge(i, j, c / visits[pages[i]]) for (i, j), c in moves.items()]
    g = DirectedGraph(len(pages), edges, labels=pages)

    tasks = []
    for path in log.paths:
        length = len(path) if length_unit == "pages" else len(path) - 1
        if length >= min_path_len:
            task = _make_task(_dedupe(ids[p] for p in path), history_len)
            if task is not None:
                tasks.append(task)
    return g, tasks


# --- file formats ------------------------------------------------------------

def format_graph(g: DirectedGraph) -> str:
    lines = [f"{g.n_elements} {g.n_edges}"]
    lines += [f"{e.tail} {e.head} {e.weight!r}" for e in g.edges]
    return "\n".join(lines) + "\n"


def save_graph_file(g: DirectedGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")


def parse_graph(text: str, source: str = "<graph>") -> DirectedGraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if header is None:
                if len(parts) != 2:
                    raise ValueError("header must be 'n_elements m_edges'")
                header = (int(parts[0]), int(parts[1]))
                continue
            if len(parts) != 3:
                raise ValueError("edge line must be 'tail head weight'")
            tail, head, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise IngestError(f"{source}:{lineno}: {exc}") from None
        if not 0.0 <= w <= 1.0:
            raise IngestError(f"{source}:{lineno}: weight {w} outside [0, 1]")
        if not (0 <= tail < header[0] and 0 <= head < header[0]):
            raise IngestError(f"{source}:{lineno}: endpoint outside 0..{header[0] - 1}")
        edges.append(Edge(tail, head, w))
    if header is None:
        raise IngestError(f"{source}: missing header")
    if len(edges) != header[1]:
        raise IngestError(f"{source}: header declares {header[1]} edges, body has {len(edges)}")
    try:
        return DirectedGraph(header[0], edges)
    except GraphError as exc:
        raise IngestError(f"{source}: {exc}") from None


def load_graph_file(path: str | Path) -> DirectedGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"), str(path))


def format_tasks(tasks: Iterable[EvalTask]) -> str:
    return "".join(
        ",".join(map(str, t.history)) + "|" + ",".join(map(str, t.truth)) + "\n" for t in tasks
    )


def save_tasks(tasks: Iterable[EvalTask], path: str | Path) -> None:
    Path(path).write_text(format_tasks(tasks), encoding="utf-8")


def load_tasks(path: str | Path) -> list[EvalTask]:
    tasks = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                hist, truth = line.split("|")
                tasks.append(EvalTask(
                    tuple(int(x) for x in hist.split(",") if x),
                    tuple(int(x) for x in truth.split(",") if x),
                ))
            except ValueError as exc:
                raise IngestError(f"{path}:{lineno}: {exc}") from None
    return tasks


# --- fixtures ----------------------------------------------------------------

FIG2_LABELS = ("A", "B", "C", "D", "E", "F", "G")


def figure2_graph() -> DirectedGraph:
    """Seven elements: a hub B with 0.9 edges and a 0.5 triangle C, D, G."""
    A, B, C, D, E, F, G = range(7)
    return DirectedGraph(7, [
        (A, B, 0.9), (B, C, 0.9), (B, E, 0.9), (B, F, 0.9),
        (C, D, 0.5), (C, G, 0.5), (D, G, 0.5),
    ], labels=FIG2_LABELS)


def figure1_graph() -> DirectedGraph:
    """Three disjoint 4-element groups A1..A4, B1..B4, C1..C4.

    A is a 0.9 chain, B has five 0.5 edges (no B1->B4), C is the complete
    0.4 DAG. Sequence totals are 2.7, 2.5 and 2.4.
    """
    labels = [f"{s}{i}" for s in "ABC" for i in range(1, 5)]
    a, b, c = 0, 4, 8
    edges = [
        (a, a + 1, 0.9), (a + 1, a + 2, 0.9), (a + 2, a + 3, 0.9),
        (b, b + 1, 0.5), (b, b + 2, 0.5), (b + 1, b + 2, 0.5), (b + 1, b + 3, 0.5),
        (b + 2, b + 3, 0.5),
        (c, c + 1, 0.4), (c, c + 2, 0.4), (c, c + 3, 0.4),
        (c + 1, c + 2, 0.4), (c + 1, c + 3, 0.4), (c + 2, c + 3, 0.4),
    ]
    return DirectedGraph(12, edges, labels=labels)


FIXTURES = {"fig2": figure2_graph, "fig1": figure1_graph}


def random_graph(
    rng: random.Random,
    n: int,
    n_edges: int,
    acyclic: bool = True,
    self_loop_prob: float = 0.0,
    weights: str = "uniform",
) -> DirectedGraph:
    """Random instance with at least one non-loop edge when n >= 2.

    Acyclic graphs only use pairs i < j under a random relabelling.
    """
    order = list(range(n))
    rng.shuffle(order)
    if acyclic:
        pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)]
    else:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    picked = rng.sample(pairs, min(max(n_edges, 1 if n >= 2 else 0), len(pairs)))

    def draw() -> float:
        if weights == "grid":
            return rng.choice((0.1, 0.2, 0.25, 0.5, 0.75, 1.0))
        return round(rng.uniform(0.05, 1.0), 3)

    edges = [(i, j, draw()) for i, j in picked]
    edges += [(v, v, draw()) for v in range(n) if rng.random() < self_loop_prob]
    return DirectedGraph(n, edges)
