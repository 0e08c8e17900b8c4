"""Graph serialization, edge-list ingestion, and CSV/JSON emitters.

The canonical graph document is

    {"version": 1, "n": <int>, "edges": [[i, j, w], ...]}

with ``i < j`` and rows sorted lexicographically — exactly the internal
canonical order, so write/read round-trips are byte-stable.

Edge-list ingestion accepts the KONECT conventions: ``%``-prefixed comment
lines, whitespace-separated ``u v [weight [timestamp]]`` rows, 0- or 1-based
ids.  Node ids are compacted to 0..n-1 in order of first appearance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dynamics import SimConfig, TrialTrace
from .errors import (
    DuplicateEdgeError,
    EmptyGraphError,
    GraphParseError,
    MalformedLineError,
    VersionMismatchError,
)
from .graphs import Graph, connected_components
from .montecarlo import (
    CostSpec,
    LabelSummary,
    McConfig,
    McSummary,
    ScatterRow,
    TopologySpec,
)

GRAPH_FORMAT_VERSION = 1

TRACE_HEADER = "step,gap,lyapunov,consensus_residual,tracking_residual"
SCATTER_HEADER = "name,n,d,C,lambda2,rate"


# -- graph JSON ----------------------------------------------------------


def dumps_graph(g: Graph) -> str:
    edges = [[int(i), int(j), float(w)]
             for (i, j), w in zip(g.edges, g.weights)]
    return json.dumps({"version": GRAPH_FORMAT_VERSION, "n": g.n,
                       "edges": edges})


def loads_graph(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "version" not in doc:
        raise GraphParseError("graph document must be an object with a version")
    if doc["version"] != GRAPH_FORMAT_VERSION:
        raise VersionMismatchError(
            f"unsupported graph document version {doc['version']!r}")
    try:
        n = int(doc["n"])
        rows = doc["edges"]
        edges = np.array([[r[0], r[1]] for r in rows], dtype=np.int64) \
            if rows else np.empty((0, 2), dtype=np.int64)
        weights = np.array([r[2] for r in rows], dtype=np.float64) \
            if rows else np.empty(0)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise GraphParseError(f"malformed graph document: {exc}") from exc
    return Graph(n, edges, weights)


def write_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_graph(g))
        fh.write("\n")


def read_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_graph(fh.read())


# -- edge-list ingestion ---------------------------------------------------


@dataclass(frozen=True)
class IngestOptions:
    drop_self_loops: bool = True
    merge_duplicate_edges: bool = True
    largest_component_only: bool = True
    use_weights: bool = False


def parse_edge_list(text: str, opts: IngestOptions = IngestOptions()) -> Graph:
    """Parse a KONECT-style edge list into a simple undirected graph.

    Direction and timestamps are ignored; the weight column is used only
    when ``opts.use_weights`` is set, otherwise every edge gets weight 1.
    Duplicate pairs collapse to their first occurrence when merging is on.
    """
    ids: dict[int, int] = {}
    edge_order: list[tuple[int, int]] = []
    edge_weight: dict[tuple[int, int], float] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if len(parts) < 2 or len(parts) > 4:
            raise MalformedLineError(lineno, raw, "expected 2-4 columns")
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise MalformedLineError(lineno, raw, "non-integer node id")
        w = 1.0
        if opts.use_weights and len(parts) >= 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise MalformedLineError(lineno, raw, "non-numeric weight")
        if u == v:
            if opts.drop_self_loops:
                continue
            raise MalformedLineError(lineno, raw, "self-loop")
        for node in (u, v):
            if node not in ids:
                ids[node] = len(ids)
        a, b = ids[u], ids[v]
        key = (a, b) if a < b else (b, a)
        if key in edge_weight:
            if not opts.merge_duplicate_edges:
                raise DuplicateEdgeError(
                    f"line {lineno}: duplicate edge {u} {v}")
            continue
        edge_weight[key] = w
        edge_order.append(key)

    if not ids:
        raise EmptyGraphError("no nodes found in edge list")

    n = len(ids)
    edges = np.array(edge_order, dtype=np.int64)
    weights = np.array([edge_weight[k] for k in edge_order])
    g = Graph(n, edges, weights)
    if opts.largest_component_only:
        g = largest_component(g)
    return g


def largest_component(g: Graph) -> Graph:
    """Subgraph on the largest connected component, ids compacted in order."""
    comps = connected_components(g)
    if not comps:
        raise EmptyGraphError("graph has no nodes")
    best = max(comps, key=len)
    keep = np.zeros(g.n, dtype=bool)
    keep[best] = True
    relabel = np.full(g.n, -1, dtype=np.int64)
    relabel[best] = np.arange(len(best))
    mask = keep[g.edges[:, 0]]
    edges = relabel[g.edges[mask]]
    return Graph(len(best), edges, g.weights[mask])


# -- CSV emitters -----------------------------------------------------------


def format_trace_csv(trace: TrialTrace) -> str:
    lines = [TRACE_HEADER]
    for k in range(len(trace.recorded_steps)):
        lines.append(
            f"{int(trace.recorded_steps[k])},{float(trace.gap[k])!r},"
            f"{float(trace.lyapunov[k])!r},"
            f"{float(trace.consensus_residual[k])!r},"
            f"{float(trace.tracking_residual[k])!r}")
    return "\n".join(lines) + "\n"


def write_trace_csv(trace: TrialTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_trace_csv(trace))


def write_trace_meta(path: str, cfg: SimConfig, trace: TrialTrace,
                     seed: int | None) -> None:
    doc = {
        "alpha": cfg.alpha,
        "steps": cfg.steps,
        "h": trace.h,
        "record_stride": cfg.record_stride,
        "gap_tolerance": cfg.gap_tolerance,
        "x_init_range": list(cfg.x_init_range),
        "seed": seed,
        "diverged": trace.diverged,
        "max_tracking_residual": trace.max_tracking_residual,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True))
        fh.write("\n")


def format_mean_trace_csv(ls: LabelSummary) -> str:
    lines = [TRACE_HEADER]
    for k in range(len(ls.recorded_steps)):
        lines.append(
            f"{int(ls.recorded_steps[k])},{float(ls.mean_gap[k])!r},"
            f"{float(ls.mean_lyapunov[k])!r},"
            f"{float(ls.mean_consensus_residual[k])!r},"
            f"{float(ls.mean_tracking_residual[k])!r}")
    return "\n".join(lines) + "\n"


def format_scatter_csv(rows: list[ScatterRow]) -> str:
    lines = [SCATTER_HEADER]
    for r in rows:
        lam = "" if r.lambda2 is None else repr(float(r.lambda2))
        rate = "" if r.rate is None else repr(float(r.rate))
        lines.append(f"{r.label},{r.n},{float(r.avg_degree)!r},"
                     f"{float(r.clustering)!r},{lam},{rate}")
    return "\n".join(lines) + "\n"


def write_scatter_csv(rows: list[ScatterRow], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_scatter_csv(rows))


# -- campaign config and summary --------------------------------------------


def sim_to_dict(sim: SimConfig) -> dict:
    return {
        "alpha": sim.alpha,
        "steps": sim.steps,
        "h": sim.h,
        "record_stride": sim.record_stride,
        "gap_tolerance": sim.gap_tolerance,
        "x_init_range": list(sim.x_init_range),
    }


def sim_from_dict(doc: dict) -> SimConfig:
    return SimConfig(
        alpha=float(doc["alpha"]),
        steps=int(doc["steps"]),
        h=None if doc.get("h") is None else float(doc["h"]),
        record_stride=int(doc.get("record_stride", 1)),
        gap_tolerance=float(doc.get("gap_tolerance", 0.0)),
        x_init_range=tuple(doc.get("x_init_range", (-5.0, 5.0))),
    )


def topology_to_dict(t: TopologySpec) -> dict:
    doc: dict = {"label": t.label, "model": t.model}
    if t.model in ("ba", "hk"):
        doc["n"] = t.n
        doc["links"] = t.links
        if t.model == "hk":
            doc["triad_links"] = t.triad_links
        if t.seed_size is not None:
            doc["seed_size"] = t.seed_size
    else:
        doc["path"] = t.path
    return doc


def topology_from_dict(doc: dict) -> TopologySpec:
    return TopologySpec(
        label=str(doc["label"]),
        model=str(doc["model"]),
        n=doc.get("n"),
        links=doc.get("links"),
        triad_links=int(doc.get("triad_links", 0)),
        seed_size=doc.get("seed_size"),
        path=doc.get("path"),
    )


def config_to_dict(cfg: McConfig) -> dict:
    return {
        "topologies": [topology_to_dict(t) for t in cfg.topologies],
        "cost_spec": {"family": cfg.cost_spec.family, "m": cfg.cost_spec.m},
        "sim": sim_to_dict(cfg.sim),
        "trials": cfg.trials,
        "base_seed": cfg.base_seed,
        "weight_range": list(cfg.weight_range),
        "resample_cost": cfg.resample_cost,
    }


def config_from_dict(doc: dict) -> McConfig:
    try:
        cost = doc.get("cost_spec", {})
        return McConfig(
            topologies=tuple(topology_from_dict(t) for t in doc["topologies"]),
            cost_spec=CostSpec(family=cost.get("family", "quartic"),
                               m=int(cost.get("m", 20))),
            sim=sim_from_dict(doc["sim"]),
            trials=int(doc["trials"]),
            base_seed=int(doc["base_seed"]),
            weight_range=tuple(doc.get("weight_range", (0.5, 1.5))),
            resample_cost=str(doc.get("resample_cost", "per_trial")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphParseError(f"malformed campaign config: {exc}") from exc


def read_config(path: str) -> McConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphParseError(f"invalid config JSON: {exc}") from exc
    return config_from_dict(doc)


def summary_to_dict(summary: McSummary) -> dict:
    return {
        "h": summary.h,
        "config": summary.config,
        "labels": [
            {
                "label": ls.label,
                "recorded_steps": ls.recorded_steps.tolist(),
                "mean_gap": ls.mean_gap.tolist(),
                "mean_lyapunov": ls.mean_lyapunov.tolist(),
                "mean_consensus_residual": ls.mean_consensus_residual.tolist(),
                "mean_tracking_residual": ls.mean_tracking_residual.tolist(),
                "final_gap_mean": ls.final_gap_mean,
                "final_gap_std": ls.final_gap_std,
                "mean_clustering": ls.mean_clustering,
                "mean_avg_degree": ls.mean_avg_degree,
                "mean_lambda2": ls.mean_lambda2,
                "trial_count": ls.trial_count,
                "diverged_count": ls.diverged_count,
                "seeds": ls.seeds,
                "errors": [list(e) for e in ls.errors],
            }
            for ls in summary.labels
        ],
    }


def format_summary_json(summary: McSummary) -> str:
    return json.dumps(summary_to_dict(summary), indent=2, sort_keys=True) + "\n"


def write_campaign_outputs(summary: McSummary, outdir: str) -> None:
    """Emit ``summary.json`` plus one mean-trace CSV per label."""
    import os

    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "summary.json"), "w", encoding="utf-8") as fh:
        fh.write(format_summary_json(summary))
    for ls in summary.labels:
        path = os.path.join(outdir, f"mean_trace_{ls.label}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(format_mean_trace_csv(ls))
