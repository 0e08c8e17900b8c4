"""Seeded Monte-Carlo campaigns over topology families.

A campaign runs ``trials`` independent (graph, weights, cost, initial state)
samples for each labeled topology, averages the recorded traces in fixed
trial order, and reports per-label clustering/degree/connectivity statistics
next to the mean optimality-gap trajectory.  Every trial derives its own
seed from ``(base_seed, label_index, trial_index)`` through an integer
mixing function, so campaigns are bit-reproducible and trials are
independent of execution order.

When the step size is left unset, the campaign makes a first deterministic
pass over all trials to take the most conservative stability bound, then
reruns them with half that bound, so every label is integrated with one
common step size.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .costs import CostModel, aggregate_optimum, sample_cost
from .dynamics import SimConfig, TrialTrace, initialize, run, stability_max_step
from .errors import ClustoptError, IndexOutOfRangeError, InvalidParamsError
from .generators import BaParams, HkParams, generate_ba, generate_hk
from .graphs import Graph, assign_random_weights, global_clustering, is_connected
from .spectral import lambda2_laplacian, spectral_report

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1
_ONCE_STREAM = (1 << 63) - 1   # reserved trial index for shared cost models
_SHARED_LABEL = (1 << 63) - 1  # reserved label index: cost/init stream


@dataclass(frozen=True)
class TopologySpec:
    """One labeled topology: a generator family or a graph file."""

    label: str
    model: str  # "ba" | "hk" | "file"
    n: int | None = None
    links: int | None = None
    triad_links: int = 0
    seed_size: int | None = None
    path: str | None = None

    def validate(self) -> None:
        if self.model in ("ba", "hk"):
            if self.n is None or self.links is None:
                raise InvalidParamsError(
                    f"topology {self.label!r}: generator needs n and links")
            if self.model == "ba":
                BaParams(self.n, self.links, self.seed_size).validate()
            else:
                HkParams(self.n, self.links, self.triad_links,
                         self.seed_size).validate()
        elif self.model == "file":
            if not self.path:
                raise InvalidParamsError(
                    f"topology {self.label!r}: file topology needs a path")
        else:
            raise InvalidParamsError(
                f"topology {self.label!r}: unknown model {self.model!r}")


@dataclass(frozen=True)
class CostSpec:
    family: str = "quartic"
    m: int = 20


@dataclass(frozen=True)
class McConfig:
    topologies: tuple[TopologySpec, ...]
    cost_spec: CostSpec
    sim: SimConfig
    trials: int
    base_seed: int
    weight_range: tuple[float, float] = (0.5, 1.5)
    resample_cost: str = "per_trial"  # or "once"

    def validate(self) -> None:
        if self.trials < 1:
            raise InvalidParamsError(f"trials must be >= 1, got {self.trials}")
        labels = [t.label for t in self.topologies]
        if len(set(labels)) != len(labels):
            raise InvalidParamsError(f"duplicate topology labels in {labels}")
        if self.resample_cost not in ("per_trial", "once"):
            raise InvalidParamsError(
                f"resample_cost must be per_trial or once, got {self.resample_cost!r}")
        if self.sim.gap_tolerance != 0.0:
            raise InvalidParamsError(
                "campaigns require gap_tolerance = 0 so all traces share one step grid")
        for t in self.topologies:
            t.validate()
        self.sim.validate()


@dataclass
class LabelSummary:
    label: str
    recorded_steps: np.ndarray
    mean_gap: np.ndarray
    mean_lyapunov: np.ndarray
    mean_consensus_residual: np.ndarray
    mean_tracking_residual: np.ndarray
    final_gap_mean: float
    final_gap_std: float
    mean_clustering: float
    mean_avg_degree: float
    mean_lambda2: float
    trial_count: int
    diverged_count: int
    seeds: list[int]
    errors: list[tuple[int, str, str]]


@dataclass
class McSummary:
    h: float
    labels: list[LabelSummary]
    config: dict
    per_trial_gaps: dict[str, np.ndarray] | None = None


@dataclass(frozen=True)
class VerdictRow:
    label: str
    mean_gap: float
    mean_clustering: float


@dataclass(frozen=True)
class ScatterRow:
    label: str
    n: int
    avg_degree: float
    clustering: float
    lambda2: float | None
    rate: float | None


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def trial_seed(base_seed: int, label_index: int, trial_index: int) -> int:
    """Deterministic, collision-resistant 64-bit seed for one trial."""
    if label_index < 0 or trial_index < 0:
        raise InvalidParamsError("indices must be >= 0")
    s = _splitmix64(base_seed & _MASK64)
    s = _splitmix64(s ^ (label_index & _MASK64))
    s = _splitmix64(s ^ (trial_index & _MASK64))
    return s


def _generate_topology(topo: TopologySpec, rng: np.random.Generator,
                       file_cache: dict) -> Graph:
    if topo.model == "ba":
        return generate_ba(BaParams(topo.n, topo.links, topo.seed_size), rng)
    if topo.model == "hk":
        return generate_hk(
            HkParams(topo.n, topo.links, topo.triad_links, topo.seed_size), rng)
    if topo.path not in file_cache:
        from .graph_io import read_graph

        file_cache[topo.path] = read_graph(topo.path)
    return file_cache[topo.path]


def _trial_inputs(cfg: McConfig, topo: TopologySpec, label_index: int,
                  trial_index: int, file_cache: dict,
                  shared_model: CostModel | None):
    """Graph, weights, cost model and initial state for one trial.

    Topology and weights come from the (label, trial) stream; the cost model
    and initial state come from a label-independent per-trial stream, so
    labels with equal node counts face identical costs and starting points
    and the label contrast isolates the topology effect (common random
    numbers).  Everything rebuilds bit-identically from the seeds alone.
    """
    seed = trial_seed(cfg.base_seed, label_index, trial_index)
    rng = np.random.default_rng(seed)
    g = _generate_topology(topo, rng, file_cache)
    wg = assign_random_weights(g, rng, *cfg.weight_range)
    rng_shared = np.random.default_rng(
        trial_seed(cfg.base_seed, _SHARED_LABEL, trial_index))
    if shared_model is not None:
        model = shared_model
    else:
        model = sample_cost(cfg.cost_spec.family, g.n, rng_shared,
                            cfg.cost_spec.m)
    state = initialize(wg, model, cfg.sim, rng_shared)
    return seed, wg, model, state


def _shared_model(cfg: McConfig, topo: TopologySpec, label_index: int,
                  file_cache: dict) -> CostModel | None:
    if cfg.resample_cost != "once":
        return None
    rng = np.random.default_rng(
        trial_seed(cfg.base_seed, label_index, _ONCE_STREAM))
    g = _generate_topology(topo, np.random.default_rng(0), file_cache) \
        if topo.model == "file" else None
    n = g.n if g is not None else topo.n
    return sample_cost(cfg.cost_spec.family, n, rng, cfg.cost_spec.m)


def _label_rank(cfg: McConfig, label: str) -> int:
    """Seed index of a label: its lexicographic rank, not declaration order.

    Permuting the declaration order of topologies must permute summary rows
    without changing any mean, so seeds cannot depend on list position.
    """
    return sorted(t.label for t in cfg.topologies).index(label)


def _campaign_step_size(cfg: McConfig, file_cache: dict) -> float:
    """Half the most conservative stability bound over all trials."""
    bound = np.inf
    for topo in cfg.topologies:
        li = _label_rank(cfg, topo.label)
        shared = _shared_model(cfg, topo, li, file_cache)
        for ti in range(cfg.trials):
            _, wg, model, state = _trial_inputs(cfg, topo, li, ti,
                                                file_cache, shared)
            bound = min(bound, stability_max_step(wg, cfg.sim.alpha, model, state))
    if not np.isfinite(bound):
        raise InvalidParamsError("stability bound is unbounded; set sim.h explicitly")
    return 0.5 * bound


def run_mc(cfg: McConfig, keep_trial_gaps: bool = False) -> McSummary:
    """Run the full campaign and aggregate per-label statistics.

    Trials with non-finite states are excluded from every mean and counted
    as diverged; domain errors go to the per-label error ledger.  A label
    where no trial succeeds aborts the campaign.
    """
    cfg.validate()
    file_cache: dict = {}
    h = cfg.sim.h if cfg.sim.h is not None else _campaign_step_size(cfg, file_cache)
    sim = replace(cfg.sim, h=h)

    from .graph_io import config_to_dict

    labels: list[LabelSummary] = []
    per_trial_gaps: dict[str, np.ndarray] = {}
    for topo in cfg.topologies:
        li = _label_rank(cfg, topo.label)
        shared = _shared_model(cfg, topo, li, file_cache)
        seeds: list[int] = []
        errors: list[tuple[int, str, str]] = []
        traces: list[TrialTrace] = []
        clusterings: list[float] = []
        avg_degrees: list[float] = []
        lambda2s: list[float] = []
        diverged = 0
        for ti in range(cfg.trials):
            seeds.append(trial_seed(cfg.base_seed, li, ti))
            try:
                seed, wg, model, state = _trial_inputs(cfg, topo, li, ti,
                                                       file_cache, shared)
                trace = run(wg, model, sim, np.random.default_rng(seed),
                            initial_state=state)
            except ClustoptError as exc:
                errors.append((ti, exc.code, str(exc)))
                continue
            if trace.diverged:
                diverged += 1
                logger.warning("label %s trial %d diverged at h=%g",
                               topo.label, ti, h)
                continue
            traces.append(trace)
            clusterings.append(global_clustering(wg).global_mean)
            avg_degrees.append(2.0 * wg.edge_count / wg.n)
            lambda2s.append(lambda2_laplacian(wg))
        if not traces:
            raise ClustoptError(
                f"all {cfg.trials} trials of label {topo.label!r} failed")
        gap_matrix = np.vstack([t.gap for t in traces])
        final = gap_matrix[:, -1]
        labels.append(LabelSummary(
            label=topo.label,
            recorded_steps=traces[0].recorded_steps.copy(),
            mean_gap=gap_matrix.mean(axis=0),
            mean_lyapunov=np.vstack([t.lyapunov for t in traces]).mean(axis=0),
            mean_consensus_residual=np.vstack(
                [t.consensus_residual for t in traces]).mean(axis=0),
            mean_tracking_residual=np.vstack(
                [t.tracking_residual for t in traces]).mean(axis=0),
            final_gap_mean=float(final.mean()),
            final_gap_std=float(final.std()),
            mean_clustering=float(np.mean(clusterings)),
            mean_avg_degree=float(np.mean(avg_degrees)),
            mean_lambda2=float(np.mean(lambda2s)),
            trial_count=len(traces),
            diverged_count=diverged,
            seeds=seeds,
            errors=errors,
        ))
        if keep_trial_gaps:
            per_trial_gaps[topo.label] = gap_matrix
    return McSummary(h=h, labels=labels, config=config_to_dict(cfg),
                     per_trial_gaps=per_trial_gaps if keep_trial_gaps else None)


def compare_topologies(summary: McSummary, at_step: int) -> list[VerdictRow]:
    """Labels ordered fastest first by mean gap at one recorded step.

    ``at_step`` indexes the recorded trajectory; ties break on the label.
    """
    size = min(len(ls.mean_gap) for ls in summary.labels)
    if not -size <= at_step < size:
        raise IndexOutOfRangeError(
            f"record index {at_step} outside trajectory of length {size}")
    rows = [VerdictRow(label=ls.label,
                       mean_gap=float(ls.mean_gap[at_step]),
                       mean_clustering=ls.mean_clustering)
            for ls in summary.labels]
    return sorted(rows, key=lambda r: (r.mean_gap, r.label))


def scatter_report(graphs: list[tuple[str, Graph]], alpha: float,
                   cost_spec: CostSpec | None = None,
                   base_seed: int = 0) -> list[ScatterRow]:
    """Clustering-versus-spectrum table, one row per graph.

    The rate column evaluates the curvatures at the aggregate optimum of a
    cost model sampled per row.  Disconnected graphs keep their metric
    columns but carry no spectral values.
    """
    cost_spec = cost_spec or CostSpec()
    rows: list[ScatterRow] = []
    for idx, (label, g) in enumerate(graphs):
        cl = global_clustering(g).global_mean
        d = 2.0 * g.edge_count / g.n if g.n else 0.0
        if not is_connected(g):
            rows.append(ScatterRow(label, g.n, d, cl, None, None))
            continue
        rng = np.random.default_rng(trial_seed(base_seed, idx, 0))
        model = sample_cost(cost_spec.family, g.n, rng, cost_spec.m)
        cert = aggregate_optimum(model)
        hdiag = model.hessian_nodes(np.full(g.n, cert.x_star))
        report = spectral_report(g, alpha, hdiag)
        rows.append(ScatterRow(label, g.n, d, cl,
                               report.lambda2_laplacian, report.rate))
    return rows
