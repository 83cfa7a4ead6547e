"""Inter-topic relatedness graphs between adjacent epochs.

Three edge measures are supported: the Bhattacharyya coefficient, and the
Kullback-Leibler divergence in forward and backward direction. Every
measure is mapped onto a common relatedness scale in (0, 1] where higher
means more related (BC stays as is, KLD becomes exp(-KLD)), so one
quantile-based pruning rule serves all three graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    InvalidZetaError,
    TooFewEpochsError,
)
from .hdp import EpochModel

MEASURES = ("bhattacharyya", "kld_forward", "kld_backward")

KLD_CLAMP = 1e-12


def _as_dist(p: Sequence[float] | np.ndarray) -> np.ndarray:
    return np.asarray(p, dtype=np.float64)


def bhattacharyya_coefficient(p, q) -> float:
    """BC(p, q) = sum_i sqrt(p_i * q_i), in [0, 1], symmetric."""
    p, q = _as_dist(p), _as_dist(q)
    if p.shape != q.shape:
        raise DimensionMismatchError(f"{p.shape} vs {q.shape}")
    return float(np.sqrt(p * q).sum())


def kl_divergence(p, q) -> float:
    """KLD(p || q) = sum_i p_i log(p_i / q_i) in nats.

    q is clamped to >= 1e-12 and renormalized before the sum, guarding
    raw user input; sampler outputs are strictly positive anyway. Terms
    with p_i = 0 contribute nothing.
    """
    p, q = _as_dist(p), _as_dist(q)
    if p.shape != q.shape:
        raise DimensionMismatchError(f"{p.shape} vs {q.shape}")
    qc = np.maximum(q, KLD_CLAMP)
    qc = qc / qc.sum()
    mask = p > 0
    total = float(np.sum(p[mask] * (np.log(p[mask]) - np.log(qc[mask]))))
    # Gibbs' inequality guarantees >= 0; rounding can leave a tiny negative
    return max(total, 0.0)


def bhattacharyya_distance(p, q) -> float:
    """BHD = -ln BC; 0 iff the distributions coincide."""
    bc = bhattacharyya_coefficient(p, q)
    return math.inf if bc == 0.0 else -math.log(bc)


class EmpiricalCdf:
    """Right-continuous empirical CDF with an order-statistic quantile.

    ``quantile(z)`` returns the smallest observed value v with F(v) >= z;
    ``quantile(0)`` returns -inf as a retain-everything sentinel.
    """

    def __init__(self, values: Iterable[float]):
        arr = np.sort(np.asarray(list(values), dtype=np.float64))
        if arr.size == 0:
            raise EmptyInputError("empirical CDF needs at least one value")
        self._values = arr
        self._steps = np.arange(1, arr.size + 1) / arr.size

    def __call__(self, v: float) -> float:
        return float(np.searchsorted(self._values, v, side="right") / self._values.size)

    def quantile(self, zeta: float) -> float:
        if not (0.0 <= zeta <= 1.0):
            raise InvalidZetaError(f"zeta must be in [0, 1], got {zeta}")
        if zeta == 0.0:
            return -math.inf
        idx = int(np.searchsorted(self._steps, zeta, side="left"))
        return float(self._values[idx])

    @property
    def support(self) -> np.ndarray:
        return self._values.copy()


def empirical_cdf(values: Iterable[float]) -> EmpiricalCdf:
    return EmpiricalCdf(values)


@dataclass(frozen=True, order=True)
class TopicNode:
    epoch: int
    topic_id: int

    def to_jsonable(self) -> dict:
        return {"epoch": self.epoch, "id": self.topic_id}


@dataclass(frozen=True)
class TemporalEdge:
    src: TopicNode
    dst: TopicNode
    raw_weight: float
    relatedness: float
    surviving: bool = True

    @property
    def key(self) -> tuple[TopicNode, TopicNode]:
        return (self.src, self.dst)

    def to_jsonable(self) -> dict:
        return {
            "from": self.src.to_jsonable(),
            "to": self.dst.to_jsonable(),
            "raw_weight": float(self.raw_weight),
            "relatedness": float(self.relatedness),
            "surviving": bool(self.surviving),
        }


@dataclass(frozen=True)
class TemporalGraph:
    """Layered digraph linking topics of adjacent epochs.

    Before pruning the graph is complete bipartite between every adjacent
    epoch pair. Pruning is non-destructive: every edge is kept, with a
    survival flag, so the graph can be re-pruned at any operating point.
    """

    measure: str
    nodes: tuple[TopicNode, ...]
    edges: tuple[TemporalEdge, ...]
    cdf: EmpiricalCdf
    zeta: float | None = None
    pruned: bool = False

    def surviving_edges(self) -> list[TemporalEdge]:
        return [e for e in self.edges if e.surviving]

    def out_edges(self, node: TopicNode, surviving_only: bool = True) -> list[TemporalEdge]:
        return [
            e
            for e in self.edges
            if e.src == node and (e.surviving or not surviving_only)
        ]

    def in_edges(self, node: TopicNode, surviving_only: bool = True) -> list[TemporalEdge]:
        return [
            e
            for e in self.edges
            if e.dst == node and (e.surviving or not surviving_only)
        ]

    def epoch_range(self) -> tuple[int, int]:
        epochs = [n.epoch for n in self.nodes]
        return min(epochs), max(epochs)

    def to_jsonable(self) -> dict:
        return {
            "measure": self.measure,
            "zeta": None if self.zeta is None else float(self.zeta),
            "nodes": [n.to_jsonable() for n in self.nodes],
            "edges": [e.to_jsonable() for e in self.edges],
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "TemporalGraph":
        nodes = tuple(TopicNode(n["epoch"], n["id"]) for n in obj["nodes"])
        edges = tuple(
            TemporalEdge(
                src=TopicNode(e["from"]["epoch"], e["from"]["id"]),
                dst=TopicNode(e["to"]["epoch"], e["to"]["id"]),
                raw_weight=float(e["raw_weight"]),
                relatedness=float(e["relatedness"]),
                surviving=bool(e["surviving"]),
            )
            for e in obj["edges"]
        )
        graph = cls(
            measure=obj["measure"],
            nodes=nodes,
            edges=edges,
            cdf=EmpiricalCdf([e.relatedness for e in edges]),
            zeta=obj["zeta"],
            pruned=obj["zeta"] is not None,
        )
        return graph


def _edge_values(measure: str, parent: np.ndarray, child: np.ndarray) -> tuple[float, float]:
    """(raw_weight, relatedness) of a parent-at-t -> child-at-t+1 edge."""
    if measure == "bhattacharyya":
        bc = bhattacharyya_coefficient(parent, child)
        return bc, bc
    if measure == "kld_forward":
        # Small when the parent envelops the later topic.
        kld = kl_divergence(child, parent)
        return kld, math.exp(-kld)
    if measure == "kld_backward":
        # Small when the later topic envelops the parent.
        kld = kl_divergence(parent, child)
        return kld, math.exp(-kld)
    raise ValueError(f"unknown measure {measure!r}")  # pragma: no cover


def build_graph(models: Sequence[EpochModel], measure: str) -> TemporalGraph:
    """Complete bipartite relatedness graph over every adjacent epoch pair."""
    if measure not in MEASURES:
        raise ValueError(f"measure must be one of {MEASURES}, got {measure!r}")
    if len(models) < 2:
        raise TooFewEpochsError("need at least two epoch models")

    nodes: list[TopicNode] = []
    for model in models:
        for topic in model.topics:
            nodes.append(TopicNode(model.epoch, topic.id))

    edges: list[TemporalEdge] = []
    for earlier, later in zip(models, models[1:]):
        for src_topic in earlier.topics:
            for dst_topic in later.topics:
                raw, rel = _edge_values(measure, src_topic.term_dist, dst_topic.term_dist)
                edges.append(
                    TemporalEdge(
                        src=TopicNode(earlier.epoch, src_topic.id),
                        dst=TopicNode(later.epoch, dst_topic.id),
                        raw_weight=raw,
                        relatedness=rel,
                    )
                )

    return TemporalGraph(
        measure=measure,
        nodes=tuple(nodes),
        edges=tuple(edges),
        cdf=EmpiricalCdf([e.relatedness for e in edges]),
    )


def prune(graph: TemporalGraph, zeta: float) -> TemporalGraph:
    """Mark edge survival: an edge survives iff relatedness >= F^-1(zeta).

    The CDF is the one computed over the full (unpruned) edge set, so
    pruning can be repeated at any operating point without information
    loss.
    """
    if not (0.0 <= zeta <= 1.0):
        raise InvalidZetaError(f"zeta must be in [0, 1], got {zeta}")
    threshold = graph.cdf.quantile(zeta)
    edges = tuple(
        replace(e, surviving=e.relatedness >= threshold) for e in graph.edges
    )
    return replace(graph, edges=edges, zeta=zeta, pruned=True)
