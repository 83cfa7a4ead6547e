"""Topic dynamics classification over the pruned relatedness graphs.

The similarity (Bhattacharyya) graph drives emergence, vanishing,
gradual evolution, speciation, and convergence; the forward/backward KLD
graphs detect genuine splitting and merging, where a parent envelops its
successors or a successor envelops its predecessors. Labels are sets: one
topic may speciate in the similarity view and split in the envelopment
view at the same time.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import NodeSetMismatchError, UnprunedGraphError
from .relatedness import TemporalEdge, TemporalGraph, TopicNode

EVENT_LABELS = (
    "Emerged",
    "Vanished",
    "Evolved",
    "Speciated",
    "Converged",
    "Split",
    "Merged",
)


@dataclass(frozen=True)
class EvidenceEdge:
    measure: str
    src: TopicNode
    dst: TopicNode

    def to_jsonable(self) -> dict:
        return {
            "measure": self.measure,
            "from": self.src.to_jsonable(),
            "to": self.dst.to_jsonable(),
        }


@dataclass
class TopicEventSet:
    """The (possibly empty) label set of one graph node, with evidence."""

    node: TopicNode
    labels: set[str] = field(default_factory=set)
    evidence: dict[str, list[EvidenceEdge]] = field(default_factory=dict)

    def add(self, label: str, edges: list[TemporalEdge], measure: str) -> None:
        self.labels.add(label)
        self.evidence.setdefault(label, []).extend(
            EvidenceEdge(measure, e.src, e.dst) for e in edges
        )

    def to_jsonable(self) -> dict:
        return {
            "epoch": self.node.epoch,
            "topic_id": self.node.topic_id,
            "labels": sorted(self.labels),
            "evidence": {
                label: [e.to_jsonable() for e in edges]
                for label, edges in sorted(self.evidence.items())
            },
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "TopicEventSet":
        ev = {
            label: [
                EvidenceEdge(
                    measure=e["measure"],
                    src=TopicNode(e["from"]["epoch"], e["from"]["id"]),
                    dst=TopicNode(e["to"]["epoch"], e["to"]["id"]),
                )
                for e in edges
            ]
            for label, edges in obj["evidence"].items()
        }
        return cls(
            node=TopicNode(obj["epoch"], obj["topic_id"]),
            labels=set(obj["labels"]),
            evidence=ev,
        )


def _check_graphs(*graphs: TemporalGraph) -> None:
    for g in graphs:
        if not g.pruned:
            raise UnprunedGraphError(f"{g.measure} graph has not been pruned")
    node_sets = [set(g.nodes) for g in graphs]
    if any(ns != node_sets[0] for ns in node_sets[1:]):
        raise NodeSetMismatchError("graphs cover different node sets")


def _adjacency(graph: TemporalGraph):
    out_edges: dict[TopicNode, list[TemporalEdge]] = defaultdict(list)
    in_edges: dict[TopicNode, list[TemporalEdge]] = defaultdict(list)
    for e in graph.surviving_edges():
        out_edges[e.src].append(e)
        in_edges[e.dst].append(e)
    return out_edges, in_edges


def classify_events(
    bhd: TemporalGraph,
    kld_fwd: TemporalGraph,
    kld_bwd: TemporalGraph,
) -> list[TopicEventSet]:
    """Label every node from the structure of the three pruned graphs.

    Similarity view (BHD): no incoming edge means the topic emerged
    (first-epoch nodes exempt), no outgoing edge means it vanished
    (final-epoch nodes exempt), a unique-on-both-ends edge marks gradual
    evolution of both endpoints, out-degree >= 2 is speciation and
    in-degree >= 2 convergence. Envelopment view: out-degree >= 2 in the
    forward-KLD graph is a split, in-degree >= 2 in the backward-KLD
    graph is a merge.
    """
    _check_graphs(bhd, kld_fwd, kld_bwd)
    first_epoch, last_epoch = bhd.epoch_range()

    bhd_out, bhd_in = _adjacency(bhd)
    fwd_out, _ = _adjacency(kld_fwd)
    _, bwd_in = _adjacency(kld_bwd)

    results = []
    for node in sorted(bhd.nodes):
        ev = TopicEventSet(node=node)
        incoming = bhd_in.get(node, [])
        outgoing = bhd_out.get(node, [])

        if node.epoch > first_epoch and not incoming:
            ev.add("Emerged", [], "bhattacharyya")
        if node.epoch < last_epoch and not outgoing:
            ev.add("Vanished", [], "bhattacharyya")
        if len(outgoing) == 1:
            successor = outgoing[0].dst
            if len(bhd_in.get(successor, [])) == 1:
                ev.add("Evolved", outgoing, "bhattacharyya")
        if len(incoming) == 1:
            predecessor = incoming[0].src
            if len(bhd_out.get(predecessor, [])) == 1:
                ev.add("Evolved", incoming, "bhattacharyya")
        if len(outgoing) >= 2:
            ev.add("Speciated", outgoing, "bhattacharyya")
        if len(incoming) >= 2:
            ev.add("Converged", incoming, "bhattacharyya")

        fwd_children = fwd_out.get(node, [])
        if len(fwd_children) >= 2:
            ev.add("Split", fwd_children, "kld_forward")
        bwd_parents = bwd_in.get(node, [])
        if len(bwd_parents) >= 2:
            ev.add("Merged", bwd_parents, "kld_backward")

        results.append(ev)
    return results


@dataclass(frozen=True)
class EpochPairOverlap:
    earlier_epoch: int
    later_epoch: int
    bhd_edge_count: int
    kld_edge_count: int
    shared_count: int

    @property
    def bhd_normalized(self) -> float:
        return self.shared_count / self.bhd_edge_count if self.bhd_edge_count else 0.0

    @property
    def kld_normalized(self) -> float:
        return self.shared_count / self.kld_edge_count if self.kld_edge_count else 0.0

    def to_jsonable(self) -> dict:
        return {
            "earlier_epoch": self.earlier_epoch,
            "later_epoch": self.later_epoch,
            "bhd_edge_count": self.bhd_edge_count,
            "kld_edge_count": self.kld_edge_count,
            "shared_count": self.shared_count,
            "bhd_normalized": self.bhd_normalized,
            "kld_normalized": self.kld_normalized,
        }


@dataclass(frozen=True)
class OverlapReport:
    pairs: tuple[EpochPairOverlap, ...]

    def to_jsonable(self) -> list[dict]:
        return [p.to_jsonable() for p in self.pairs]


def overlap_statistics(bhd: TemporalGraph, kld: TemporalGraph) -> OverlapReport:
    """How many surviving connections the two graphs have in common.

    Counted per adjacent-epoch pair on (from, to) identity and normalized
    by each graph's own surviving edge count, so topic-count drift across
    time does not skew the series.
    """
    _check_graphs(bhd, kld)
    epochs = sorted({n.epoch for n in bhd.nodes})

    def per_pair(graph: TemporalGraph) -> dict[int, set]:
        by_pair: dict[int, set] = {t: set() for t in epochs[:-1]}
        for e in graph.surviving_edges():
            by_pair[e.src.epoch].add((e.src, e.dst))
        return by_pair

    bhd_pairs = per_pair(bhd)
    kld_pairs = per_pair(kld)
    out = []
    for t in epochs[:-1]:
        shared = bhd_pairs[t] & kld_pairs[t]
        out.append(
            EpochPairOverlap(
                earlier_epoch=t,
                later_epoch=t + 1,
                bhd_edge_count=len(bhd_pairs[t]),
                kld_edge_count=len(kld_pairs[t]),
                shared_count=len(shared),
            )
        )
    return OverlapReport(pairs=tuple(out))
