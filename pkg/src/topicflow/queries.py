"""User-facing questions over a completed analysis bundle.

All operations are read-only; exploring a different operating point means
building a new bundle revision, never mutating a shared one.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

from .bundle import AnalysisBundle
from .errors import (
    EmptyQueryError,
    InvalidSpecError,
    NoVocabularyMatchError,
    UnknownNodeError,
    UnprunedGraphError,
)
from .preprocess import tokenize
from .relatedness import MEASURES, TopicNode


@dataclass(frozen=True)
class TopicHit:
    node: TopicNode
    score: float
    matched_terms: tuple[str, ...]

    def to_jsonable(self) -> dict:
        return {
            "epoch": self.node.epoch,
            "topic_id": self.node.topic_id,
            "score": float(self.score),
            "matched_terms": list(self.matched_terms),
        }


def search_topics(bundle: AnalysisBundle, query: str, limit: int = 20) -> list[TopicHit]:
    """Rank topics by the probability mass they give the query lemmas.

    The query runs through the bundle's own pipeline (tokenize, then the
    stored lemma table); scores are additive over the query-token
    multiset, so a two-term query scores exactly the sum of its
    single-term queries. Stop-words never enter the vocabulary, so they
    count as out-of-vocabulary here.
    """
    if limit < 1:
        raise InvalidSpecError("limit must be >= 1")
    tokens = tokenize(query)
    if not tokens:
        raise EmptyQueryError("query contains no usable tokens")
    lexicon = bundle.lexicon()
    lemmas = [lexicon.lemma(t) for t in tokens]
    indices = [bundle.vocabulary.index_of[l] for l in lemmas if l in bundle.vocabulary]
    if not indices:
        raise NoVocabularyMatchError("no query term maps into the vocabulary")
    matched = tuple(sorted({l for l in lemmas if l in bundle.vocabulary}))

    hits = []
    for model in bundle.models:
        for topic in model.topics:
            score = 0.0
            for idx in indices:
                score += float(topic.term_dist[idx])
            if score > 0.0:
                hits.append(
                    TopicHit(
                        node=TopicNode(model.epoch, topic.id),
                        score=score,
                        matched_terms=matched,
                    )
                )
    hits.sort(key=lambda h: (-h.score, h.node.epoch, h.node.topic_id))
    return hits[:limit]


@dataclass(frozen=True)
class LineageDag:
    """Closure of surviving edges reachable from a root node."""

    root: TopicNode
    direction: str
    measure: str
    nodes: tuple[TopicNode, ...]
    edges: tuple[tuple[TopicNode, TopicNode], ...]

    def to_jsonable(self) -> dict:
        return {
            "root": self.root.to_jsonable(),
            "direction": self.direction,
            "measure": self.measure,
            "nodes": [n.to_jsonable() for n in self.nodes],
            "edges": [
                {"from": a.to_jsonable(), "to": b.to_jsonable()} for a, b in self.edges
            ],
        }


def trace(
    bundle: AnalysisBundle,
    node: TopicNode,
    direction: str = "backward",
    measure: str = "bhattacharyya",
    max_depth: int = 1_000_000,
) -> LineageDag:
    """Breadth-first lineage closure up to ``max_depth`` epochs from the root."""
    if direction not in ("backward", "forward"):
        raise InvalidSpecError(f"direction must be backward or forward, got {direction!r}")
    if measure not in MEASURES:
        raise InvalidSpecError(f"unknown measure {measure!r}")
    if max_depth < 0:
        raise InvalidSpecError("max_depth must be >= 0")
    if not bundle.has_node(node):
        raise UnknownNodeError(node.epoch, node.topic_id)
    graph = bundle.graphs[measure]
    if not graph.pruned:
        raise UnprunedGraphError(f"{measure} graph has not been pruned")

    adjacency: dict[TopicNode, list] = {}
    for e in graph.surviving_edges():
        key = e.dst if direction == "backward" else e.src
        adjacency.setdefault(key, []).append(e)

    seen = {node}
    edges: set[tuple[TopicNode, TopicNode]] = set()
    queue = deque([(node, 0)])
    while queue:
        current, depth = queue.popleft()
        if depth >= max_depth:
            continue
        for e in adjacency.get(current, []):
            neighbor = e.src if direction == "backward" else e.dst
            edges.add((e.src, e.dst))
            if neighbor not in seen:
                seen.add(neighbor)
                queue.append((neighbor, depth + 1))

    return LineageDag(
        root=node,
        direction=direction,
        measure=measure,
        nodes=tuple(sorted(seen)),
        edges=tuple(sorted(edges)),
    )


def word_cloud(bundle: AnalysisBundle, node: TopicNode, n: int) -> list[tuple[str, float]]:
    """Top-n terms of a topic by probability, ties broken lexicographically."""
    topic = bundle.get_topic(node)
    if not (1 <= n <= len(bundle.vocabulary)):
        raise InvalidSpecError(f"n must be in [1, {len(bundle.vocabulary)}], got {n}")
    terms = bundle.vocabulary.terms
    ranked = sorted(
        ((terms[i], float(w)) for i, w in enumerate(topic.term_dist)),
        key=lambda tw: (-tw[1], tw[0]),
    )
    return ranked[:n]


@dataclass(frozen=True)
class CorpusStats:
    per_epoch: tuple[dict, ...]
    surviving_edges: dict[str, tuple[dict, ...]]
    events_per_epoch: tuple[dict, ...]

    def to_jsonable(self) -> dict:
        return {
            "per_epoch": list(self.per_epoch),
            "surviving_edges": {m: list(v) for m, v in self.surviving_edges.items()},
            "events_per_epoch": list(self.events_per_epoch),
        }


def corpus_stats(bundle: AnalysisBundle) -> CorpusStats:
    """Document/token/topic counts, edge counts, and event tallies."""
    per_epoch = []
    for s, model in zip(bundle.slices, bundle.models):
        per_epoch.append(
            {
                "epoch": s.index,
                "start": s.start.isoformat(),
                "end": s.end.isoformat(),
                "documents": s.document_count,
                "tokens": sum(t.token_count for t in model.topics),
                "topics": len(model.topics),
            }
        )

    surviving: dict[str, tuple[dict, ...]] = {}
    for measure in MEASURES:
        graph = bundle.graphs[measure]
        counts: dict[int, int] = {s.index: 0 for s in bundle.slices[:-1]}
        for e in graph.surviving_edges():
            counts[e.src.epoch] += 1
        surviving[measure] = tuple(
            {"earlier_epoch": t, "later_epoch": t + 1, "surviving": c}
            for t, c in sorted(counts.items())
        )

    events_per_epoch = []
    for s in bundle.slices:
        tally: dict[str, int] = {}
        for ev in bundle.events:
            if ev.node.epoch == s.index:
                for label in ev.labels:
                    tally[label] = tally.get(label, 0) + 1
        events_per_epoch.append({"epoch": s.index, "counts": dict(sorted(tally.items()))})

    return CorpusStats(
        per_epoch=tuple(per_epoch),
        surviving_edges=surviving,
        events_per_epoch=tuple(events_per_epoch),
    )
