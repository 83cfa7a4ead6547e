"""A completed analysis as one persistable, queryable unit.

On disk a bundle is a directory::

    vocabulary.json
    epochs.json
    models/epoch-<t>.json
    graphs/<measure>.json
    events.json
    manifest.json        {format_version, content_hash, config}

The content hash covers every artifact file, so identical pipeline runs
produce identical hashes and any tampering is detected on load. The
revision hash covers only surviving edges and event labels: it changes
iff a re-prune actually changed something observable.
"""

from __future__ import annotations

import hashlib
import shutil
from dataclasses import dataclass, replace
from datetime import date
from pathlib import Path

from . import jsonutil
from .corpus import EpochSlice
from .errors import InvalidSpecError, IoError, UnknownNodeError
from .events import TopicEventSet, classify_events
from .hdp import EpochModel, Topic
from .preprocess import LemmaLexicon, Vocabulary
from .relatedness import MEASURES, TemporalGraph, TopicNode, build_graph, prune

FORMAT_VERSION = 1

DEFAULT_ZETAS = {m: 0.5 for m in MEASURES}


def _slice_to_jsonable(s: EpochSlice) -> dict:
    return {
        "index": s.index,
        "start": s.start.isoformat(),
        "end": s.end.isoformat(),
        "document_ids": list(s.document_ids),
    }


def _slice_from_jsonable(obj: dict) -> EpochSlice:
    return EpochSlice(
        index=int(obj["index"]),
        start=date.fromisoformat(obj["start"]),
        end=date.fromisoformat(obj["end"]),
        document_ids=tuple(obj["document_ids"]),
    )


@dataclass(frozen=True)
class AnalysisBundle:
    vocabulary: Vocabulary
    slices: tuple[EpochSlice, ...]
    models: tuple[EpochModel, ...]
    graphs: dict[str, TemporalGraph]
    events: tuple[TopicEventSet, ...]
    config: dict

    @classmethod
    def build(
        cls,
        vocabulary: Vocabulary,
        slices: list[EpochSlice],
        models: list[EpochModel],
        config: dict,
        zetas: dict[str, float] | None = None,
    ) -> "AnalysisBundle":
        """Derive graphs and events from fitted models and prune them."""
        zetas = {**DEFAULT_ZETAS, **(zetas or {})}
        graphs = {
            m: prune(build_graph(models, m), zetas[m]) for m in MEASURES
        }
        events = classify_events(
            graphs["bhattacharyya"], graphs["kld_forward"], graphs["kld_backward"]
        )
        return cls(
            vocabulary=vocabulary,
            slices=tuple(slices),
            models=tuple(models),
            graphs=graphs,
            events=tuple(events),
            config=config,
        )

    # ----- lookups ---------------------------------------------------

    def get_topic(self, node: TopicNode) -> Topic:
        if 0 <= node.epoch < len(self.models):
            topic = self.models[node.epoch].topic_by_id(node.topic_id)
            if topic is not None:
                return topic
        raise UnknownNodeError(node.epoch, node.topic_id)

    def has_node(self, node: TopicNode) -> bool:
        try:
            self.get_topic(node)
            return True
        except UnknownNodeError:
            return False

    def lexicon(self) -> LemmaLexicon:
        table = self.config.get("preprocess", {}).get("lexicon", {})
        return LemmaLexicon(table)

    def events_for(self, node: TopicNode) -> TopicEventSet | None:
        for ev in self.events:
            if ev.node == node:
                return ev
        return None

    # ----- serialization ---------------------------------------------

    def _artifact_payloads(self) -> list[tuple[str, bytes]]:
        """(relative path, canonical bytes) for every artifact file, fixed order."""
        payloads = [
            ("vocabulary.json", jsonutil.dump_bytes(self.vocabulary.to_jsonable())),
            (
                "epochs.json",
                jsonutil.dump_bytes([_slice_to_jsonable(s) for s in self.slices]),
            ),
        ]
        for model in self.models:
            payloads.append(
                (f"models/epoch-{model.epoch}.json", jsonutil.dump_bytes(model.to_jsonable()))
            )
        for measure in MEASURES:
            payloads.append(
                (f"graphs/{measure}.json", jsonutil.dump_bytes(self.graphs[measure].to_jsonable()))
            )
        payloads.append(
            ("events.json", jsonutil.dump_bytes([e.to_jsonable() for e in self.events]))
        )
        return payloads

    @property
    def content_hash(self) -> str:
        digest = hashlib.sha256()
        for rel_path, payload in self._artifact_payloads():
            digest.update(rel_path.encode("utf-8"))
            digest.update(b"\x00")
            digest.update(payload)
            digest.update(b"\x00")
        return digest.hexdigest()

    @property
    def revision_hash(self) -> str:
        """Hash of surviving edges and event labels only."""
        surviving = {
            m: sorted(
                (e.src.epoch, e.src.topic_id, e.dst.epoch, e.dst.topic_id)
                for e in self.graphs[m].surviving_edges()
            )
            for m in MEASURES
        }
        labels = [
            [ev.node.epoch, ev.node.topic_id, sorted(ev.labels)] for ev in self.events
        ]
        blob = jsonutil.dump_bytes(
            {"surviving": {m: [list(t) for t in v] for m, v in surviving.items()}, "labels": labels}
        )
        return hashlib.sha256(blob).hexdigest()

    def save(self, path: str | Path) -> None:
        """Write the bundle atomically: temp directory, then rename."""
        path = Path(path)
        if path.exists():
            if not (path / "manifest.json").exists():
                raise IoError(f"{path} exists and is not a bundle; refusing to overwrite")
        tmp = path.parent / (path.name + ".tmp")
        if tmp.exists():
            shutil.rmtree(tmp)
        try:
            (tmp / "models").mkdir(parents=True)
            (tmp / "graphs").mkdir()
            for rel_path, payload in self._artifact_payloads():
                (tmp / rel_path).write_bytes(payload)
            manifest = {
                "format_version": FORMAT_VERSION,
                "content_hash": self.content_hash,
                "config": self.config,
            }
            (tmp / "manifest.json").write_bytes(jsonutil.dump_bytes(manifest))
        except BaseException:
            shutil.rmtree(tmp, ignore_errors=True)
            raise
        if path.exists():
            shutil.rmtree(path)
        tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path) -> "AnalysisBundle":
        path = Path(path)
        manifest_path = path / "manifest.json"
        if not manifest_path.is_file():
            raise IoError(f"not an analysis bundle (no manifest.json): {path}")
        manifest = jsonutil.loads(manifest_path.read_bytes())
        if manifest.get("format_version") != FORMAT_VERSION:
            raise InvalidSpecError(
                f"unsupported bundle format {manifest.get('format_version')!r}"
            )

        vocabulary = Vocabulary.from_jsonable(
            jsonutil.loads((path / "vocabulary.json").read_bytes())
        )
        slices = tuple(
            _slice_from_jsonable(o)
            for o in jsonutil.loads((path / "epochs.json").read_bytes())
        )
        models = tuple(
            EpochModel.from_jsonable(
                jsonutil.loads((path / "models" / f"epoch-{i}.json").read_bytes())
            )
            for i in range(len(slices))
        )
        graphs = {
            m: TemporalGraph.from_jsonable(
                jsonutil.loads((path / "graphs" / f"{m}.json").read_bytes())
            )
            for m in MEASURES
        }
        events = tuple(
            TopicEventSet.from_jsonable(o)
            for o in jsonutil.loads((path / "events.json").read_bytes())
        )
        bundle = cls(
            vocabulary=vocabulary,
            slices=slices,
            models=models,
            graphs=graphs,
            events=events,
            config=manifest["config"],
        )
        if bundle.content_hash != manifest["content_hash"]:
            raise InvalidSpecError(
                f"bundle content hash mismatch in {path}: "
                "files were modified after the analysis was written"
            )
        for graph in graphs.values():
            for node in graph.nodes:
                bundle.get_topic(node)  # raises UnknownNodeError on dangling refs
        return bundle

    def reprune(self, measure: str, zeta: float) -> "AnalysisBundle":
        """New bundle with one graph re-pruned and events re-derived."""
        if measure not in MEASURES:
            raise InvalidSpecError(f"unknown measure {measure!r}")
        graphs = dict(self.graphs)
        graphs[measure] = prune(graphs[measure], zeta)
        events = classify_events(
            graphs["bhattacharyya"], graphs["kld_forward"], graphs["kld_backward"]
        )
        return replace(self, graphs=graphs, events=tuple(events))
