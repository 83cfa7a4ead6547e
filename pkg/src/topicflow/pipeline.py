"""End-to-end assembly: corpus in, analysis bundle out."""

from __future__ import annotations

from typing import Callable, Sequence

from .bundle import DEFAULT_ZETAS, AnalysisBundle
from .corpus import EpochSpec, RawDocument, partition_epochs
from .hdp import HdpConfig, fit_corpus
from .preprocess import (
    BagOfWords,
    LemmaLexicon,
    Vocabulary,
    build_vocabulary,
    tokenize,
    vectorize,
)

Progress = Callable[[str], None]


def _noop(_: str) -> None:
    pass


def config_snapshot(
    epoch_spec: EpochSpec,
    energy_fraction: float,
    stopwords: frozenset[str] | set[str],
    lexicon: LemmaLexicon,
    hdp_config: HdpConfig,
    zetas: dict[str, float],
) -> dict:
    """Self-contained record of every analysis input except the corpus.

    The stop-word list and lemma table are embedded (not referenced by
    path) so queries against a reloaded bundle use the exact pipeline the
    analysis ran with.
    """
    return {
        "epochs": {
            "mode": epoch_spec.mode,
            "length_months": epoch_spec.length_months,
            "boundaries": [b.isoformat() for b in epoch_spec.boundaries]
            if epoch_spec.boundaries
            else None,
            "min_documents": epoch_spec.min_documents,
        },
        "preprocess": {
            "energy_fraction": energy_fraction,
            "stopwords": sorted(stopwords),
            "lexicon": dict(sorted(lexicon.as_dict().items())),
        },
        "hdp": hdp_config.to_jsonable(),
        "pruning": dict(zetas),
    }


def run_analysis(
    docs: Sequence[RawDocument],
    epoch_spec: EpochSpec,
    stopwords: frozenset[str] | set[str],
    lexicon: LemmaLexicon,
    energy_fraction: float,
    hdp_config: HdpConfig,
    zetas: dict[str, float] | None = None,
    jobs: int = 1,
    progress: Progress = _noop,
) -> AnalysisBundle:
    """Run the full pipeline on an already-loaded corpus."""
    zetas = {**DEFAULT_ZETAS, **(zetas or {})}

    progress(f"partitioning {len(docs)} documents into epochs")
    slices = partition_epochs(list(docs), epoch_spec)
    progress(f"{len(slices)} epochs: " + ", ".join(
        f"[{s.start}..{s.end}) n={s.document_count}" for s in slices
    ))

    progress("tokenizing and lemmatizing")
    lemmatized: dict[str, list[str]] = {
        d.id: [lexicon.lemma(t) for t in tokenize(d.text)] for d in docs
    }

    vocab: Vocabulary = build_vocabulary(
        list(lemmatized.values()), stopwords, energy_fraction
    )
    progress(f"vocabulary: {len(vocab)} terms at energy {energy_fraction}")

    epoch_bags: list[tuple] = []
    empty = 0
    for s in slices:
        bags: list[BagOfWords] = []
        for doc_id in s.document_ids:
            bag = vectorize(lemmatized[doc_id], lexicon, stopwords, vocab, doc_id=doc_id)
            empty += bag.empty
            bags.append(bag)
        epoch_bags.append((s, bags))
    if empty:
        progress(f"warning: {empty} documents vectorized to empty bags")

    progress(
        f"fitting {len(slices)} epoch models "
        f"({hdp_config.iterations} sweeps each, seed {hdp_config.seed})"
    )
    models = fit_corpus(epoch_bags, len(vocab), hdp_config, jobs=jobs)
    for m in models:
        progress(f"  epoch {m.epoch}: {len(m.topics)} topics")

    progress("building and pruning relatedness graphs")
    snapshot = config_snapshot(
        epoch_spec, energy_fraction, stopwords, lexicon, hdp_config, zetas
    )
    bundle = AnalysisBundle.build(vocab, slices, models, snapshot, zetas)
    progress(f"classified events; content hash {bundle.content_hash[:12]}")
    return bundle
