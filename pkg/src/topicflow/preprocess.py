"""Text normalization: tokenization, soft lemmatization, vocabulary selection.

The vocabulary keeps the minimal most-frequent prefix of lemmas whose
cumulative count covers a configurable fraction of the total token mass
(stop-words excluded before counting).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyAfterFilteringError, InvalidSpecError, ParseError

_TOKEN_RE = re.compile(r"[a-z]+")


def tokenize(text: str) -> list[str]:
    """Lowercased alphabetic tokens; anything outside [a-z] separates.

    Unicode is NFKC-folded first; tokens shorter than 2 characters are
    dropped.
    """
    folded = unicodedata.normalize("NFKC", text).lower()
    return [t for t in _TOKEN_RE.findall(folded) if len(t) >= 2]


class LemmaLexicon:
    """Lowercase surface-form to lemma lookup table.

    Lemmas must be fixed points: if a lemma also appears as a key, it must
    map to itself, so lookup is idempotent. Lemmatization is "soft": a
    token absent from the table is returned unchanged, and no heuristic
    stemming is ever applied.
    """

    def __init__(self, surface_to_lemma: dict[str, str] | None = None):
        table = dict(surface_to_lemma or {})
        for surface, lemma in table.items():
            if surface != surface.lower():
                raise InvalidSpecError(f"lexicon key {surface!r} is not lowercase")
            target = table.get(lemma)
            if target is not None and target != lemma:
                raise InvalidSpecError(
                    f"lemma {lemma!r} is not a fixed point (maps to {target!r})"
                )
        self._table = table

    def __len__(self) -> int:
        return len(self._table)

    def lemma(self, token: str) -> str:
        return self._table.get(token, token)

    def as_dict(self) -> dict[str, str]:
        return dict(self._table)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "LemmaLexicon":
        """Read a two-column ``surface<TAB>lemma`` UTF-8 table."""
        table: dict[str, str] = {}
        with Path(path).open("r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError(line_no, f"expected 2 tab-separated columns, got {len(parts)}")
                table[parts[0].strip()] = parts[1].strip()
        return cls(table)


def lemmatize(token: str, lexicon: LemmaLexicon) -> str:
    return lexicon.lemma(token)


def load_stopwords(path: str | Path) -> frozenset[str]:
    """One lowercase word per line; ``#`` starts a comment."""
    words: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            word = line.split("#", 1)[0].strip()
            if word:
                words.add(word.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    from importlib.resources import files

    text = files("topicflow.data").joinpath("stopwords.txt").read_text("utf-8")
    words = {
        line.split("#", 1)[0].strip() for line in text.splitlines()
    }
    return frozenset(w for w in words if w)


@dataclass(frozen=True)
class Vocabulary:
    """Ordered term set selected by the cumulative-energy rule.

    Terms are sorted by descending corpus count (ties lexicographic); the
    kept prefix is the smallest one whose cumulative count reaches
    ``energy_fraction`` of the total non-stop-word token count.
    """

    terms: tuple[str, ...]
    corpus_counts: tuple[int, ...]
    energy_fraction: float
    index_of: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "index_of", {t: i for i, t in enumerate(self.terms)}
        )

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index_of

    def to_jsonable(self) -> dict:
        return {
            "energy_fraction": float(self.energy_fraction),
            "terms": [
                {"term": t, "count": c}
                for t, c in zip(self.terms, self.corpus_counts)
            ],
        }

    @classmethod
    def from_jsonable(cls, obj: dict) -> "Vocabulary":
        return cls(
            terms=tuple(e["term"] for e in obj["terms"]),
            corpus_counts=tuple(int(e["count"]) for e in obj["terms"]),
            energy_fraction=float(obj["energy_fraction"]),
        )


def build_vocabulary(
    docs: list[list[str]],
    stopwords: frozenset[str] | set[str],
    energy_fraction: float,
) -> Vocabulary:
    """Select the minimal descending-frequency prefix covering the energy bound.

    ``docs`` holds already-lemmatized token lists; stop-words are removed
    before counting so they never consume energy budget.
    """
    if not docs:
        raise EmptyAfterFilteringError("no documents supplied")
    if not (0.0 < energy_fraction <= 1.0):
        raise InvalidSpecError("energy_fraction must be in (0, 1]")

    counts: dict[str, int] = {}
    for doc in docs:
        for token in doc:
            if token not in stopwords:
                counts[token] = counts.get(token, 0) + 1
    if not counts:
        raise EmptyAfterFilteringError("all tokens were stop-words")

    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    total = sum(counts.values())
    target = energy_fraction * total

    cumulative = 0
    kept = 0
    for _, count in ranked:
        cumulative += count
        kept += 1
        if cumulative >= target:
            break

    return Vocabulary(
        terms=tuple(t for t, _ in ranked[:kept]),
        corpus_counts=tuple(c for _, c in ranked[:kept]),
        energy_fraction=energy_fraction,
    )


@dataclass(frozen=True)
class BagOfWords:
    """Sparse term-index counts for one document."""

    doc_id: str
    counts: dict[int, int]
    total: int

    @property
    def empty(self) -> bool:
        return self.total == 0


def vectorize(
    doc: list[str],
    lexicon: LemmaLexicon,
    stopwords: frozenset[str] | set[str],
    vocab: Vocabulary,
    doc_id: str = "",
) -> BagOfWords:
    """Lemmatize, stop-filter, and count a document over vocabulary indices.

    Out-of-vocabulary lemmas are dropped; a document may legitimately
    vectorize to an empty bag.
    """
    counts: dict[int, int] = {}
    total = 0
    for token in doc:
        lemma = lexicon.lemma(token)
        if lemma in stopwords:
            continue
        idx = vocab.index_of.get(lemma)
        if idx is None:
            continue
        counts[idx] = counts.get(idx, 0) + 1
        total += 1
    return BagOfWords(doc_id=doc_id, counts=counts, total=total)
