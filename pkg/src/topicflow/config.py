"""TOML run configuration for the command-line pipeline."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .corpus import EpochSpec
from .errors import InvalidSpecError, IoError
from .hdp import HdpConfig
from .preprocess import LemmaLexicon, default_stopwords, load_stopwords
from .relatedness import MEASURES

DEFAULT_CONFIG_TOML = """\
# topicflow run configuration

[paths]
corpus = "corpus.jsonl"      # timestamped corpus file
format = "jsonl"             # jsonl | csv
output = "analysis"          # bundle directory to create
# stopwords = "stopwords.txt"  # optional; packaged default list if omitted
# lexicon = "lemmas.tsv"       # optional; no lemmatization if omitted

[epochs]
mode = "fixed-length"        # fixed-length | explicit-boundaries
length_months = 12
# boundaries = ["2000-01-01", "2005-01-01"]  # explicit-boundaries mode
min_documents = 20           # sparser epochs merge into their predecessor

[preprocess]
energy_fraction = 0.9        # vocabulary keeps terms covering this token share

[hdp]
gamma = 1.0                  # corpus-level concentration
alpha = 1.0                  # document-level concentration
eta = 0.01                   # symmetric Dirichlet over the vocabulary
iterations = 1000
burn_in = 500
seed = 42
min_topic_mass = 0.005       # dissolve topics below this token share
resample_concentrations = false

[pruning]                    # CDF operating point per relatedness measure
bhattacharyya = 0.5
kld_forward = 0.5
kld_backward = 0.5
"""


@dataclass
class RunConfig:
    corpus_path: Path
    output_path: Path
    corpus_format: str = "jsonl"
    stopwords_path: Path | None = None
    lexicon_path: Path | None = None
    epoch_spec: EpochSpec = field(default_factory=EpochSpec)
    energy_fraction: float = 0.9
    hdp: HdpConfig = field(default_factory=HdpConfig)
    zetas: dict[str, float] = field(default_factory=lambda: {m: 0.5 for m in MEASURES})

    def validate(self) -> None:
        if not self.corpus_path.is_file():
            raise IoError(f"corpus file not found: {self.corpus_path}")
        for label, p in (("stopwords", self.stopwords_path), ("lexicon", self.lexicon_path)):
            if p is not None and not p.is_file():
                raise IoError(f"{label} file not found: {p}")
        if self.corpus_format not in ("jsonl", "csv"):
            raise InvalidSpecError(f"unknown corpus format {self.corpus_format!r}")
        if not (0.0 < self.energy_fraction <= 1.0):
            raise InvalidSpecError("energy_fraction must be in (0, 1]")
        for measure, zeta in self.zetas.items():
            if measure not in MEASURES:
                raise InvalidSpecError(f"unknown pruning measure {measure!r}")
            if not (0.0 <= zeta <= 1.0):
                raise InvalidSpecError(f"zeta for {measure} must be in [0, 1]")
        self.epoch_spec.validate()
        self.hdp.validate()

    def load_stopwords(self) -> frozenset[str]:
        if self.stopwords_path is None:
            return default_stopwords()
        return load_stopwords(self.stopwords_path)

    def load_lexicon(self) -> LemmaLexicon:
        if self.lexicon_path is None:
            return LemmaLexicon()
        return LemmaLexicon.from_tsv(self.lexicon_path)


def _parse_epochs(section: dict) -> EpochSpec:
    boundaries = section.get("boundaries")
    if boundaries is not None:
        parsed = tuple(
            b if isinstance(b, date) else date.fromisoformat(str(b)) for b in boundaries
        )
    else:
        parsed = None
    return EpochSpec(
        mode=section.get("mode", "fixed-length"),
        length_months=int(section.get("length_months", 12)),
        boundaries=parsed,
        min_documents=int(section.get("min_documents", 20)),
    )


def load_run_config(path: str | Path) -> RunConfig:
    """Parse and structurally validate a TOML run configuration."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"config file not found: {path}")
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise InvalidSpecError(f"invalid TOML in {path}: {exc}") from None

    paths = raw.get("paths", {})
    if "corpus" not in paths or "output" not in paths:
        raise InvalidSpecError("config needs [paths] corpus and output entries")
    base = path.parent

    def resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    hdp_section = dict(raw.get("hdp", {}))
    known = set(HdpConfig().to_jsonable())
    unknown = set(hdp_section) - known
    if unknown:
        raise InvalidSpecError(f"unknown [hdp] keys: {sorted(unknown)}")

    zetas = {m: 0.5 for m in MEASURES}
    for measure, zeta in raw.get("pruning", {}).items():
        zetas[str(measure)] = float(zeta)

    preprocess = raw.get("preprocess", {})
    return RunConfig(
        corpus_path=resolve(paths["corpus"]),
        output_path=resolve(paths["output"]),
        corpus_format=paths.get("format", "jsonl"),
        stopwords_path=resolve(paths["stopwords"]) if "stopwords" in paths else None,
        lexicon_path=resolve(paths["lexicon"]) if "lexicon" in paths else None,
        epoch_spec=_parse_epochs(raw.get("epochs", {})),
        energy_fraction=float(preprocess.get("energy_fraction", 0.9)),
        hdp=HdpConfig(**hdp_section),
        zetas=zetas,
    )
