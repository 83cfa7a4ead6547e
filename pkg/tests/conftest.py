import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok, detail in ACCEPTANCE_RESULTS:
            status = "PASS" if ok else "FAIL"
            suffix = f" ({detail})" if detail else ""
            terminalreporter.write_line(f"ACCEPTANCE {name}: {status}{suffix}")

from synthcorpus import WORDS, chain_models  # noqa: E402

from topicflow.bundle import AnalysisBundle  # noqa: E402
from topicflow.corpus import EpochSpec  # noqa: E402
from topicflow.pipeline import config_snapshot  # noqa: E402
from topicflow.preprocess import LemmaLexicon, Vocabulary  # noqa: E402


@pytest.fixture(scope="session")
def chain_bundle() -> AnalysisBundle:
    """Three-epoch bundle whose single topic persists: an evolution chain.

    Vocabulary terms are the alphabetic pseudo-words, so search queries
    survive tokenization; "bas" -> "ba" exercises query lemmatization.
    """
    slices, models, cfg = chain_models(n_epochs=3, seed=5)
    vocab = Vocabulary(
        terms=tuple(WORDS[:45]),
        corpus_counts=tuple(45 - i for i in range(45)),
        energy_fraction=1.0,
    )
    snapshot = config_snapshot(
        EpochSpec(min_documents=1),
        1.0,
        frozenset(),
        LemmaLexicon({"bas": "ba"}),
        cfg,
        {m: 0.5 for m in ("bhattacharyya", "kld_forward", "kld_backward")},
    )
    return AnalysisBundle.build(vocab, slices, models, snapshot)
