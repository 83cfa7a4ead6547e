"""Capture real API responses into frontend test fixtures.

Builds the three-epoch chain bundle used across the Python tests, serves
it through the app, and snapshots the responses the explorer consumes.
Run from the repository root:

    python scripts/make_frontend_fixtures.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "tests"))

from fastapi.testclient import TestClient
from synthcorpus import WORDS, chain_models

from topicflow.bundle import AnalysisBundle
from topicflow.corpus import EpochSpec
from topicflow.pipeline import config_snapshot
from topicflow.preprocess import LemmaLexicon, Vocabulary
from topicflow.service import create_app

OUT = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures"


def build_bundle() -> AnalysisBundle:
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


def snap(client, name: str, method: str, path: str, body=None):
    if method == "GET":
        r = client.get(path)
    else:
        r = client.post(path, json=body)
    payload = {
        "status": r.status_code,
        "revision": r.headers.get("X-Revision"),
        "body": r.json(),
    }
    (OUT / f"{name}.json").write_text(json.dumps(payload, indent=1, sort_keys=True))
    print(f"{name}: {method} {path} -> {r.status_code}")
    return payload


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    bundle = build_bundle()
    with TestClient(create_app(bundle)) as client:
        snap(client, "health", "GET", "/api/v1/health")
        snap(client, "epochs", "GET", "/api/v1/epochs")
        snap(client, "epoch0_topics", "GET", "/api/v1/epochs/0/topics")
        snap(client, "topic_0_0", "GET", "/api/v1/topics/0/0")
        snap(client, "wordcloud_0_0", "GET", "/api/v1/topics/0/0/wordcloud?n=20")
        snap(client, "trace_2_0_backward", "GET",
             "/api/v1/topics/2/0/trace?direction=backward&measure=bhattacharyya&depth=2")
        snap(client, "trace_0_0_forward", "GET",
             "/api/v1/topics/0/0/trace?direction=forward&measure=bhattacharyya&depth=2")
        snap(client, "graph_bhd_default", "GET", "/api/v1/graph?measure=bhattacharyya")
        snap(client, "events", "GET", "/api/v1/events")
        snap(client, "stats", "GET", "/api/v1/stats")
        snap(client, "search_ba", "GET", "/api/v1/search?q=ba&limit=10")
        snap(client, "search_oov", "GET", "/api/v1/search?q=qqqzzz")
        # reprune to zeta=0, then capture the fully-surviving graph
        snap(client, "reprune_zeta0", "POST", "/api/v1/reprune",
             {"measure": "bhattacharyya", "zeta": 0.0})
        snap(client, "graph_bhd_zeta0", "GET", "/api/v1/graph?measure=bhattacharyya")
        snap(client, "reprune_zeta09", "POST", "/api/v1/reprune",
             {"measure": "bhattacharyya", "zeta": 0.9})
        snap(client, "graph_bhd_zeta09", "GET", "/api/v1/graph?measure=bhattacharyya")


if __name__ == "__main__":
    main()
