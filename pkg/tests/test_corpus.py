import json
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topicflow.corpus import (
    EpochSpec,
    RawDocument,
    load_corpus,
    partition_epochs,
)
from topicflow.errors import (
    DuplicateIdError,
    EmptyCorpusError,
    InvalidSpecError,
    IoError,
    ParseError,
)


def write_jsonl(path, records):
    with path.open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")


def doc(i, ts, body="some text"):
    return {"id": f"d{i}", "timestamp": ts, "body": body}


class TestLoadCorpus:
    def test_jsonl_roundtrip_sorted(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_jsonl(p, [doc(2, "2001-05-01"), doc(1, "2000-01-15"), doc(3, "2001-05-01")])
        docs = load_corpus(p, "jsonl")
        assert [d.id for d in docs] == ["d1", "d2", "d3"]
        assert docs[0].timestamp == date(2000, 1, 15)

    def test_duplicate_id_rejects_file(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_jsonl(p, [doc(1, "2000-01-01"), {"id": "d1", "timestamp": "2001-01-01", "body": "x"}])
        with pytest.raises(DuplicateIdError) as err:
            load_corpus(p, "jsonl")
        assert err.value.doc_id == "d1"

    def test_earliest_style_timestamp_accepted(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_jsonl(p, [doc(1, "1953-03-15")])
        assert load_corpus(p, "jsonl")[0].timestamp == date(1953, 3, 15)

    def test_timestamp_out_of_range(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_jsonl(p, [doc(1, "1799-12-31")])
        with pytest.raises(ParseError) as err:
            load_corpus(p, "jsonl")
        assert err.value.line == 1

    def test_malformed_line_reports_number(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "a", "timestamp": "2000-01-01", "body": "x"}\nnot json\n')
        with pytest.raises(ParseError) as err:
            load_corpus(p, "jsonl")
        assert err.value.line == 2

    def test_missing_keys(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_jsonl(p, [{"id": "a", "timestamp": "2000-01-01"}])
        with pytest.raises(ParseError):
            load_corpus(p, "jsonl")

    def test_empty_body_rejected(self, tmp_path):
        p = tmp_path / "c.jsonl"
        write_jsonl(p, [doc(1, "2000-01-01", body="   ")])
        with pytest.raises(ParseError):
            load_corpus(p, "jsonl")

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoError):
            load_corpus(tmp_path / "nope.jsonl", "jsonl")

    def test_csv(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text(
            'id,timestamp,title,body\n'
            'a,2000-01-01,Title A,"body, with comma"\n'
            'b,2000-02-01,,plain body\n'
        )
        docs = load_corpus(p, "csv")
        assert docs[0].title == "Title A"
        assert docs[0].body == "body, with comma"
        assert docs[1].title is None

    def test_csv_bad_header(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("identifier,when,title,body\n")
        with pytest.raises(ParseError) as err:
            load_corpus(p, "csv")
        assert err.value.line == 1

    def test_title_included_in_text(self):
        d = RawDocument(id="x", timestamp=date(2000, 1, 1), body="b", title="t")
        assert d.text == "t\nb"


def make_docs(year_counts: dict[int, int]) -> list[RawDocument]:
    docs = []
    for year, count in sorted(year_counts.items()):
        for i in range(count):
            docs.append(
                RawDocument(
                    id=f"{year}-{i}",
                    timestamp=date(year, 1 + (i % 12), 1 + (i % 28)),
                    body="text",
                )
            )
    return sorted(docs, key=lambda d: (d.timestamp, d.id))


class TestPartitionEpochs:
    def test_merge_rule_hand_case(self):
        # {2000: 5, 2001: 1, 2002: 5}, min 3 -> [2000..2002), [2002..2003)
        docs = make_docs({2000: 5, 2001: 1, 2002: 5})
        slices = partition_epochs(docs, EpochSpec(min_documents=3))
        assert len(slices) == 2
        assert slices[0].start == date(2000, 1, 1)
        assert slices[0].end == date(2002, 1, 1)
        assert slices[0].document_count == 6
        assert slices[1].start == date(2002, 1, 1)
        assert slices[1].end == date(2003, 1, 1)
        assert slices[1].document_count == 5
        assert [s.index for s in slices] == [0, 1]

    def test_span_1953_2016_at_most_64_slices(self):
        year_counts = {y: 2 for y in range(1953, 2017, 3)}
        year_counts[1953] = 1
        year_counts[2016] = 3
        docs = make_docs(year_counts)
        slices = partition_epochs(docs, EpochSpec(min_documents=1))
        assert len(slices) <= 64
        # every year with documents lands in exactly one slice
        assert sum(s.document_count for s in slices) == len(docs)

    def test_single_month_corpus_one_slice(self):
        docs = [
            RawDocument(id=f"d{i}", timestamp=date(2005, 6, 1 + i), body="x")
            for i in range(10)
        ]
        slices = partition_epochs(docs, EpochSpec(min_documents=1))
        assert len(slices) == 1
        assert slices[0].document_count == 10

    def test_sparse_head_merges_forward(self):
        docs = make_docs({2000: 1, 2001: 1, 2002: 9})
        slices = partition_epochs(docs, EpochSpec(min_documents=5))
        assert len(slices) == 1
        assert slices[0].start == date(2000, 1, 1)
        assert slices[0].document_count == 11

    def test_explicit_boundaries(self):
        docs = make_docs({2000: 3, 2004: 3})
        spec = EpochSpec(
            mode="explicit-boundaries",
            boundaries=(date(2000, 1, 1), date(2003, 1, 1), date(2005, 1, 1)),
            min_documents=1,
        )
        slices = partition_epochs(docs, spec)
        assert [s.document_count for s in slices] == [3, 3]

    def test_explicit_boundaries_must_cover(self):
        docs = make_docs({2000: 3, 2010: 3})
        spec = EpochSpec(
            mode="explicit-boundaries",
            boundaries=(date(2000, 1, 1), date(2003, 1, 1)),
            min_documents=1,
        )
        with pytest.raises(InvalidSpecError):
            partition_epochs(docs, spec)

    def test_empty_corpus(self):
        with pytest.raises(EmptyCorpusError):
            partition_epochs([], EpochSpec())

    def test_invalid_spec(self):
        docs = make_docs({2000: 3})
        with pytest.raises(InvalidSpecError):
            partition_epochs(docs, EpochSpec(length_months=0))
        with pytest.raises(InvalidSpecError):
            partition_epochs(docs, EpochSpec(min_documents=0))
        with pytest.raises(InvalidSpecError):
            partition_epochs(
                docs,
                EpochSpec(
                    mode="explicit-boundaries",
                    boundaries=(date(2001, 1, 1), date(2000, 1, 1)),
                ),
            )

    def test_determinism(self):
        docs = make_docs({2000: 7, 2003: 2, 2004: 9})
        a = partition_epochs(docs, EpochSpec(min_documents=4))
        b = partition_epochs(docs, EpochSpec(min_documents=4))
        assert a == b

    @given(
        st.lists(
            st.dates(min_value=date(1990, 1, 1), max_value=date(2020, 12, 31)),
            min_size=1,
            max_size=80,
        ),
        st.integers(min_value=1, max_value=60),
        st.integers(min_value=1, max_value=10),
    )
    @settings(max_examples=60, deadline=None)
    def test_tiling_and_conservation(self, dates, length_months, min_docs):
        docs = sorted(
            (RawDocument(id=f"d{i}", timestamp=ts, body="x") for i, ts in enumerate(dates)),
            key=lambda d: (d.timestamp, d.id),
        )
        slices = partition_epochs(docs, EpochSpec(length_months=length_months, min_documents=min_docs))
        # conservation: every document in exactly one slice
        all_ids = [i for s in slices for i in s.document_ids]
        assert sorted(all_ids) == sorted(d.id for d in docs)
        # tiling: contiguous, disjoint, covering all timestamps
        assert slices[0].start <= docs[0].timestamp
        assert slices[-1].end > docs[-1].timestamp
        for a, b in zip(slices, slices[1:]):
            assert a.end == b.start
        # indices consecutive from zero
        assert [s.index for s in slices] == list(range(len(slices)))
        # membership respects [start, end)
        by_id = {d.id: d for d in docs}
        for s in slices:
            for doc_id in s.document_ids:
                assert s.start <= by_id[doc_id].timestamp < s.end
