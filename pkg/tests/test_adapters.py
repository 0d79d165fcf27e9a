import copy
import json

import pytest
from hypothesis import given, strategies as st

from docmap.adapters import (
    EngineKind,
    EngineRegistry,
    LocalEngineAdapter,
    ReplayFileAdapter,
)
from docmap.errors import AdapterFormatError, NoSuchEngineError
from docmap.indexing import build_index, local_search, tokenize

from conftest import make_doc


def write_replay(path, entries):
    lines = [json.dumps(entry) for entry in entries]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def replay_entry(rank, doc_id=None, score=None, title=None, body=None):
    return {
        "rank": rank,
        "score": 1.0 / rank if score is None else score,
        "id": doc_id or f"r{rank}",
        "title": title or f"replay title {rank}",
        "body": body or f"replay body {rank}",
    }


@pytest.fixture
def registry(analysis, tmp_path):
    index = build_index([make_doc("d1", "cat dog"), make_doc("d2", "dog bird")], analysis)
    replay = write_replay(tmp_path / "canned.jsonl", [replay_entry(i) for i in range(1, 6)])
    return EngineRegistry(
        [
            LocalEngineAdapter("local", "Local corpus", index),
            ReplayFileAdapter("web", "Canned web results", replay),
        ]
    )


class TestListEngines:
    def test_descriptors_in_config_order(self, registry):
        descriptors = registry.list_engines()
        assert [d.engine_id for d in descriptors] == ["local", "web"]
        assert descriptors[0].kind is EngineKind.LOCAL
        assert descriptors[1].kind is EngineKind.REPLAY

    def test_empty_registry(self):
        assert EngineRegistry().list_engines() == []

    def test_duplicate_engine_ids_rejected(self, registry):
        index = build_index([make_doc("d9", "owl")], None)
        with pytest.raises(ValueError):
            registry.register(LocalEngineAdapter("local", "Another", index))


class TestExecuteQuery:
    def test_replay_passthrough_in_file_order(self, registry):
        result = registry.execute_query("web", "anything", 100)
        assert result.doc_ids() == ("r1", "r2", "r3", "r4", "r5")
        assert [e.score for e in result.entries] == [1.0, 0.5, 1 / 3, 0.25, 0.2]
        assert [e.original_rank for e in result.entries] == [1, 2, 3, 4, 5]

    def test_replay_truncates_to_k(self, registry):
        result = registry.execute_query("web", "anything", 2)
        assert result.doc_ids() == ("r1", "r2")

    def test_unknown_engine(self, registry):
        with pytest.raises(NoSuchEngineError) as err:
            registry.execute_query("nope", "cat", 10)
        assert err.value.code == "no-such-engine"

    def test_local_adapter_matches_local_search(self, analysis):
        docs = [
            make_doc("d1", "cat dog cat"),
            make_doc("d2", "dog bird"),
            make_doc("d3", "cat bird bird"),
        ]
        index = build_index(docs, analysis)
        registry = EngineRegistry([LocalEngineAdapter("local", "Local", index)])
        via_adapter = registry.execute_query("local", "cat dog", 10)
        direct = local_search(index, tokenize("cat dog", analysis), 10)
        assert via_adapter.doc_ids() == direct.doc_ids()
        assert [e.score for e in via_adapter.entries] == [e.score for e in direct.entries]

    def test_k_validated(self, registry):
        with pytest.raises(ValueError):
            registry.execute_query("web", "cat", 0)

    def test_execute_does_not_mutate_index(self, analysis):
        index = build_index([make_doc("d1", "cat dog")], analysis)
        registry = EngineRegistry([LocalEngineAdapter("local", "Local", index)])
        before = copy.deepcopy((index.postings, index.doc_vectors))
        registry.execute_query("local", "cat", 5)
        assert (index.postings, index.doc_vectors) == before


class TestReplayFormatErrors:
    def test_invalid_json_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(json.dumps(replay_entry(1)) + "\n{oops\n", encoding="utf-8")
        adapter = ReplayFileAdapter("web", "Web", path)
        with pytest.raises(AdapterFormatError, match=r"bad\.jsonl:2") as err:
            adapter.run("q", 10)
        assert err.value.code == "adapter-format"

    def test_missing_body_rejected(self, tmp_path):
        entry = replay_entry(1)
        del entry["body"]
        path = write_replay(tmp_path / "nobody.jsonl", [entry])
        with pytest.raises(AdapterFormatError, match="nobody.jsonl:1"):
            ReplayFileAdapter("web", "Web", path).run("q", 10)

    def test_empty_body_rejected(self, tmp_path):
        path = write_replay(tmp_path / "empty.jsonl", [replay_entry(1, body="x")])
        entry = replay_entry(1)
        entry["body"] = ""
        path = write_replay(tmp_path / "empty.jsonl", [entry])
        with pytest.raises(AdapterFormatError, match="no full body"):
            ReplayFileAdapter("web", "Web", path).run("q", 10)

    def test_rank_gap_rejected(self, tmp_path):
        path = write_replay(
            tmp_path / "gap.jsonl", [replay_entry(1), replay_entry(3, doc_id="r3")]
        )
        with pytest.raises(AdapterFormatError, match="gap.jsonl:2"):
            ReplayFileAdapter("web", "Web", path).run("q", 10)

    def test_duplicate_ids_rejected(self, tmp_path):
        path = write_replay(
            tmp_path / "dup.jsonl",
            [replay_entry(1, doc_id="same"), replay_entry(2, doc_id="same")],
        )
        with pytest.raises(AdapterFormatError, match="dup.jsonl:2"):
            ReplayFileAdapter("web", "Web", path).run("q", 10)

    def test_negative_score_rejected(self, tmp_path):
        path = write_replay(tmp_path / "neg.jsonl", [replay_entry(1, score=-0.5)])
        with pytest.raises(AdapterFormatError, match="negative"):
            ReplayFileAdapter("web", "Web", path).run("q", 10)

    def test_missing_file(self, tmp_path):
        adapter = ReplayFileAdapter("web", "Web", tmp_path / "absent.jsonl")
        with pytest.raises(AdapterFormatError):
            adapter.run("q", 10)


replay_files = st.lists(
    st.tuples(
        st.floats(min_value=0.0, max_value=100.0, allow_nan=False),
        st.text(alphabet="abcdef", min_size=1, max_size=6),
        st.text(alphabet="abcdef ", min_size=1, max_size=12).filter(str.strip),
    ),
    min_size=0,
    max_size=12,
)


class TestNormalizationTotality:
    @given(rows=replay_files, k=st.integers(min_value=1, max_value=20))
    def test_well_formed_files_always_normalize(self, rows, k, tmp_path_factory):
        tmp = tmp_path_factory.mktemp("replay")
        entries = [
            replay_entry(rank, doc_id=f"doc{rank}", score=score, title=title, body=body)
            for rank, (score, title, body) in enumerate(rows, start=1)
        ]
        path = write_replay(tmp / "gen.jsonl", entries) if entries else tmp / "gen.jsonl"
        if not entries:
            path.write_text("", encoding="utf-8")
        result = ReplayFileAdapter("web", "Web", path).run("q", k)

        assert len(result) <= k
        assert [e.original_rank for e in result.entries] == list(range(1, len(result) + 1))
        ids = result.doc_ids()
        assert len(set(ids)) == len(ids)
        assert all(e.score >= 0 for e in result.entries)
        expected = [f"doc{i}" for i in range(1, min(k, len(entries)) + 1)]
        assert list(ids) == expected
