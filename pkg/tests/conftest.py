import pytest

from docmap.indexing import AnalysisConfig, load_corpus, toy_corpus_path
from docmap.models import Document

# "untitled" is stopped out so tests can reason about body tokens alone.
TEST_STOPWORDS = frozenset({"and", "the", "a", "of", "untitled"})


@pytest.fixture
def analysis():
    return AnalysisConfig(stopwords=TEST_STOPWORDS, stemming=False)


def make_doc(doc_id: str, body: str, title: str = "untitled") -> Document:
    return Document(id=doc_id, title=title, body=body)


@pytest.fixture
def toy_corpus():
    return load_corpus(toy_corpus_path())
