import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ocrpost import candidates, ingest, lexicon, ngram

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


@pytest.fixture(scope="session")
def fix_lexicon() -> lexicon.Lexicon:
    return lexicon.load([fixture_path("lexicon_fixture.txt")])


@pytest.fixture(scope="session")
def fix_model() -> ngram.NGramModel:
    return ngram.train_small(fixture_path("lm_corpus.txt"), order=2, discount=0.75)


@pytest.fixture(scope="session")
def fix_cmap() -> candidates.ConfusionMap:
    return candidates.ConfusionMap()


@pytest.fixture(scope="session")
def golden_doc() -> ingest.RawDocument:
    with open(fixture_path("scan_lines.txt"), encoding="utf-8") as fh:
        return ingest.RawDocument(pages=(fh.read().rstrip("\n"),), source="fixture")
