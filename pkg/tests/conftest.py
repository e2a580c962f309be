from __future__ import annotations

import pytest

from relcorpus.model import Corpus

from helpers import TABLE5_HT, TABLE5_MT, TABLE8_HT, TABLE8_MT, corpus_from_counts


@pytest.fixture(scope="session")
def table5_candidate() -> Corpus:
    return corpus_from_counts("MT", TABLE5_MT, TABLE8_MT)


@pytest.fixture(scope="session")
def table5_reference() -> Corpus:
    return corpus_from_counts("HT", TABLE5_HT, TABLE8_HT)
