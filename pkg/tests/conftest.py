from __future__ import annotations

from pathlib import Path

import pytest

from wfsat.io import load_schema
from wfsat.oracle import oracle_decide

from randgen import corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def purchase_order():
    return load_schema(FIXTURES / "purchase_order.json")


@pytest.fixture(scope="session")
def purchase_order_restricted():
    return load_schema(FIXTURES / "purchase_order_restricted.json")


@pytest.fixture(scope="session")
def purchase_order_no_release():
    return load_schema(FIXTURES / "purchase_order_no_release.json")


@pytest.fixture(scope="session")
def small_corpus():
    """60 deterministic random schemas for module-level invariants."""
    return corpus(60, seed_base=10_000)


@pytest.fixture(scope="session")
def sweep_corpus():
    """The 200-schema corpus driving the oracle-equivalence acceptance sweep."""
    return corpus(200, seed_base=0)


@pytest.fixture(scope="session")
def sweep_oracle(sweep_corpus):
    """Brute-force reports for the sweep corpus, computed once per session."""
    return [oracle_decide(schema) for schema in sweep_corpus]
