import json
import sys
from pathlib import Path

import pytest

from procrec.cli import bundled
from procrec.context import ContextVector, variable_ids
from procrec.corpus import ElementRecord, ElementStore

sys.path.insert(0, str(Path(__file__).parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "scripts"))

GOLDEN = Path(__file__).parent / "golden"

# A record in the published element format (single postmortem quote).
LISTING_RECORD = {
    "game": "Slow Down, Bull",
    "phase": "activities",
    "element": "exploration phase",
    "desc": (
        "We were able to iterate through a ton of different experiments, many of which were "
        "discarded failures, but which paved the path for the strongest mechanics in the game"
    ),
    "prob": False,
}

SLOW_DOWN_BULL_TRUE = (
    "v01 v02 v06 v08 v09 v13 v19 v22 v24 v27 v28 v29 v33 v39 v42 v46 v57 v59".split()
)
CASE_STUDY_TRUE = (
    "v01 v02 v03 v04 v05 v07 v11 v12 v13 v20 v23 v27 v30 v33 v39 v42 v46 v55 v56 v59".split()
)


def jsonl(*records) -> bytes:
    return "".join(json.dumps(r) + "\n" for r in records).encode()


def rec(game, key, phase="activities", subphase=None, prob=False, desc=None):
    return ElementRecord(game, phase, key, desc or f"{game} on {key}", prob, subphase)


@pytest.fixture
def ids():
    return variable_ids()


@pytest.fixture
def slow_down_bull(ids):
    return ContextVector.from_true_variables("Slow Down, Bull", SLOW_DOWN_BULL_TRUE, ids)


@pytest.fixture
def case_study(ids):
    return ContextVector.from_true_variables("Case study project", CASE_STUDY_TRUE, ids)


@pytest.fixture
def toy_store():
    """target g1={a,b}; g2={b,c}; g3={c,d}; g4 contributes e to the universe."""
    return ElementStore([
        rec("g1", "a"), rec("g1", "b"),
        rec("g2", "b"), rec("g2", "c"),
        rec("g3", "c"), rec("g3", "d"),
        rec("g4", "e"),
    ])


@pytest.fixture
def bundled_paths():
    return {
        "store": bundled("mini_elements.jsonl"),
        "dict": bundled("mini_dictionary.json"),
        "contexts": bundled("mini_contexts.csv"),
        "target_sdb": bundled("target_slow_down_bull.json"),
        "target_case": bundled("target_case_study.json"),
    }


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
