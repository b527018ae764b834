import random
import re

import pytest

from conftest import GOLDEN, rec
from procrec.corpus import ElementStore
from procrec.pca import SimilarityRanking
from procrec.recommend import RecommendedProcess, recommend
from procrec.render import RenderError, check_dot, quote, render_dot, slug

import make_goldens  # scripts/ is on sys.path via conftest


def ranking(*games):
    return SimilarityRanking("Target", tuple((g, float(i)) for i, g in enumerate(games)))


def process_of(*records, games=None):
    store = ElementStore(list(records))
    return recommend(store, ranking(*(games or sorted(store.games))))


def node_lines(dot):
    ids = re.findall(r"^\s+(\w+__\w+) \[label=", dot, flags=re.M)
    return [i for i in ids if not re.search(r"__q\d+$", i)]


def test_single_preproduction_element():
    dot = render_dot(process_of(rec("A", "prototyping", subphase="preproduction")))
    assert check_dot(dot) == []
    block = dot.split("subgraph cluster_preproduction {")[1].split("}")[0]
    assert 'preproduction__prototyping [label="prototyping", class="normal"' in block
    assert "cluster_production" not in dot
    assert "start -> lane_preproduction -> end" in dot


def test_problematic_is_red():
    dot = render_dot(process_of(rec("A", "crunch time", subphase="production", prob=True)))
    line = next(ln for ln in dot.splitlines() if ln.strip().startswith("production__crunch_time ["))
    assert 'class="problematic"' in line and "#f4a6a6" in line


def test_unordered_activity_marked():
    dot = render_dot(process_of(rec("A", "testing")))
    assert 'unordered__testing [label="testing ??"' in dot
    assert "subgraph cluster_unordered" in dot


def test_team_and_characteristics_frames():
    dot = render_dot(process_of(rec("A", "small team", phase="team"), rec("A", "scope", phase="characteristics")))
    assert "subgraph cluster_team" in dot and "subgraph cluster_characteristics" in dot
    assert 'team__small_team [label="small team"' in dot
    assert "start -> end" in dot


def test_one_quote_per_source():
    p = process_of(
        rec("A", "prototyping", subphase="preproduction"),
        rec("B", "prototyping", subphase="preproduction"),
        rec("B", "testing", subphase="production"),
    )
    dot = render_dot(p)
    assert len(node_lines(dot)) == 2
    quotes = re.findall(r"^\s+(\w+__q\d+) \[", dot, flags=re.M)
    assert quotes == ["preproduction__prototyping__q1", "preproduction__prototyping__q2", "production__testing__q1"]
    assert dot.count("arrowhead=none") == 3


def test_gold_node():
    dot = render_dot(process_of(rec("A", "testing", subphase="postproduction")), gold=True)
    assert "subgraph cluster_production" in dot
    assert "gold [" in dot.split("subgraph cluster_production")[1].split("}")[0]
    assert "lane_production -> lane_postproduction" in dot


def test_colliding_slugs_get_suffix():
    dot = render_dot(process_of(rec("A", "play-testing", phase="team"), rec("A", "play testing", phase="team")))
    ids = re.findall(r"^\s+(team__\w+) \[label", dot, flags=re.M)
    assert sorted(i for i in ids if "__q" not in i) == ["team__play_testing", "team__play_testing_2"]


def test_quotes_escaped():
    desc = 'He said "ship it"\nand we did \\o/'
    dot = render_dot(process_of(rec("A", "ship", phase="team", desc=desc)))
    assert check_dot(dot) == []
    assert quote(desc) in dot


def test_slug():
    assert slug("Slow Down, Bull (new project)") == "slow_down_bull_new_project"
    assert slug("!!!") == "x"


def test_empty_process_rejected():
    with pytest.raises(RenderError):
        render_dot(RecommendedProcess("t", (), ()))


def test_check_dot_reports_problems():
    assert check_dot('digraph g { a [label="x"]; }') == []
    assert check_dot("digraph g { a [label=x; }")
    assert check_dot('digraph g { a [label="x]; }')
    assert check_dot("graph_without_header")
    assert check_dot('digraph g {\n  // stray " } in a comment\n}') == []


# -- fixtures and goldens ----------------------------------------------------------

@pytest.fixture(scope="module")
def fixture_processes():
    return make_goldens.processes()


@pytest.mark.parametrize("name", ["case_study", "slow_down_bull", "prune_extracted"])
def test_golden_dot(fixture_processes, name):
    process, title = fixture_processes[name]
    dot = render_dot(process, title=title)
    assert dot == render_dot(process, title=title)
    assert dot == (GOLDEN / f"{name}.dot").read_text()
    assert check_dot(dot) == []
    n_quotes = sum(len(e.sources) for e in process.elements)
    assert len(re.findall(r"^\s+\w+__q\d+ \[", dot, flags=re.M)) == n_quotes


@pytest.mark.parametrize("name", ["case_study", "slow_down_bull", "prune_extracted"])
def test_golden_dot_parses(fixture_processes, name):
    pydot = pytest.importorskip("pydot")
    process, title = fixture_processes[name]
    (graph,) = pydot.graph_from_dot_data(render_dot(process, title=title))
    names = {s.get_name() for s in graph.get_subgraphs()}
    assert names <= {
        "cluster_preproduction", "cluster_production", "cluster_postproduction",
        "cluster_unordered", "cluster_team", "cluster_characteristics",
    }


def test_render_ignores_store_row_order(bundled_paths):
    from procrec.corpus import load_store

    store = load_store(bundled_paths["store"])
    r = ranking("Prune", "Ori", "Rollers")
    base = render_dot(recommend(store, r))
    rows = list(store.records)
    rng = random.Random(5)
    for _ in range(5):
        rng.shuffle(rows)
        assert render_dot(recommend(ElementStore(rows), r)) == base
