"""Regenerate tests/golden from the bundled mini-corpus.

Run after an intentional change to ranking, merging or rendering, then
review the diff before committing:

    python3 scripts/make_goldens.py
"""

from __future__ import annotations

from pathlib import Path

from procrec.cli import bundled
from procrec.context import load_context_file, load_target
from procrec.corpus import AbstractionDictionary, load_store, normalize_keys
from procrec.pca import rank_target
from procrec.recommend import extracted_process, recommend
from procrec.render import render_dot

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def processes():
    store = normalize_keys(
        load_store(bundled("mini_elements.jsonl")),
        AbstractionDictionary.load(bundled("mini_dictionary.json")),
    )
    matrix = load_context_file(bundled("mini_contexts.csv"))
    out = {}
    for name, target_file in (
        ("case_study", "target_case_study.json"),
        ("slow_down_bull", "target_slow_down_bull.json"),
    ):
        _, ranking = rank_target(matrix, load_target(bundled(target_file)), k=5)
        out[name] = (recommend(store, ranking), None)
    out["prune_extracted"] = (extracted_process(store, "Prune"), "Extracted process: Prune")
    return out


def main() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, (process, title) in processes().items():
        if title is None:
            (GOLDEN / f"process_{name}.json").write_text(process.dumps(), newline="")
        (GOLDEN / f"{name}.dot").write_text(render_dot(process, title=title), newline="")
        print(f"{name}: {len(process.elements)} elements")


if __name__ == "__main__":
    main()
