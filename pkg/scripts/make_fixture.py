"""Regenerate the bundled mini-corpus under src/procrec/data/.

Contexts for the named projects are hand-authored around a few published
anchor contexts; the remaining projects are seeded random fillers so the
corpus has 55 projects. Quotes are synthetic placeholders, not postmortem
text.

    python scripts/make_fixture.py
"""

from __future__ import annotations

import csv
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "procrec" / "data"
IDS = [f"v{i:02d}" for i in range(1, 62)]


def vs(*spec: str) -> set[str]:
    """vs("v01-v05", "v07") -> {"v01", ..., "v05", "v07"}"""
    out = set()
    for item in spec:
        if "-" in item:
            a, b = (int(x[1:]) for x in item.split("-"))
            out |= {f"v{i:02d}" for i in range(a, b + 1)}
        else:
            out.add(item)
    return out


SLOW_DOWN_BULL = vs(
    "v01", "v02", "v06", "v08", "v09", "v13", "v19", "v22", "v24", "v27",
    "v28", "v29", "v33", "v39", "v42", "v46", "v57", "v59",
)
CASE_STUDY = vs(
    "v01-v05", "v07", "v11-v13", "v20", "v23", "v27", "v30", "v33", "v39",
    "v42", "v46", "v55", "v56", "v59",
)
PRUNE = vs(
    "v05", "v08", "v10", "v12", "v17", "v18", "v20", "v23", "v26", "v31",
    "v34", "v37", "v43", "v45", "v48", "v49", "v51", "v58",
)
OFFWORLD = vs(
    "v01", "v10", "v14", "v15", "v16", "v18", "v21", "v25", "v31", "v32",
    "v36", "v40", "v43", "v44", "v52", "v53", "v60", "v61",
)
NFL = vs(
    "v03", "v04", "v06", "v11", "v14", "v21", "v25", "v29", "v32", "v35",
    "v36", "v41", "v43", "v44", "v45", "v58", "v60", "v61",
)


def tweak(base: set[str], drop=(), add=()) -> set[str]:
    return (set(base) - set(drop)) | set(add)


NAMED = {
    "Slow Down, Bull": SLOW_DOWN_BULL,
    "Jetpack High": tweak(SLOW_DOWN_BULL, drop=["v06"], add=["v47"]),
    "Vanishing Point": tweak(SLOW_DOWN_BULL, drop=["v24"], add=["v47"]),
    "Catlateral Damage": tweak(SLOW_DOWN_BULL, drop=["v29"], add=["v30"]),
    "Ashes of the Singularity": tweak(CASE_STUDY, drop=["v05"], add=["v61"]),
    "Baldurs Gate Enhanced Edition": tweak(CASE_STUDY, drop=["v55", "v56"], add=["v54", "v35"]),
    "Natural Selection 2": tweak(CASE_STUDY, drop=["v56"], add=["v61", "v51"]),
    "Anomaly Warzone Earth": tweak(CASE_STUDY, drop=["v03"], add=["v49", "v50"]),
    "Aaaaa! -- A Reckless Disregard for Gravity": tweak(CASE_STUDY, drop=["v04", "v05"], add=["v51"]),
    "Prune": PRUNE,
    "Red Skies": tweak(PRUNE, drop=["v17"], add=["v18"]),
    "Out There": tweak(PRUNE, drop=["v51"], add=["v55"]),
    "INK": tweak(PRUNE, drop=["v49"], add=["v46"]),
    "Cave Dash": tweak(PRUNE, add=["v16"]),
    "Caseys Contraptions": tweak(PRUNE, drop=["v31"], add=["v29"]),
    "Offworld Trading Company": OFFWORLD,
    "Mini Metro": tweak(OFFWORLD, drop=["v21"], add=["v20"]),
    "Sunless Sea": tweak(OFFWORLD, drop=["v14"], add=["v30"]),
    "Race the Sun": tweak(OFFWORLD, drop=["v52"], add=["v51"]),
    "I Cant Escape: Darkness": tweak(OFFWORLD, drop=["v61"], add=["v53"]),
    "80 Days": tweak(OFFWORLD, drop=["v40"], add=["v42"]),
    "Zack Zero": tweak(OFFWORLD, drop=["v16"], add=["v44"]),
    "NFL Rush Heroes & Rivals": NFL,
    "Ori and the Blind Forest": tweak(NFL, drop=["v58"], add=["v52"]),
    "Rollers of the Realm": tweak(NFL, drop=["v35"], add=["v39"]),
}

# canonical key -> (phase, subphase)
PLACEMENT = {
    "test team": ("team", None),
    "small team": ("team", None),
    "general team details": ("team", None),
    "outsourcing": ("team", None),
    "horizontal development": ("characteristics", None),
    "development problems": ("characteristics", None),
    "development process details": ("characteristics", None),
    "engine and tools": ("characteristics", None),
    "infrastructure": ("characteristics", None),
    "project focus": ("characteristics", None),
    "scope": ("characteristics", None),
    "concept": ("activities", "preproduction"),
    "brainstorming features": ("activities", "preproduction"),
    "pitch": ("activities", "preproduction"),
    "prototyping": ("activities", "preproduction"),
    "exploration phase": ("activities", "preproduction"),
    "requirements and constraints": ("activities", "preproduction"),
    "planning documentation": ("activities", "preproduction"),
    "milestones planning": ("activities", "preproduction"),
    "vertical slice": ("activities", "preproduction"),
    "development iterations loop": ("activities", "production"),
    "in-house tools development": ("activities", "production"),
    "multi-player construction": ("activities", "production"),
    "polish and refinements": ("activities", "production"),
    "refactoring the development": ("activities", "production"),
    "testing": ("activities", "production"),
    "design tasks": ("activities", "production"),
    "professional feedback": ("activities", "production"),
    "users feedback": ("activities", "postproduction"),
    "retrospective meeting": ("activities", "postproduction"),
    "business tasks": ("activities", None),
    "crunch time": ("characteristics", None),
    "gold master": ("activities", "production"),
    "art production": ("activities", "production"),
    "level design": ("activities", "production"),
    "localization": ("activities", "postproduction"),
    "porting": ("activities", "postproduction"),
    "patching": ("activities", "postproduction"),
    "community management": ("activities", None),
    "crowdfunding campaign": ("activities", None),
    "audio production": ("activities", "production"),
    "distributed team": ("team", None),
    "contractors": ("team", None),
    "team turnover": ("team", None),
    "project duration": ("characteristics", None),
    "budget": ("characteristics", None),
    "feature creep": ("characteristics", None),
    "technical debt": ("characteristics", None),
}

# raw alias -> canonical key; used in the element file so normalization matters
ALIASES = {
    "local play testing": "testing",
    "beta testing": "testing",
    "early play testing": "testing",
    "initial prototyping": "prototyping",
    "paper prototyping": "prototyping",
    "crunch": "crunch time",
    "overtime": "crunch time",
    "milestone planning": "milestones planning",
    "polishing": "polish and refinements",
    "tools development": "in-house tools development",
}
ALIAS_OF = {}
for alias, canon in sorted(ALIASES.items()):
    ALIAS_OF.setdefault(canon, []).append(alias)

CASE_STUDY_KEYS = {
    "Ashes of the Singularity": [
        "test team", "engine and tools", "infrastructure", "scope",
        "development iterations loop", "in-house tools development",
        "multi-player construction", "testing", "concept", "business tasks",
    ],
    "Baldurs Gate Enhanced Edition": [
        "general team details", "outsourcing", "project focus", "requirements and constraints",
        "planning documentation", "milestones planning", "refactoring the development",
        "development iterations loop", "retrospective meeting",
    ],
    "Natural Selection 2": [
        "small team", "horizontal development", "development problems", "pitch",
        "brainstorming features", "users feedback", "testing", "vertical slice",
        "development iterations loop",
    ],
    "Anomaly Warzone Earth": [
        "development process details", "prototyping", "exploration phase",
        "polish and refinements", "professional feedback", "design tasks",
    ],
    "Aaaaa! -- A Reckless Disregard for Gravity": [
        "prototyping", "exploration phase", "concept", "development problems", "testing",
    ],
}

SLOW_DOWN_BULL_KEYS = {
    "Slow Down, Bull": [
        "exploration phase", "prototyping", "contractors", "project duration",
        "testing", "development iterations loop", "gold master",
    ],
    "Jetpack High": ["prototyping", "testing", "small team", "scope", "polish and refinements"],
    "Vanishing Point": [
        "requirements and constraints", "exploration phase", "planning documentation",
        "milestones planning", "development iterations loop",
    ],
    "Catlateral Damage": ["prototyping", "crunch time", "users feedback", "porting"],
}

TEMPLATES = (
    "We handled {key} on {game} in a way that worked for our team.",
    "For {game}, {key} took more of our time than we planned.",
    "{Key} shaped how {game} came together.",
    "Looking back, {key} was central to shipping {game}.",
)
PROBLEM_TEMPLATES = (
    "On {game}, {key} caused problems we did not anticipate.",
    "{Key} went badly for {game} and cost us weeks.",
)


def quote_for(rng: random.Random, game: str, key: str, prob: bool) -> str:
    pool = PROBLEM_TEMPLATES if prob else TEMPLATES
    text = rng.choice(pool)
    return text.format(game=game, key=key, Key=key[:1].upper() + key[1:])


def raw_key(rng: random.Random, key: str) -> str:
    aliases = ALIAS_OF.get(key)
    if aliases and rng.random() < 0.5:
        return rng.choice(aliases)
    return key


def records_for(rng: random.Random, game: str, keys: list[str]) -> list[dict]:
    out = []
    for key in keys:
        phase, sub = PLACEMENT[key]
        prob = rng.random() < 0.3
        rec = {
            "game": game,
            "phase": phase,
            "element": raw_key(rng, key),
            "desc": quote_for(rng, game, key, prob),
            "prob": prob,
        }
        if sub is not None:
            rec["subphase"] = sub
        out.append(rec)
    if rng.random() < 0.4:
        out.append({
            "game": game,
            "phase": "feedback",
            "element": "process feedback",
            "desc": f"If we started {game} again we would reorder a few early activities.",
            "prob": False,
        })
    return out


def synthetic_context(rng: random.Random) -> set[str]:
    on = {v for v in IDS if rng.random() < 0.22}
    on -= {"v19", "v20", "v21", "v07", "v08"}
    on.add(rng.choice(["v19", "v20", "v21"]))
    on.add(rng.choice(["v07", "v08"]))
    return on


def main() -> None:
    rng = random.Random(20170601)
    contexts: dict[str, set[str]] = dict(NAMED)
    for i in range(1, 56 - len(NAMED)):
        contexts[f"Synthetic Project {i:02d}"] = synthetic_context(rng)
    assert len(contexts) == 55

    all_keys = sorted(PLACEMENT)
    fixed = {**CASE_STUDY_KEYS, **SLOW_DOWN_BULL_KEYS}
    records = []
    for game in contexts:
        keys = fixed.get(game)
        if keys is None:
            keys = rng.sample(all_keys, rng.randint(5, 12))
        records += records_for(rng, game, keys)

    with open(DATA / "mini_contexts.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["game", *IDS])
        for game, on in contexts.items():
            w.writerow([game, *(int(v in on) for v in IDS)])
    with open(DATA / "mini_elements.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    with open(DATA / "mini_dictionary.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(dict(sorted(ALIASES.items())), fh, indent=2)
        fh.write("\n")
    with open(DATA / "target_slow_down_bull.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"game": "Slow Down, Bull (new project)", "true": sorted(SLOW_DOWN_BULL)}, fh, indent=2)
        fh.write("\n")
    with open(DATA / "target_case_study.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"game": "Case study project", "true": sorted(CASE_STUDY)}, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
