"""Merge the elements of similar projects into one recommended process."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .corpus import ElementRecord, ElementStore
from .pca import SimilarityRanking

LANES = ("preproduction", "production", "postproduction", None)
PHASE_ORDER = ("activities", "team", "characteristics")


class EmptyRecommendation(ValueError):
    pass


@dataclass(frozen=True)
class Source:
    game: str
    desc: str
    prob: bool


@dataclass(frozen=True)
class MergedElement:
    key: str
    phase: str
    subphase: str | None
    sources: tuple[Source, ...]

    @property
    def prob(self) -> bool:
        return any(s.prob for s in self.sources)

    @property
    def ordered(self) -> bool:
        """False for activities with no lane; they are rendered with an unknown-order marker."""
        return self.phase != "activities" or self.subphase is not None

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "phase": self.phase,
            "subphase": self.subphase,
            "prob": self.prob,
            "sources": [{"game": s.game, "desc": s.desc, "prob": s.prob} for s in self.sources],
        }


def element_order(phase: str, subphase: str | None, key: str) -> tuple:
    return (LANES.index(subphase), PHASE_ORDER.index(phase), key)


@dataclass(frozen=True)
class RecommendedProcess:
    target: str
    neighbor_games: tuple[str, ...]
    elements: tuple[MergedElement, ...]

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "neighbors": list(self.neighbor_games),
            "elements": [e.to_json() for e in self.elements],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "RecommendedProcess":
        elements = tuple(
            MergedElement(
                key=e["key"],
                phase=e["phase"],
                subphase=e.get("subphase"),
                sources=tuple(Source(s["game"], s["desc"], bool(s["prob"])) for s in e["sources"]),
            )
            for e in data["elements"]
        )
        return cls(data["target"], tuple(data["neighbors"]), elements)


def merge_records(target: str, games: Iterable[str], records: Iterable[ElementRecord]) -> RecommendedProcess:
    groups: dict[tuple, list[Source]] = {}
    for r in records:
        if r.phase == "feedback":
            continue
        groups.setdefault((r.key, r.phase, r.subphase), []).append(Source(r.game, r.desc, r.prob))
    elements = [
        MergedElement(key, phase, sub, tuple(sorted(srcs, key=lambda s: (s.game, s.desc, s.prob))))
        for (key, phase, sub), srcs in groups.items()
    ]
    elements.sort(key=lambda e: element_order(e.phase, e.subphase, e.key))
    return RecommendedProcess(target, tuple(games), tuple(elements))


def recommend(store: ElementStore, ranking: SimilarityRanking) -> RecommendedProcess:
    games = ranking.games
    if not games:
        raise EmptyRecommendation(f"no similar projects for {ranking.target!r}")
    wanted = set(games)
    process = merge_records(ranking.target, games, (r for r in store if r.game in wanted))
    if not process.elements:
        raise EmptyRecommendation(
            f"neighbors of {ranking.target!r} have no process elements: {', '.join(games)}"
        )
    return process


def extracted_process(store: ElementStore, game: str) -> RecommendedProcess:
    """One project's own elements in the same merged shape, for rendering."""
    process = merge_records(game, (game,), store.records_of(game))
    if not process.elements:
        raise EmptyRecommendation(f"{game!r} has no process elements")
    return process


def element_set(process: RecommendedProcess) -> set[str]:
    return {e.key for e in process.elements}
