"""Storage of process elements extracted from postmortems.

Records live in a JSON Lines file, one element per line::

    {"game": "...", "phase": "activities", "element": "prototyping",
     "desc": "...", "prob": false, "subphase": "preproduction"}

An :class:`ElementStore` is immutable; every transformation returns a new
store.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import IO, Iterable, Mapping

PHASES = ("activities", "team", "characteristics", "feedback")
SUBPHASES = ("preproduction", "production", "postproduction")
REQUIRED_FIELDS = ("game", "phase", "element", "desc", "prob")
OPTIONAL_FIELDS = ("subphase",)


class IngestError(ValueError):
    """Raised when an element file contains invalid records.

    ``problems`` holds ``(line_number, reason)`` pairs, 1-based.
    """

    def __init__(self, problems: list[tuple[int, str]]):
        self.problems = problems
        lines = "; ".join(f"line {n}: {why}" for n, why in problems)
        super().__init__(f"{len(problems)} invalid record(s): {lines}")


class DictionaryError(ValueError):
    pass


def canonical_key(key: str) -> str:
    return key.strip().lower()


@dataclass(frozen=True)
class ElementRecord:
    game: str
    phase: str
    key: str
    desc: str
    prob: bool
    subphase: str | None = None

    def __post_init__(self):
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")
        if not self.key or self.key != canonical_key(self.key):
            raise ValueError(f"key must be non-empty, lowercase and trimmed: {self.key!r}")
        if not self.desc:
            raise ValueError("desc must be non-empty")
        if self.subphase is not None:
            if self.phase != "activities":
                raise ValueError(f"subphase given for phase {self.phase!r}")
            if self.subphase not in SUBPHASES:
                raise ValueError(f"unknown subphase {self.subphase!r}")

    def to_json(self) -> dict:
        out = {
            "game": self.game,
            "phase": self.phase,
            "element": self.key,
            "desc": self.desc,
            "prob": self.prob,
        }
        if self.subphase is not None:
            out["subphase"] = self.subphase
        return out


@dataclass(frozen=True)
class AbstractionDictionary:
    """Alias -> canonical key mapping. Keys absent from the map are canonical."""

    entries: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        clean = {canonical_key(k): canonical_key(v) for k, v in self.entries.items()}
        chained = sorted(v for v in set(clean.values()) if clean.get(v, v) != v)
        if chained:
            raise DictionaryError(f"canonical keys must map to themselves, got aliases: {chained}")
        object.__setattr__(self, "entries", MappingProxyType(clean))

    def lookup(self, key: str) -> str:
        key = canonical_key(key)
        return self.entries.get(key, key)

    @classmethod
    def load(cls, path: str | Path) -> "AbstractionDictionary":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in data.items()
        ):
            raise DictionaryError(f"{path}: expected a JSON object of string -> string")
        return cls(data)


class ElementStore:
    """Ordered, immutable collection of element records with a per-game index."""

    __slots__ = ("_records", "_index", "_universe")

    def __init__(self, records: Iterable[ElementRecord] = ()):
        self._records = tuple(records)
        index: dict[str, list[int]] = {}
        for pos, rec in enumerate(self._records):
            index.setdefault(rec.game, []).append(pos)
        self._index = MappingProxyType({g: tuple(p) for g, p in index.items()})
        self._universe = frozenset(r.key for r in self._records)

    @property
    def records(self) -> tuple[ElementRecord, ...]:
        return self._records

    @property
    def index(self) -> Mapping[str, tuple[int, ...]]:
        return self._index

    @property
    def universe(self) -> frozenset[str]:
        return self._universe

    @property
    def games(self) -> list[str]:
        return list(self._index)

    def process_universe(self) -> frozenset[str]:
        """Keys of non-feedback records: the universe recommendations draw from."""
        return frozenset(r.key for r in self._records if r.phase != "feedback")

    def records_of(self, game: str) -> list[ElementRecord]:
        return [self._records[i] for i in self._index.get(game, ())]

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ElementStore):
            return NotImplemented
        return self._records == other._records

    def __repr__(self) -> str:
        return f"ElementStore({len(self._records)} records, {len(self._index)} games, {len(self._universe)} keys)"

    def dumps(self) -> str:
        return "".join(
            json.dumps(r.to_json(), ensure_ascii=False) + "\n" for r in self._records
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8", newline="\n")


def _parse_record(obj) -> ElementRecord:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    missing = [f for f in REQUIRED_FIELDS if f not in obj]
    if missing:
        raise ValueError(f"missing field(s) {', '.join(missing)}")
    extra = sorted(set(obj) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS))
    if extra:
        raise ValueError(f"unexpected field(s) {', '.join(extra)}")
    for name in ("game", "phase", "element", "desc"):
        if not isinstance(obj[name], str):
            raise ValueError(f"field {name!r} must be a string")
    if not isinstance(obj["prob"], bool):
        raise ValueError("field 'prob' must be a boolean")
    subphase = obj.get("subphase")
    if subphase is not None and not isinstance(subphase, str):
        raise ValueError("field 'subphase' must be a string")
    if not obj["game"].strip():
        raise ValueError("field 'game' is empty")
    return ElementRecord(
        game=obj["game"],
        phase=obj["phase"],
        key=canonical_key(obj["element"]),
        desc=obj["desc"],
        prob=obj["prob"],
        subphase=subphase,
    )


def ingest_elements(source: IO[bytes] | IO[str] | bytes | str) -> ElementStore:
    """Parse a JSON Lines element stream into a store.

    Blank lines are skipped. Every invalid line is collected and reported
    together in a single :class:`IngestError`.
    """
    if isinstance(source, (bytes, str)):
        text = source
    else:
        text = source.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    records: list[ElementRecord] = []
    seen: dict[ElementRecord, int] = {}
    problems: list[tuple[int, str]] = []
    # only "\n" ends a record; str.splitlines would also split on U+2028 etc.
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.removesuffix("\r")
        if not line.strip():
            continue
        try:
            rec = _parse_record(json.loads(line))
        except json.JSONDecodeError as exc:
            problems.append((lineno, f"malformed JSON ({exc.msg})"))
            continue
        except ValueError as exc:
            problems.append((lineno, str(exc)))
            continue
        if rec in seen:
            problems.append((lineno, f"duplicate of record on line {seen[rec]}"))
            continue
        seen[rec] = lineno
        records.append(rec)
    if problems:
        raise IngestError(problems)
    return ElementStore(records)


def load_store(path: str | Path) -> ElementStore:
    with open(path, "rb") as fh:
        return ingest_elements(fh)


def normalize_keys(store: ElementStore, dictionary: AbstractionDictionary) -> ElementStore:
    if not dictionary.entries:
        return store
    return ElementStore(
        ElementRecord(
            game=r.game,
            phase=r.phase,
            key=dictionary.lookup(r.key),
            desc=r.desc,
            prob=r.prob,
            subphase=r.subphase,
        )
        for r in store
    )


def elements_of(store: ElementStore, games: Iterable[str]) -> set[ElementRecord]:
    wanted = set(games)
    return {r for r in store if r.game in wanted}
