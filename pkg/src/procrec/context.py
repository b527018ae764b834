"""Video game context catalog and binary context vectors.

The variable catalog ships as ``data/catalog.json``; the engine only relies on
its ids and their order. Context matrices are CSV files with a ``game`` column
followed by one 0/1 column per catalog variable.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

GROUPS = ("Activities", "Team", "Management", "Technical", "Platform", "Design")

# soft exclusivity rules checked by lint_context: (variable ids, label)
TEAM_SIZE = ("v19", "v20", "v21")
PREPRODUCTION_LENGTH = ("v07", "v08")


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class ContextVariable:
    id: str
    group: str
    description: str


def load_catalog(path: str | Path | None = None) -> tuple[ContextVariable, ...]:
    """Read a variable catalog; the bundled one when ``path`` is None."""
    if path is None:
        return _bundled_catalog()
    with open(path, encoding="utf-8") as fh:
        return _parse_catalog(json.load(fh))


@lru_cache(maxsize=1)
def _bundled_catalog() -> tuple[ContextVariable, ...]:
    text = resources.files("procrec").joinpath("data/catalog.json").read_text("utf-8")
    return _parse_catalog(json.loads(text))


def _parse_catalog(raw) -> tuple[ContextVariable, ...]:
    if not isinstance(raw, list) or not raw:
        raise ContextError("catalog must be a non-empty JSON array")
    out = []
    for i, item in enumerate(raw):
        try:
            var = ContextVariable(str(item["id"]), str(item["group"]), str(item["description"]))
        except (KeyError, TypeError) as exc:
            raise ContextError(f"catalog entry {i}: missing id/group/description") from exc
        if var.group not in GROUPS:
            raise ContextError(f"catalog entry {var.id}: unknown group {var.group!r}")
        out.append(var)
    ids = [v.id for v in out]
    if len(set(ids)) != len(ids):
        raise ContextError("catalog ids are not unique")
    return tuple(out)


def variable_ids(catalog: Sequence[ContextVariable] | None = None) -> tuple[str, ...]:
    return tuple(v.id for v in (catalog if catalog is not None else load_catalog()))


@dataclass(frozen=True)
class ContextVector:
    game: str
    values: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))
        if not self.game:
            raise ContextError("context vector needs a game name")
        if not any(self.values):
            raise ContextError(f"{self.game}: all-false context")

    @classmethod
    def from_true_variables(
        cls, game: str, true_ids: Iterable[str], ids: Sequence[str] | None = None
    ) -> "ContextVector":
        ids = tuple(ids) if ids is not None else variable_ids()
        wanted = set(true_ids)
        unknown = sorted(wanted - set(ids))
        if unknown:
            raise ContextError(f"{game}: unknown variable(s) {unknown}")
        return cls(game, tuple(i in wanted for i in ids))

    def true_variables(self, ids: Sequence[str] | None = None) -> list[str]:
        ids = tuple(ids) if ids is not None else variable_ids()
        return [i for i, v in zip(ids, self.values) if v]

    def as_array(self) -> np.ndarray:
        return np.fromiter(self.values, dtype=np.float64, count=len(self.values))

    def __len__(self) -> int:
        return len(self.values)


class ContextMatrix:
    """Ordered rows of context vectors with unique game names."""

    __slots__ = ("_rows", "_ids", "_by_game")

    def __init__(self, rows: Iterable[ContextVector] = (), ids: Sequence[str] | None = None):
        self._ids = tuple(ids) if ids is not None else variable_ids()
        self._rows = tuple(rows)
        self._by_game: dict[str, int] = {}
        for pos, row in enumerate(self._rows):
            if len(row) != len(self._ids):
                raise ContextError(
                    f"{row.game}: {len(row)} values, expected {len(self._ids)}"
                )
            if row.game in self._by_game:
                raise ContextError(f"duplicate game name {row.game!r}")
            self._by_game[row.game] = pos

    @property
    def rows(self) -> tuple[ContextVector, ...]:
        return self._rows

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    @property
    def games(self) -> list[str]:
        return [r.game for r in self._rows]

    def __len__(self) -> int:
        return len(self._rows)

    def __contains__(self, game: object) -> bool:
        return game in self._by_game

    def __getitem__(self, game: str) -> ContextVector:
        return self._rows[self._by_game[game]]

    def as_array(self) -> np.ndarray:
        if not self._rows:
            return np.zeros((0, len(self._ids)))
        return np.array([r.values for r in self._rows], dtype=np.float64)

    def dumps(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("game",) + self._ids)
        for row in self._rows:
            writer.writerow((row.game,) + tuple(int(v) for v in row.values))
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8", newline="")


def load_contexts(
    source: IO[bytes] | IO[str] | bytes | str, ids: Sequence[str] | None = None
) -> ContextMatrix:
    """Parse a context CSV. Raises :class:`ContextError` naming the offending line."""
    if isinstance(source, (bytes, str)):
        text = source
    else:
        text = source.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    ids = tuple(ids) if ids is not None else variable_ids()

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ContextError("line 1: missing header") from None
    expected = ["game", *ids]
    if [h.strip() for h in header] != expected:
        raise ContextError(
            f"line 1: header must be 'game' followed by {ids[0]}..{ids[-1]} in order"
        )

    rows: list[ContextVector] = []
    seen: set[str] = set()
    for lineno, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(expected):
            raise ContextError(f"line {lineno}: {len(cells)} columns, expected {len(expected)}")
        game = cells[0].strip()
        if game in seen:
            raise ContextError(f"line {lineno}: duplicate game name {game!r}")
        values = []
        for vid, cell in zip(ids, cells[1:]):
            cell = cell.strip()
            if cell not in ("0", "1"):
                raise ContextError(f"line {lineno}: {vid}={cell!r} is not 0 or 1")
            values.append(cell == "1")
        try:
            rows.append(ContextVector(game, tuple(values)))
        except ContextError as exc:
            raise ContextError(f"line {lineno}: {exc}") from None
        seen.add(game)
    return ContextMatrix(rows, ids)


def load_context_file(path: str | Path, ids: Sequence[str] | None = None) -> ContextMatrix:
    with open(path, "rb") as fh:
        return load_contexts(fh, ids)


def load_target(path: str | Path, ids: Sequence[str] | None = None) -> ContextVector:
    """Read one target context.

    ``.json`` files hold ``{"game": ..., "true": ["v01", ...]}``; anything else
    is parsed as a single-row context CSV.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
        if not isinstance(data, dict) or "game" not in data or "true" not in data:
            raise ContextError(f"{path}: expected an object with 'game' and 'true'")
        return ContextVector.from_true_variables(data["game"], data["true"], ids)
    matrix = load_context_file(path, ids)
    if len(matrix) != 1:
        raise ContextError(f"{path}: expected exactly one context row, found {len(matrix)}")
    return matrix.rows[0]


def append_context(matrix: ContextMatrix, vector: ContextVector) -> ContextMatrix:
    if vector.game in matrix:
        raise ContextError(f"duplicate game name {vector.game!r}")
    return ContextMatrix(matrix.rows + (vector,), matrix.ids)


def lint_context(vector: ContextVector, ids: Sequence[str] | None = None) -> list[str]:
    ids = tuple(ids) if ids is not None else variable_ids()
    on = set(vector.true_variables(ids))
    warnings = []
    size = [v for v in TEAM_SIZE if v in on]
    if len(size) > 1:
        warnings.append(f"{vector.game}: conflicting team size variables {', '.join(size)}")
    elif not size and set(TEAM_SIZE) <= set(ids):
        warnings.append(f"{vector.game}: no team size variable set ({', '.join(TEAM_SIZE)})")
    pre = [v for v in PREPRODUCTION_LENGTH if v in on]
    if len(pre) > 1:
        warnings.append(f"{vector.game}: conflicting pre-production length {', '.join(pre)}")
    return warnings
