"""Correctness and coverage of recommended processes, plus Likert tallies.

Ratios with a zero denominator are reported as 0 and named in
``MetricsReport.degenerate`` instead of propagating NaN.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import IO, Iterable, Sequence

from .corpus import ElementStore
from .pca import SimilarityRanking
from .recommend import element_set, recommend

DIMENSIONS = ("trustworthiness", "novelty", "serendipity", "utility", "risk")

CORRECTNESS_FIELDS = (
    "precision",
    "recall",
    "accuracy",
    "fp_rate",
    "fn_rate",
    "specificity",
    "f_measure",
)
COVERAGE_FIELDS = ("catalog", "weighted_catalog")
TABLE_HEADERS = (
    ("Precision", "precision"),
    ("Recall", "recall"),
    ("Accuracy", "accuracy"),
    ("FP Rate", "fp_rate"),
    ("FN Rate", "fn_rate"),
    ("Specificity", "specificity"),
    ("F-Measure", "f_measure"),
    ("Sr", "sr"),
    ("Sa", "sa"),
    ("Ss", "ss"),
    ("Catalog", "catalog"),
    ("W. Catalog", "weighted_catalog"),
)


class EvaluationError(ValueError):
    pass


def percent(ratio: float, places: int = 2) -> str:
    """Format a ratio as a percentage, rounding half up (``0.28125 -> '28.13'``)."""
    q = Decimal(1).scaleb(-places)
    return str((Decimal(repr(ratio)) * 100).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            if getattr(self, name) < 0:
                raise EvaluationError(f"{name} must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class Buckets:
    """The elements behind each confusion-matrix cell."""

    tp: frozenset[str]
    fp: frozenset[str]
    fn: frozenset[str]
    tn: frozenset[str]

    def matrix(self) -> ConfusionMatrix:
        return ConfusionMatrix(len(self.tp), len(self.fp), len(self.fn), len(self.tn))


def classify_elements(recommended: Iterable[str], tested: Iterable[str], universe: Iterable[str]) -> Buckets:
    rec, tst, uni = frozenset(recommended), frozenset(tested), frozenset(universe)
    bad = {"recommended": sorted(rec - uni), "tested": sorted(tst - uni)}
    bad = {k: v for k, v in bad.items() if v}
    if bad:
        detail = "; ".join(f"{k} keys not in universe: {', '.join(v)}" for k, v in bad.items())
        raise EvaluationError(detail)
    not_recommended = uni - rec
    return Buckets(
        tp=rec & tst,
        fp=rec - tst,
        fn=not_recommended & tst,
        tn=not_recommended - tst,
    )


def compare_elements(recommended: Iterable[str], tested: Iterable[str], universe: Iterable[str]) -> ConfusionMatrix:
    return classify_elements(recommended, tested, universe).matrix()


@dataclass(frozen=True)
class MetricsReport:
    label: str = ""
    precision: float = 0.0
    recall: float = 0.0
    accuracy: float = 0.0
    fp_rate: float = 0.0
    fn_rate: float = 0.0
    specificity: float = 0.0
    f_measure: float = 0.0
    catalog: float | None = None
    weighted_catalog: float | None = None
    tp: int | None = None
    fp: int | None = None
    fn: int | None = None
    tn: int | None = None
    sr: int | None = None
    sa: int | None = None
    ss: int | None = None
    sr_ss: int | None = None
    degenerate: tuple[str, ...] = field(default_factory=tuple)

    def merged(self, other: "MetricsReport") -> "MetricsReport":
        """Fill this report's unset (None) fields from ``other``."""
        mine = asdict(self)
        for name, value in asdict(other).items():
            if name == "degenerate":
                continue
            if mine[name] is None:
                mine[name] = value
        mine["degenerate"] = tuple(sorted(set(self.degenerate) | set(other.degenerate)))
        mine["label"] = self.label or other.label
        return MetricsReport(**mine)

    def to_json(self) -> dict:
        out = asdict(self)
        out["degenerate"] = list(self.degenerate)
        return out


def _ratio(num: int | float, den: int | float, name: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(name)
        return 0.0
    return num / den


def correctness_metrics(cm: ConfusionMatrix, label: str = "") -> MetricsReport:
    flags: list[str] = []
    precision = _ratio(cm.tp, cm.tp + cm.fp, "precision", flags)
    recall = _ratio(cm.tp, cm.tp + cm.fn, "recall", flags)
    accuracy = _ratio(cm.tp + cm.tn, cm.total, "accuracy", flags)
    fp_rate = _ratio(cm.fp, cm.fp + cm.tn, "fp_rate", flags)
    fn_rate = _ratio(cm.fn, cm.fn + cm.tn, "fn_rate", flags)
    specificity = _ratio(cm.tn, cm.fp + cm.tn, "specificity", flags)
    f_measure = _ratio(2 * precision * recall, precision + recall, "f_measure", flags)
    return MetricsReport(
        label=label,
        precision=precision,
        recall=recall,
        accuracy=accuracy,
        fp_rate=fp_rate,
        fn_rate=fn_rate,
        specificity=specificity,
        f_measure=f_measure,
        tp=cm.tp,
        fp=cm.fp,
        fn=cm.fn,
        tn=cm.tn,
        degenerate=tuple(flags),
    )


@dataclass(frozen=True)
class CoverageInputs:
    sr: frozenset[str]
    sa: frozenset[str]
    ss: frozenset[str]

    def __post_init__(self):
        for name in ("sr", "sa", "ss"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        for name in ("sr", "ss"):
            extra = sorted(getattr(self, name) - self.sa)
            if extra:
                raise EvaluationError(f"{name} keys not in sa: {', '.join(extra)}")


def coverage_from_counts(sr: int, sa: int, ss: int, sr_ss: int, label: str = "") -> MetricsReport:
    """Coverage from set sizes alone (|Sr|, |Sa|, |Ss|, |Sr ∩ Ss|)."""
    if sa == 0:
        raise EvaluationError("catalog coverage undefined: the set of all elements is empty")
    if not (0 <= sr_ss <= min(sr, ss) and sr <= sa and ss <= sa):
        raise EvaluationError(f"inconsistent set sizes sr={sr} sa={sa} ss={ss} sr&ss={sr_ss}")
    flags: list[str] = []
    weighted = _ratio(sr_ss, ss, "weighted_catalog", flags)
    return MetricsReport(
        label=label,
        catalog=sr / sa,
        weighted_catalog=weighted,
        sr=sr,
        sa=sa,
        ss=ss,
        sr_ss=sr_ss,
        degenerate=tuple(flags),
    )


def coverage_metrics(inputs: CoverageInputs, label: str = "") -> MetricsReport:
    return coverage_from_counts(
        len(inputs.sr), len(inputs.sa), len(inputs.ss), len(inputs.sr & inputs.ss), label
    )


def evaluate_against_extracted(
    store: ElementStore, target_game: str, ranking: SimilarityRanking
) -> MetricsReport:
    tested = {r.key for r in store.records_of(target_game) if r.phase != "feedback"}
    if not tested:
        raise EvaluationError(f"{target_game!r} has no process elements to evaluate against")
    if target_game in ranking.games:
        raise EvaluationError(f"{target_game!r} must not be among its own neighbors")
    recommended = element_set(recommend(store, ranking))
    universe = store.process_universe()
    cm = compare_elements(recommended, tested, universe)
    correctness = correctness_metrics(cm, target_game)
    coverage = coverage_metrics(CoverageInputs(recommended, universe, tested), target_game)
    return correctness.merged(coverage)


def replay(rows: Sequence[dict]) -> list[MetricsReport]:
    """Metrics from raw counts: each row has label, tp, fp, fn, tn and optionally sr, sa, ss, sr_ss."""
    out = []
    for row in rows:
        label = str(row.get("label", ""))
        cm = ConfusionMatrix(*(int(row[k]) for k in ("tp", "fp", "fn", "tn")))
        report = correctness_metrics(cm, label)
        if all(row.get(k) not in (None, "") for k in ("sr", "sa", "ss", "sr_ss")):
            cov = coverage_from_counts(*(int(row[k]) for k in ("sr", "sa", "ss", "sr_ss")), label=label)
            report = report.merged(cov)
        out.append(report)
    return out


def read_replay_csv(source: IO[str] | str) -> list[dict]:
    text = source if isinstance(source, str) else source.read()
    reader = csv.DictReader(io.StringIO(text))
    need = {"tp", "fp", "fn", "tn"}
    if reader.fieldnames is None or not need <= set(reader.fieldnames):
        raise EvaluationError("replay CSV needs columns tp, fp, fn, tn (label, sr, sa, ss, sr_ss optional)")
    return list(reader)


def format_table(reports: Sequence[MetricsReport]) -> str:
    """Aligned text table, one row per report, percentages with 2 decimals."""
    header = ["", *(h for h, _ in TABLE_HEADERS)]
    body = []
    for rep in reports:
        cells = [rep.label]
        for _, name in TABLE_HEADERS:
            value = getattr(rep, name)
            if value is None:
                cells.append("-")
            elif name in ("sr", "sa", "ss"):
                cells.append(str(value))
            else:
                cells.append(percent(value) + "%")
        body.append(cells)
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = []
    for r in [header, *body]:
        first = r[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join([first, *rest]).rstrip())
    return "\n".join(lines) + "\n"


def format_confusion(reports: Sequence[MetricsReport]) -> str:
    header = ["", "T. Positive", "F. Positive", "F. Negative", "T. Negative"]
    body = [[r.label, str(r.tp), str(r.fp), str(r.fn), str(r.tn)] for r in reports if r.tp is not None]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = [
        "  ".join([r[0].ljust(widths[0]), *(c.rjust(w) for c, w in zip(r[1:], widths[1:]))]).rstrip()
        for r in [header, *body]
    ]
    return "\n".join(lines) + "\n"


def reports_json(reports: Sequence[MetricsReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class LikertTally:
    dimension: str
    agree: int
    neutral: int
    disagree: int

    @property
    def total(self) -> int:
        return self.agree + self.neutral + self.disagree

    def percentages(self) -> tuple[float, float, float]:
        n = self.total
        return (100 * self.agree / n, 100 * self.neutral / n, 100 * self.disagree / n)

    def formatted(self) -> tuple[str, str, str]:
        return tuple(percent(p / 100) for p in self.percentages())


def likert_tally(ratings: Iterable[tuple[str, str, int]]) -> list[LikertTally]:
    counts: dict[str, list[int]] = {}
    for element, dimension, score in ratings:
        dimension = dimension.strip().lower()
        if dimension not in DIMENSIONS:
            raise EvaluationError(f"{element}: unknown dimension {dimension!r}")
        if isinstance(score, bool) or score not in (1, 2, 3, 4, 5):
            raise EvaluationError(f"{element}/{dimension}: score {score!r} outside 1..5")
        c = counts.setdefault(dimension, [0, 0, 0])
        c[0 if score >= 4 else 1 if score == 3 else 2] += 1
    return [LikertTally(d, *counts[d]) for d in DIMENSIONS if d in counts]


def read_ratings_csv(source: IO[str] | str) -> list[tuple[str, str, int]]:
    text = source if isinstance(source, str) else source.read()
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["element", "dimension", "score"]:
        raise EvaluationError("ratings CSV header must be element,dimension,score")
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            score = int(row["score"])
        except (TypeError, ValueError):
            raise EvaluationError(f"line {lineno}: score {row['score']!r} is not an integer") from None
        out.append((row["element"], row["dimension"], score))
    return out
