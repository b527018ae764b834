"""Command-line entry point: ``procrec <command> [options]``.

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
Inputs default to the bundled mini-corpus; outputs go under ``--out``
(default ``$PROCREC_OUT`` or ``./procrec-out``). Input files are never
modified.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import __version__, kernels
from .context import (
    ContextError,
    append_context,
    load_catalog,
    load_context_file,
    load_target,
    lint_context,
)
from .corpus import AbstractionDictionary, DictionaryError, IngestError, load_store, normalize_keys
from .evaluation import (
    EvaluationError,
    evaluate_against_extracted,
    format_confusion,
    format_table,
    likert_tally,
    read_ratings_csv,
    read_replay_csv,
    replay,
    reports_json,
)
from .pca import PcaError, export_biplot, fit_pca, rank_target
from .recommend import EmptyRecommendation, RecommendedProcess, extracted_process, recommend
from .render import RenderError, render_dot, slug

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class InvariantViolation(RuntimeError):
    pass


def bundled(name: str) -> Path:
    return Path(str(resources.files("procrec").joinpath("data", name)))


@dataclass(frozen=True)
class RunConfig:
    store: Path
    dictionary: Path | None
    contexts: Path
    catalog: Path | None
    k: int = 5
    components: int = 2
    threshold: float | None = None
    include_target: bool = True
    out: Path = Path("procrec-out")

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"--k must be >= 1, got {self.k}")
        if self.components < 1:
            raise ValueError(f"--components must be >= 1, got {self.components}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        out = args.out or os.environ.get("PROCREC_OUT") or "procrec-out"
        return cls(
            store=Path(args.store) if args.store else bundled("mini_elements.jsonl"),
            dictionary=(
                None if args.no_dict
                else Path(args.dict) if args.dict
                else bundled("mini_dictionary.json")
            ),
            contexts=Path(args.contexts) if args.contexts else bundled("mini_contexts.csv"),
            catalog=Path(args.catalog) if args.catalog else None,
            k=args.k,
            components=args.components,
            threshold=args.threshold,
            include_target=args.include_target,
            out=Path(out),
        )

    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in load_catalog(self.catalog))

    def load_dictionary(self) -> AbstractionDictionary:
        return AbstractionDictionary.load(self.dictionary) if self.dictionary else AbstractionDictionary()

    def load_normalized_store(self):
        return normalize_keys(load_store(self.store), self.load_dictionary())

    def load_matrix(self):
        return load_context_file(self.contexts, self.ids())

    def outdir(self, *parts: str) -> Path:
        path = self.out.joinpath(*parts)
        path.mkdir(parents=True, exist_ok=True)
        return path


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="")
    print(f"wrote {path}")


def cmd_ingest(cfg: RunConfig, args) -> int:
    raw = load_store(cfg.store)
    store = normalize_keys(raw, cfg.load_dictionary())
    print(f"records: {len(raw)}")
    print(f"projects: {len(raw.games)}")
    print(f"distinct keys before normalization: {len(raw.universe)}")
    print(f"distinct keys after normalization: {len(store.universe)}")
    print(f"process keys (feedback excluded): {len(store.process_universe())}")
    _write(cfg.outdir() / "store.jsonl", store.dumps())
    return EXIT_OK


def cmd_normalize(cfg: RunConfig, args) -> int:
    if cfg.dictionary is None:
        print("normalize needs a dictionary (--dict)", file=sys.stderr)
        return EXIT_INPUT
    raw = load_store(cfg.store)
    dictionary = cfg.load_dictionary()
    store = normalize_keys(raw, dictionary)
    changed = sum(a.key != b.key for a, b in zip(raw, store))
    print(f"dictionary entries: {len(dictionary.entries)}")
    print(f"records rewritten: {changed} of {len(raw)}")
    print(f"distinct keys: {len(raw.universe)} -> {len(store.universe)}")
    _write(cfg.outdir() / "store.normalized.jsonl", store.dumps())
    return EXIT_OK


def cmd_context(cfg: RunConfig, args) -> int:
    ids = cfg.ids()
    matrix = cfg.load_matrix()
    if args.context_cmd == "list":
        for row in matrix.rows:
            print(f"{row.game}\t{sum(row.values)}")
        print(f"{len(matrix)} projects, {len(ids)} variables")
        return EXIT_OK
    if args.context_cmd == "lint":
        rows = [load_target(t, ids) for t in args.targets] if args.targets else matrix.rows
        count = 0
        for row in rows:
            for warning in lint_context(row, ids):
                print(f"warning: {warning}")
                count += 1
        print(f"{count} warning(s) in {len(rows)} context(s)")
        return EXIT_OK
    # add
    target = load_target(args.target, ids)
    for warning in lint_context(target, ids):
        print(f"warning: {warning}")
    grown = append_context(matrix, target)
    _write(cfg.outdir() / "contexts.csv", grown.dumps())
    print(f"{len(grown)} projects")
    return EXIT_OK


def cmd_recommend(cfg: RunConfig, args) -> int:
    ids = cfg.ids()
    store = cfg.load_normalized_store()
    target = load_target(args.target, ids)
    model, ranking = rank_target(
        cfg.load_matrix(), target, cfg.k, cfg.components, cfg.include_target, cfg.threshold
    )
    process = recommend(store, ranking)
    if set(process.neighbor_games) != set(ranking.games):
        raise InvariantViolation("recommended process does not match the ranking")
    out = cfg.outdir(slug(target.game))
    print(f"target: {target.game}")
    for game, dist in ranking.neighbors:
        print(f"  {dist:.6f}  {game}")
    print(f"{len(process.elements)} recommended elements")
    _write(out / "ranking.json", json.dumps(ranking.to_json(), indent=2, ensure_ascii=False) + "\n")
    _write(out / "process.json", process.dumps())
    _write(out / "process.dot", render_dot(process))
    if model.n_components >= 2:
        _write(out / "biplot.csv", export_biplot(model).to_csv())
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig, args) -> int:
    store = cfg.load_normalized_store()
    matrix = cfg.load_matrix()
    unknown = [g for g in args.games if g not in matrix or not store.records_of(g)]
    if unknown:
        print(f"unknown target(s) or no elements: {', '.join(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    reports = []
    for game in args.games:
        _, ranking = rank_target(
            matrix, matrix[game], cfg.k, cfg.components, cfg.include_target, cfg.threshold
        )
        report = evaluate_against_extracted(store, game, ranking)
        if report.tp + report.fp + report.fn + report.tn != report.sa:
            raise InvariantViolation(f"{game}: confusion matrix does not partition the universe")
        print(f"{game}: similar to {', '.join(ranking.games)}")
        reports.append(report)
    print()
    print(format_confusion(reports))
    print(format_table(reports))
    out = cfg.outdir()
    _write(out / "evaluation.json", reports_json(reports))
    _write(out / "evaluation.txt", format_confusion(reports) + "\n" + format_table(reports))
    return EXIT_OK


def cmd_replay(cfg: RunConfig, args) -> int:
    with open(args.counts, encoding="utf-8") as fh:
        reports = replay(read_replay_csv(fh))
    print(format_table(reports))
    out = cfg.outdir()
    _write(out / "replay.json", reports_json(reports))
    _write(out / "replay.txt", format_table(reports))
    return EXIT_OK


def cmd_render(cfg: RunConfig, args) -> int:
    if args.process:
        process = RecommendedProcess.from_json(json.loads(Path(args.process).read_text("utf-8")))
        name, title = process.target, None
    else:
        if not args.game:
            print("render needs a game name or --process FILE", file=sys.stderr)
            return EXIT_INPUT
        process = extracted_process(cfg.load_normalized_store(), args.game)
        name, title = args.game, f"Extracted process: {args.game}"
    _write(cfg.outdir() / f"{slug(name)}.dot", render_dot(process, title=title, gold=args.gold))
    return EXIT_OK


def cmd_biplot(cfg: RunConfig, args) -> int:
    model = fit_pca(cfg.load_matrix(), max(cfg.components, 2))
    ratios = model.explained_variance_ratio()
    print(f"{len(model.games)} projects; pc1 {ratios[0]:.1%}, pc2 {ratios[1]:.1%} of variance")
    _write(cfg.outdir() / "biplot.csv", export_biplot(model).to_csv())
    return EXIT_OK


def cmd_likert(cfg: RunConfig, args) -> int:
    with open(args.ratings, encoding="utf-8") as fh:
        tallies = likert_tally(read_ratings_csv(fh))
    lines = ["dimension,n,agree,neutral,disagree"]
    for t in tallies:
        a, n, d = t.formatted()
        lines.append(f"{t.dimension},{t.total},{a},{n},{d}")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    _write(cfg.outdir() / "likert.csv", text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--store", help="element file (JSON Lines)")
    common.add_argument("--dict", help="abstraction dictionary (JSON object)")
    common.add_argument("--no-dict", action="store_true", help="skip key normalization")
    common.add_argument("--contexts", help="context matrix CSV")
    common.add_argument("--catalog", help="variable catalog JSON")
    common.add_argument("--k", type=int, default=5, help="neighbor count (default 5)")
    common.add_argument("--components", type=int, default=2, help="retained PCA components (default 2)")
    common.add_argument("--threshold", type=float, help="return every neighbor within this distance instead of k")
    inc = common.add_mutually_exclusive_group()
    inc.add_argument("--include-target", dest="include_target", action="store_true", default=True,
                     help="fit PCA with the target appended (default)")
    inc.add_argument("--exclude-target", dest="include_target", action="store_false",
                     help="fit PCA without the target, then project it")
    common.add_argument("--out", help="output directory (default $PROCREC_OUT or ./procrec-out)")

    parser = argparse.ArgumentParser(prog="procrec", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[common], help="validate and normalize an element file").set_defaults(func=cmd_ingest)
    sub.add_parser("normalize", parents=[common], help="apply the abstraction dictionary").set_defaults(func=cmd_normalize)

    ctx = sub.add_parser("context", help="inspect or extend the context matrix")
    ctx_sub = ctx.add_subparsers(dest="context_cmd", required=True)
    ctx_sub.add_parser("list", parents=[common]).set_defaults(func=cmd_context)
    lint = ctx_sub.add_parser("lint", parents=[common])
    lint.add_argument("targets", nargs="*", help="target context files (default: every matrix row)")
    lint.set_defaults(func=cmd_context)
    add = ctx_sub.add_parser("add", parents=[common])
    add.add_argument("target", help="target context file (.json or one-row .csv)")
    add.set_defaults(func=cmd_context)

    rec = sub.add_parser("recommend", parents=[common], help="recommend a process for a target context")
    rec.add_argument("target", help="target context file (.json or one-row .csv)")
    rec.set_defaults(func=cmd_recommend)

    ev = sub.add_parser("evaluate", parents=[common], help="score recommendations against extracted processes")
    ev.add_argument("games", nargs="+")
    ev.set_defaults(func=cmd_evaluate)

    rp = sub.add_parser("replay-metrics", parents=[common], help="metrics from raw confusion counts")
    rp.add_argument("counts", help="CSV with label,tp,fp,fn,tn[,sr,sa,ss,sr_ss]")
    rp.set_defaults(func=cmd_replay)

    rd = sub.add_parser("render", parents=[common], help="DOT for an extracted or recommended process")
    rd.add_argument("game", nargs="?")
    rd.add_argument("--process", help="recommended process JSON to render instead")
    rd.add_argument("--gold", action="store_true", help="add the gold terminal node to production")
    rd.set_defaults(func=cmd_render)

    sub.add_parser("biplot", parents=[common], help="export PCA scores and loadings").set_defaults(func=cmd_biplot)

    lk = sub.add_parser("likert", parents=[common], help="tally element,dimension,score ratings")
    lk.add_argument("ratings")
    lk.set_defaults(func=cmd_likert)
    return parser


INPUT_ERRORS = (
    IngestError,
    DictionaryError,
    ContextError,
    PcaError,
    EmptyRecommendation,
    EvaluationError,
    RenderError,
    OSError,
    ValueError,
    KeyError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(cfg, args)
    except IngestError as exc:
        for lineno, reason in exc.problems:
            print(f"{cfg.store}:{lineno}: {reason}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, ArithmeticError, AssertionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
