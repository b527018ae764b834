"""DOT rendering of extracted and recommended processes.

Layout follows a fixed template: a start disc, one cluster per activity lane
(preproduction, production, postproduction, then unordered activities), an
end disc, and two frames for team and characteristics elements. Each element
node gets one quote box per source game.

The only flow edges are the skeleton ``start -> lane -> ... -> end``; the
element data carries no ordering between activities, so none is drawn.

Node ids are slugs: lowercase, every run of non-alphanumerics replaced by
``_``.
"""

from __future__ import annotations

import re

from .recommend import MergedElement, RecommendedProcess

UNKNOWN_ORDER = "??"

LANE_LABELS = (
    ("preproduction", "Preproduction"),
    ("production", "Production"),
    ("postproduction", "Post-production"),
    (None, "Unordered activities"),
)
FRAMES = (("team", "Team"), ("characteristics", "Characteristics"))

# style classes, emitted once in the preamble comment and applied per node
STYLES = {
    "normal": 'shape=box, style="rounded,filled", fillcolor="#b7e1a1", color="#3c8d2f"',
    "problematic": 'shape=box, style="rounded,filled", fillcolor="#f4a6a6", color="#b22222"',
    "quote": 'shape=note, style=filled, fillcolor="#e6e6e6", color="#808080", fontsize=9',
    "terminal": 'shape=circle, style=filled, fillcolor="#202020", label="", width=0.25',
    "lane": 'shape=point, width=0.05',
    "gold": 'shape=doublecircle, style=filled, fillcolor="#e5c100", label="gold"',
}


class RenderError(ValueError):
    pass


def slug(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_") or "x"


def quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\r", "").replace("\n", "\\n")
    return f'"{escaped}"'


def _style(cls: str) -> str:
    return f'class="{cls}", {STYLES[cls]}'


def _node_id(e: MergedElement) -> str:
    lane = e.subphase or ("unordered" if e.phase == "activities" else e.phase)
    return f"{lane}__{slug(e.key)}"


def _label(e: MergedElement) -> str:
    return e.key if e.ordered else f"{e.key} {UNKNOWN_ORDER}"


def _assign_ids(elements) -> dict[int, str]:
    # distinct keys can share a slug; later ones get a numeric suffix
    ids: dict[int, str] = {}
    used: set[str] = set()
    for e in elements:
        base = nid = _node_id(e)
        n = 2
        while nid in used:
            nid = f"{base}_{n}"
            n += 1
        used.add(nid)
        ids[id(e)] = nid
    return ids


def _element_lines(e: MergedElement, nid: str, indent: str) -> list[str]:
    cls = "problematic" if e.prob else "normal"
    lines = [f"{indent}{nid} [label={quote(_label(e))}, {_style(cls)}];"]
    for n, src in enumerate(e.sources, start=1):
        qid = f"{nid}__q{n}"
        lines.append(
            f"{indent}{qid} [label={quote(src.game)}, tooltip={quote(src.desc)}, {_style('quote')}];"
        )
        lines.append(f'{indent}{nid} -> {qid} [style=dashed, arrowhead=none, class="attachment"];')
    return lines


def render_dot(process: RecommendedProcess, title: str | None = None, gold: bool = False) -> str:
    """Render ``process`` as DOT text (LF line endings, deterministic)."""
    if not process.elements:
        raise RenderError(f"process for {process.target!r} has no elements")
    if title is None:
        title = f"Recommended process: {process.target}"
    ids = _assign_ids(process.elements)

    out = [
        f"digraph {quote(slug(process.target))} {{",
        "  // style classes",
    ]
    out += [f"  //   {name}: {attrs}" for name, attrs in STYLES.items()]
    out += [
        f"  graph [label={quote(title)}, labelloc=t, rankdir=LR, compound=true, fontname=\"Helvetica\"];",
        '  node [fontname="Helvetica"];',
        '  edge [fontname="Helvetica"];',
        f"  start [{_style('terminal')}];",
        f"  end [{_style('terminal')}];",
    ]

    skeleton = ["start"]
    for lane, lane_label in LANE_LABELS:
        members = [e for e in process.elements if e.phase == "activities" and e.subphase == lane]
        show_gold = gold and lane == "production"
        if not members and not show_gold:
            continue
        name = lane or "unordered"
        out.append(f"  subgraph cluster_{name} {{")
        out.append(f"    label={quote(lane_label)};")
        out.append(f"    lane_{name} [{_style('lane')}];")
        for e in members:
            out += _element_lines(e, ids[id(e)], "    ")
        if show_gold:
            out.append(f"    gold [{_style('gold')}];")
        out.append("  }")
        skeleton.append(f"lane_{name}")
    skeleton.append("end")

    for phase, frame_label in FRAMES:
        members = [e for e in process.elements if e.phase == phase]
        if not members:
            continue
        out.append(f"  subgraph cluster_{phase} {{")
        out.append(f"    label={quote(frame_label)};")
        out.append("    style=dashed;")
        for e in members:
            out += _element_lines(e, ids[id(e)], "    ")
        out.append("  }")

    out.append(f'  {" -> ".join(skeleton)} [class="flow"];')
    out.append("}")
    return "\n".join(out) + "\n"


def check_dot(text: str) -> list[str]:
    """Minimal well-formedness check: balanced braces and brackets, closed quotes.

    Returns a list of problems; empty when the text looks well formed.
    ``//`` comment lines are ignored.
    """
    text = "".join(
        "\n" if ln.lstrip().startswith("//") else ln for ln in text.splitlines(keepends=True)
    )
    problems = []
    stack: list[str] = []
    pairs = {"}": "{", "]": "["}
    in_str = False
    escaped = False
    line = 1
    for ch in text:
        if ch == "\n":
            if in_str:
                problems.append(f"line {line}: newline inside quoted string")
            line += 1
        if in_str:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch in "{[":
            stack.append(ch)
        elif ch in "}]":
            if not stack or stack[-1] != pairs[ch]:
                problems.append(f"line {line}: unbalanced {ch!r}")
            else:
                stack.pop()
    if in_str:
        problems.append("unterminated quoted string")
    if stack:
        problems.append(f"{len(stack)} unclosed bracket(s)")
    if not re.match(r"\s*(strict\s+)?(di)?graph\b", text):
        problems.append("missing graph header")
    return problems
