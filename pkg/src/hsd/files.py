"""Plain-text formats for designs, starter sets, and GDDs.

Three line-oriented formats, each opened by a magic line:

    hsd-design v1     holes and blocks, fully expanded
    hsd-starter v1    starters over Z_g with fixed labels
    gdd v1            groups and unordered blocks

Lines are `key: tokens`; `#` starts a comment; blank lines are skipped.
Unknown keys are rejected rather than ignored, so a typo in a data file
fails loudly.  Finite points are integers, long-hole points are labels
like "x3" (the forms "x_3" and "x_{3}" are accepted on input and
normalized on output).  parse(serialize(obj)) == obj, and serialize never
renames points; compound points from intermediate constructions must be
relabeled before writing.
"""

from __future__ import annotations

import re

from hsd.algebra import GDD
from hsd.core import Design, TypeSpec, is_infinite, parse_type
from hsd.development import StarterSet

DESIGN_MAGIC = "hsd-design v1"
STARTER_MAGIC = "hsd-starter v1"
GDD_MAGIC = "gdd v1"

_INT = re.compile(r"-?\d+$")
_LABEL = re.compile(r"x_?\{?(\d+)\}?$")


def _parse_point(tok: str):
    if _INT.match(tok):
        return int(tok)
    m = _LABEL.match(tok)
    if m:
        return f"x{m.group(1)}"
    raise ValueError(f"bad point token {tok!r}")


def _point_str(p) -> str:
    if isinstance(p, int):
        return str(p)
    if is_infinite(p):
        return p
    raise ValueError(f"point {p!r} is not serializable; relabel the design first")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _header_and_items(text: str, magic: str, allowed: set):
    """Common scan: check the magic line, split `key: value` rows."""
    rows = list(_lines(text))
    if not rows or rows[0][1] != magic:
        raise ValueError(f"expected first line {magic!r}")
    items = []
    for lineno, line in rows[1:]:
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        key = key.strip()
        if key not in allowed:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        items.append((lineno, key, value.strip()))
    return items


def detect_format(text: str) -> str:
    for _, line in _lines(text):
        if line == DESIGN_MAGIC:
            return "design"
        if line == STARTER_MAGIC:
            return "starter"
        if line == GDD_MAGIC:
            return "gdd"
        raise ValueError(f"unrecognized first line {line!r}")
    raise ValueError("empty file")


# ---------------------------------------------------------------------------
# designs


def parse_design(text: str) -> Design:
    items = _header_and_items(text, DESIGN_MAGIC, {"type", "points", "hole", "block"})
    holes, blocks = [], []
    declared_type, declared_points = None, None
    for lineno, key, value in items:
        if key == "hole":
            holes.append([_parse_point(t) for t in value.split()])
        elif key == "block":
            pts = [_parse_point(t) for t in value.split()]
            if len(pts) != 4:
                raise ValueError(f"line {lineno}: block needs 4 points, got {len(pts)}")
            blocks.append(tuple(pts))
        elif key == "type":
            declared_type = parse_type(value)
        elif key == "points":
            declared_points = int(value)
    design = Design(holes, blocks)
    if declared_type is not None and design.type != declared_type:
        raise ValueError(f"declared type {declared_type} but holes give {design.type}")
    if declared_points is not None and declared_points != len(design.points):
        raise ValueError(f"declared {declared_points} points but holes hold {len(design.points)}")
    return design


def serialize_design(design: Design, comment: str = "") -> str:
    out = [DESIGN_MAGIC]
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"type: {design.type}")
    out.append(f"points: {len(design.points)}")
    for hole in design.holes:
        out.append("hole: " + " ".join(_point_str(p) for p in hole))
    for blk in design.blocks:
        out.append("block: " + " ".join(_point_str(p) for p in blk))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# starter sets


def parse_starter(text: str) -> StarterSet:
    items = _header_and_items(
        text, STARTER_MAGIC, {"type", "modulus", "hole-size", "step", "infinite", "starter"}
    )
    modulus = hole_size = None
    step = 1
    infinite: list = []
    starters = []
    declared_type = None
    for lineno, key, value in items:
        if key == "starter":
            pts = [_parse_point(t) for t in value.split()]
            if len(pts) != 4:
                raise ValueError(f"line {lineno}: starter needs 4 entries, got {len(pts)}")
            starters.append(tuple(pts))
        elif key == "modulus":
            modulus = int(value)
        elif key == "hole-size":
            hole_size = int(value)
        elif key == "step":
            step = int(value)
        elif key == "infinite":
            for t in value.split():
                p = _parse_point(t)
                if not is_infinite(p):
                    raise ValueError(f"line {lineno}: {t!r} is not a label")
                infinite.append(p)
        elif key == "type":
            declared_type = parse_type(value)
    if modulus is None or hole_size is None:
        raise ValueError("starter file needs 'modulus:' and 'hole-size:' lines")
    ss = StarterSet(
        modulus=modulus,
        hole_size=hole_size,
        step=step,
        infinite=tuple(infinite),
        starters=tuple(starters),
    )
    if declared_type is not None and ss.type != declared_type:
        raise ValueError(f"declared type {declared_type} but geometry gives {ss.type}")
    return ss


def serialize_starter(ss: StarterSet, comment: str = "") -> str:
    out = [STARTER_MAGIC]
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"type: {ss.type}")
    out.append(f"modulus: {ss.modulus}")
    out.append(f"hole-size: {ss.hole_size}")
    out.append(f"step: {ss.step}")
    if ss.infinite:
        out.append("infinite: " + " ".join(ss.infinite))
    for blk in ss.starters:
        out.append("starter: " + " ".join(_point_str(p) for p in blk))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# GDDs


def parse_gdd(text: str) -> GDD:
    items = _header_and_items(text, GDD_MAGIC, {"lambda", "type", "points", "group", "block"})
    lam = 1
    groups, blocks = [], []
    declared_type, declared_points = None, None
    for lineno, key, value in items:
        if key == "group":
            groups.append([_parse_point(t) for t in value.split()])
        elif key == "block":
            pts = [_parse_point(t) for t in value.split()]
            if len(pts) < 2:
                raise ValueError(f"line {lineno}: block needs at least 2 points")
            blocks.append(tuple(pts))
        elif key == "lambda":
            lam = int(value)
        elif key == "type":
            declared_type = parse_type(value)
        elif key == "points":
            declared_points = int(value)
    g = GDD(groups, blocks, lam=lam)
    if declared_type is not None and g.type != declared_type:
        raise ValueError(f"declared type {declared_type} but groups give {g.type}")
    if declared_points is not None and declared_points != len(g.points):
        raise ValueError(f"declared {declared_points} points but groups hold {len(g.points)}")
    return g


def serialize_gdd(gdd: GDD, comment: str = "") -> str:
    out = [GDD_MAGIC]
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"lambda: {gdd.lam}")
    out.append(f"type: {gdd.type}")
    out.append(f"points: {len(gdd.points)}")
    for grp in gdd.groups:
        out.append("group: " + " ".join(_point_str(p) for p in grp))
    for blk in gdd.blocks:
        out.append("block: " + " ".join(_point_str(p) for p in blk))
    return "\n".join(out) + "\n"
