"""Core objects: hole types, blocks, designs, feasibility, verification.

A holey Schroder design (HSD) lives on a point set partitioned into holes.
Its blocks are ordered 4-tuples (a, b, c, d) meeting every hole at most
once.  Each block carries six pairs in three "colors":

    color 1: {a, b}, {c, d}
    color 2: {a, c}, {b, d}
    color 3: {a, d}, {b, c}

and the defining condition is that every pair of points from two distinct
holes occurs exactly once in every color.  Blocks are identified up to the
rewriting

    (a, b, c, d) ~ (b, a, d, c) ~ (c, d, a, b) ~ (d, c, b, a)

which leaves the colored pairs untouched; `canonical_block` picks the
lexicographically least of the four forms.

Points are either integers or infinite-style labels "x1", "x2", ...  (other
hashables are tolerated internally so constructions can use compound points
before relabeling).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Iterable, Sequence

Point = Hashable
Block = tuple  # 4-tuple of points

COLORS = (1, 2, 3)

_X_LABEL = re.compile(r"x(\d+)")


def point_key(p: Point):
    """Total order on points: integers, then x-labels by index, then the rest."""
    if isinstance(p, int):
        return (0, p, "")
    if isinstance(p, str):
        m = _X_LABEL.fullmatch(p)
        if m:
            return (1, int(m.group(1)), "")
        return (2, 0, p)
    return (3, 0, repr(p))


def is_infinite(p: Point) -> bool:
    return isinstance(p, str) and _X_LABEL.fullmatch(p) is not None


def pair(p: Point, q: Point) -> tuple:
    """Unordered pair as a sorted 2-tuple (stable under point_key)."""
    if point_key(p) <= point_key(q):
        return (p, q)
    return (q, p)


def block_forms(block: Block) -> tuple:
    a, b, c, d = block
    return ((a, b, c, d), (b, a, d, c), (c, d, a, b), (d, c, b, a))


def block_sort_key(block: Block):
    return tuple(point_key(p) for p in block)


def canonical_block(block: Block) -> Block:
    """Least of the four equivalent forms of a block."""
    return min(block_forms(block), key=block_sort_key)


def block_pairs(block: Block) -> list:
    """The six (pair, color) items a block covers."""
    a, b, c, d = block
    return [
        (pair(a, b), 1),
        (pair(c, d), 1),
        (pair(a, c), 2),
        (pair(b, d), 2),
        (pair(a, d), 3),
        (pair(b, c), 3),
    ]


# ---------------------------------------------------------------------------
# hole types


@dataclass(frozen=True)
class TypeSpec:
    """Multiset of hole sizes, e.g. parse_type("3^8 2^1").

    Equality is multiset equality, so "3^4 3^1" and "3^5" are the same
    TypeSpec.  str() renders sizes largest-multiplicity first, which
    reproduces the usual h^n u^1 notation.
    """

    items: tuple  # ((size, count), ...) sorted by size

    def __post_init__(self):
        for size, count in self.items:
            if size < 1 or count < 1:
                raise ValueError(f"bad hole type entry {size}^{count}")

    @staticmethod
    def from_counts(counts) -> "TypeSpec":
        items = tuple(sorted((int(s), int(c)) for s, c in dict(counts).items() if c))
        return TypeSpec(items)

    @staticmethod
    def of(*sizes: int) -> "TypeSpec":
        return TypeSpec.from_counts(Counter(sizes))

    def counts(self) -> Counter:
        return Counter(dict(self.items))

    def sizes(self) -> list:
        """All hole sizes with multiplicity, ascending."""
        out = []
        for size, count in self.items:
            out.extend([size] * count)
        return out

    @property
    def points(self) -> int:
        return sum(s * c for s, c in self.items)

    @property
    def holes(self) -> int:
        return sum(c for _, c in self.items)

    def __str__(self) -> str:
        ordered = sorted(self.items, key=lambda sc: (-sc[1], sc[0]))
        return " ".join(f"{s}^{c}" for s, c in ordered)


_TYPE_TOKEN = re.compile(r"(\d+)\^(\d+)$")


def parse_type(text: str) -> TypeSpec:
    """Parse a hole type like "3^8 2^1" into a TypeSpec."""
    counts: Counter = Counter()
    tokens = text.split()
    if not tokens:
        raise ValueError("empty hole type")
    for tok in tokens:
        m = _TYPE_TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad hole type token {tok!r} in {text!r}")
        size, count = int(m.group(1)), int(m.group(2))
        if size < 1 or count < 1:
            raise ValueError(f"hole sizes and counts must be positive: {tok!r}")
        counts[size] += count
    return TypeSpec.from_counts(counts)


def uniform_type(n: int, u: int, h: int = 3) -> TypeSpec:
    """The h^n u^1 type (u = 0 gives plain h^n)."""
    counts = Counter({h: n})
    if u:
        counts[u] += 1
    return TypeSpec.from_counts(counts)


def expected_block_count(t: TypeSpec) -> int:
    """Cross pairs / 2; raises if the count is not an integer.

    Each block covers two pairs per color, so a design of this type has
    (C(P,2) - sum C(hole,2)) / 2 blocks.  A non-integral value means no
    design of this type can exist and is reported loudly rather than
    rounded.
    """
    cross = comb(t.points, 2) - sum(c * comb(s, 2) for s, c in t.items)
    if cross % 2:
        raise ValueError(f"type {t} has an odd cross-pair count {cross}")
    return cross // 2


# ---------------------------------------------------------------------------
# feasibility for the 3^n u^1 family


@dataclass
class FeasibilityReport:
    n: int
    u: int
    feasible: bool
    checks: list  # (label, passed, detail)
    notes: list

    def failed(self) -> list:
        return [label for label, ok, _ in self.checks if not ok]

    def __bool__(self) -> bool:
        return self.feasible


def is_feasible(n: int, u: int) -> FeasibilityReport:
    """Necessary conditions for a design of type 3^n u^1.

    The three conditions are: at least four short holes, the long hole not
    more than 3(n-1)/2, and n(n + 2u - 1) divisible by 4.  They rule out
    n = 2 (mod 4) entirely and force the parity of u when n is odd.
    """
    checks = []
    checks.append(("n >= 4", n >= 4, f"n = {n}"))
    checks.append(("u >= 0", u >= 0, f"u = {u}"))
    checks.append(
        ("2u <= 3(n - 1)", 2 * u <= 3 * (n - 1), f"2u = {2 * u}, 3(n-1) = {3 * (n - 1)}")
    )
    prod = n * (n + 2 * u - 1)
    checks.append(
        ("n(n + 2u - 1) = 0 (mod 4)", prod % 4 == 0, f"n(n + 2u - 1) = {prod} = {prod % 4} (mod 4)")
    )
    notes = []
    if n % 4 == 2:
        notes.append("n = 2 (mod 4): no admissible u")
    elif n % 4 == 1:
        notes.append("n = 1 (mod 4): u must be even")
    elif n % 4 == 3:
        notes.append("n = 3 (mod 4): u must be odd")
    else:
        notes.append("n = 0 (mod 4): any u within the size bound")
    feasible = all(ok for _, ok, _ in checks)
    return FeasibilityReport(n=n, u=u, feasible=feasible, checks=checks, notes=notes)


# ---------------------------------------------------------------------------
# hole structures and designs


class HoleStructure:
    """A partition of the point set into nonempty, pairwise disjoint holes."""

    def __init__(self, holes: Iterable[Iterable[Point]]):
        normalized = []
        hole_of = {}
        for idx, hole in enumerate(holes):
            pts = tuple(sorted(hole, key=point_key))
            if not pts:
                raise ValueError("empty hole")
            for p in pts:
                if p in hole_of:
                    raise ValueError(f"point {p!r} appears in two holes")
                hole_of[p] = idx
            normalized.append(pts)
        if not normalized:
            raise ValueError("a hole structure needs at least one hole")
        # deterministic hole order: by (size, least point)
        order = sorted(range(len(normalized)), key=lambda i: (len(normalized[i]), block_sort_key(normalized[i])))
        self.holes = tuple(normalized[i] for i in order)
        self._hole_of = {}
        for idx, hole in enumerate(self.holes):
            for p in hole:
                self._hole_of[p] = idx
        self.points = tuple(sorted(hole_of, key=point_key))

    def hole_of(self, p: Point) -> int:
        return self._hole_of[p]

    def same_hole(self, p: Point, q: Point) -> bool:
        return self._hole_of[p] == self._hole_of[q]

    def type(self) -> TypeSpec:
        return TypeSpec.from_counts(Counter(len(h) for h in self.holes))

    def cross_pair_count(self) -> int:
        total = comb(len(self.points), 2)
        return total - sum(comb(len(h), 2) for h in self.holes)

    def __eq__(self, other):
        return isinstance(other, HoleStructure) and self.holes == other.holes

    def __hash__(self):
        return hash(self.holes)

    def __repr__(self):
        return f"HoleStructure({self.type()}, {len(self.points)} points)"


class Design:
    """A hole structure plus a block list (blocks stored canonically sorted)."""

    def __init__(self, holes, blocks: Iterable[Block]):
        self.structure = holes if isinstance(holes, HoleStructure) else HoleStructure(holes)
        self.blocks = tuple(
            sorted((canonical_block(tuple(b)) for b in blocks), key=block_sort_key)
        )

    @property
    def holes(self) -> tuple:
        return self.structure.holes

    @property
    def points(self) -> tuple:
        return self.structure.points

    @property
    def type(self) -> TypeSpec:
        return self.structure.type()

    def __eq__(self, other):
        return (
            isinstance(other, Design)
            and self.structure == other.structure
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.structure, self.blocks))

    def __repr__(self):
        return f"Design({self.type}, {len(self.blocks)} blocks)"


@dataclass
class VerificationReport:
    ok: bool
    type: TypeSpec
    block_count: int
    expected_blocks: int
    errors: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_design(design: Design, max_errors: int = 8) -> VerificationReport:
    """Certify a design from scratch.

    Checks block shape (4 points, 4 distinct holes, known points), then
    exact coverage: every cross-hole pair once per color, nothing covered
    twice, nothing missing.  Coverage is checked by counting, so the whole
    run is linear in blocks + points^2 and never trusts the construction
    that produced the design.
    """
    st = design.structure
    t = st.type()
    errors = []

    def note(msg):
        if len(errors) < max_errors:
            errors.append(msg)

    try:
        expected = expected_block_count(t)
    except ValueError as exc:
        # A parity-impossible type can still be reported on, with no blocks valid.
        return VerificationReport(False, t, len(design.blocks), -1, [str(exc)])

    seen = Counter()
    covered = Counter()
    for blk in design.blocks:
        if len(blk) != 4:
            note(f"block {blk!r} does not have 4 entries")
            continue
        if any(p not in st._hole_of for p in blk):
            note(f"block {blk!r} uses unknown points")
            continue
        holes_hit = {st.hole_of(p) for p in blk}
        if len(holes_hit) != 4:
            note(f"block {blk!r} meets a hole twice")
            continue
        key = canonical_block(blk)
        seen[key] += 1
        if seen[key] == 2:
            note(f"block {key!r} occurs more than once")
        for pr, color in block_pairs(blk):
            covered[(pr, color)] += 1

    for item, count in covered.items():
        if count > 1:
            note(f"pair {item[0]!r} covered {count} times in color {item[1]}")

    want_total = 3 * st.cross_pair_count()
    got_total = sum(covered.values())
    if got_total != want_total or len(covered) != want_total:
        # only hunt for the missing pairs when something is actually wrong
        if len(errors) < max_errors:
            missing = _first_missing_pairs(st, covered, max_errors - len(errors))
            for pr, color in missing:
                note(f"pair {pr!r} missing in color {color}")
        if not errors:
            note(f"covered {got_total} pair slots, expected {want_total}")

    if len(design.blocks) != expected:
        note(f"{len(design.blocks)} blocks, expected {expected}")

    ok = not errors and got_total == want_total and len(covered) == want_total
    return VerificationReport(ok, t, len(design.blocks), expected, errors)


def _first_missing_pairs(st: HoleStructure, covered: Counter, limit: int) -> list:
    out = []
    pts = st.points
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            if st.same_hole(p, q):
                continue
            for color in COLORS:
                if (pair(p, q), color) not in covered:
                    out.append((pair(p, q), color))
                    if len(out) >= limit:
                        return out
    return out


def relabel(design: Design, mapping=None) -> Design:
    """Rename points.  Default mapping: integers 0..P-1 in hole order.

    Constructions produce compound points (tuples); this flattens them so
    the result can be serialized and compared.
    """
    if mapping is None:
        mapping = {}
        counter = 0
        for hole in design.holes:
            for p in hole:
                mapping[p] = counter
                counter += 1
    holes = [[mapping[p] for p in hole] for hole in design.holes]
    blocks = [tuple(mapping[p] for p in blk) for blk in design.blocks]
    return Design(holes, blocks)
