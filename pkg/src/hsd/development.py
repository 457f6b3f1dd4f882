"""Cyclic development of starter blocks over Z_g with fixed infinite points.

A starter set for type h^n u^1 lives on Z_g (g = h*n) plus u labels
"x1".."xu".  The cyclic holes are {i, i+n, ..., i+(h-1)n} for 0 <= i < n,
and the labels form the long hole.  Developing means adding the step to
every finite entry of every starter, modulo g, until the blocks repeat
(up to block equivalence, so some starters have short orbits).

For step 1 there is an arithmetic shortcut, `difference_census`: a starter
set develops into a valid design exactly when, in every color, the signed
differences of its finite pairs hit each cross-hole difference class once,
and every label occurs in exactly one starter.  The census never builds
the design, which makes it a useful independent check on `develop`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from hsd.core import (
    COLORS,
    Design,
    TypeSpec,
    block_pairs,
    block_sort_key,
    canonical_block,
    is_infinite,
    uniform_type,
)


@dataclass(frozen=True)
class StarterSet:
    """Starters plus the geometry needed to develop them."""

    modulus: int
    hole_size: int
    step: int
    infinite: tuple  # x-labels, the long hole (may be empty)
    starters: tuple  # blocks over Z_modulus and the labels

    def __post_init__(self):
        g, h = self.modulus, self.hole_size
        if g < 1 or h < 1 or g % h:
            raise ValueError(f"modulus {g} is not a multiple of hole size {h}")
        if self.step < 1 or g % self.step:
            raise ValueError(f"step {self.step} does not divide modulus {g}")
        labels = set(self.infinite)
        if len(labels) != len(self.infinite):
            raise ValueError("repeated infinite label")
        for blk in self.starters:
            if len(blk) != 4:
                raise ValueError(f"starter {blk!r} does not have 4 entries")
            for p in blk:
                if is_infinite(p):
                    if p not in labels:
                        raise ValueError(f"starter {blk!r} uses undeclared label {p}")
                elif not isinstance(p, int) or not (0 <= p < g):
                    raise ValueError(f"starter entry {p!r} outside Z_{g}")

    @property
    def n(self) -> int:
        return self.modulus // self.hole_size

    @property
    def u(self) -> int:
        return len(self.infinite)

    @property
    def type(self) -> TypeSpec:
        return uniform_type(self.n, self.u, self.hole_size)

    def holes(self) -> list:
        g, n, h = self.modulus, self.n, self.hole_size
        out = [[i + j * n for j in range(h)] for i in range(n)]
        if self.infinite:
            out.append(list(self.infinite))
        return out

    def same_hole_differences(self) -> set:
        """Nonzero differences internal to the cyclic holes."""
        g, n, h = self.modulus, self.n, self.hole_size
        return {(j * n) % g for j in range(1, h)}


def shift_block(block, amount: int, modulus: int):
    return tuple(p if is_infinite(p) else (p + amount) % modulus for p in block)


def orbit(block, modulus: int, step: int = 1) -> list:
    """Distinct translates of a block under repeated shifting.

    Stops as soon as a translate is equivalent to the starter, so short
    orbits come out short.  The length always divides modulus / step.
    """
    out = []
    seen = set()
    cur = tuple(block)
    while True:
        key = canonical_block(cur)
        if key in seen:
            break
        seen.add(key)
        out.append(cur)
        cur = shift_block(cur, step, modulus)
    return out


def orbit_length(block, modulus: int, step: int = 1) -> int:
    return len(orbit(block, modulus, step))


def develop(ss: StarterSet) -> Design:
    """Expand a starter set into a full design.

    Orbits are concatenated as-is; if two starters generate the same orbit
    the duplicate blocks survive into the design and verification reports
    them, rather than being papered over here.
    """
    blocks = []
    for starter in ss.starters:
        blocks.extend(orbit(starter, ss.modulus, ss.step))
    return Design(ss.holes(), blocks)


@dataclass
class CensusReport:
    ok: bool
    starters: int
    errors: list = field(default_factory=list)
    per_color: dict = field(default_factory=dict)  # color -> Counter of differences

    def __bool__(self) -> bool:
        return self.ok


def difference_census(ss: StarterSet, max_errors: int = 8) -> CensusReport:
    """Validate a step-1 starter set by difference counting alone.

    In every color the finite pairs of the starters must realize each
    difference in Z_g minus the hole differences exactly once (counting a
    pair {p, q} as both p-q and q-p), and each label must appear in
    exactly one starter.  For step 1 this is equivalent to developing and
    verifying the design; larger steps need the real expansion and are
    refused here.
    """
    if ss.step != 1:
        raise ValueError(f"difference census only applies to step 1, got step {ss.step}")
    g = ss.modulus
    same = ss.same_hole_differences()
    target = set(range(1, g)) - same
    errors = []

    def note(msg):
        if len(errors) < max_errors:
            errors.append(msg)

    label_seen = Counter()
    per_color = {c: Counter() for c in COLORS}
    for starter in ss.starters:
        if len(set(starter)) != 4:
            note(f"starter {starter!r} repeats an entry")
            continue
        labels_here = [p for p in starter if is_infinite(p)]
        if len(labels_here) > 1:
            note(f"starter {starter!r} holds two long-hole points")
        for lab in labels_here:
            label_seen[lab] += 1
        for (p, q), color in block_pairs(starter):
            if is_infinite(p) or is_infinite(q):
                continue
            per_color[color][(p - q) % g] += 1
            per_color[color][(q - p) % g] += 1

    for lab in ss.infinite:
        if label_seen[lab] != 1:
            note(f"label {lab} appears in {label_seen[lab]} starters, wants 1")

    for color in COLORS:
        got = per_color[color]
        for d in sorted(target):
            c = got.get(d, 0)
            if c != 1:
                note(f"color {color}: difference {d} realized {c} times, wants 1")
        for d in sorted(set(got) - target):
            kind = "zero" if d == 0 else "same-hole" if d in same else "alien"
            note(f"color {color}: {kind} difference {d} realized {got[d]} times")

    ok = not errors
    if errors and len(errors) >= max_errors:
        errors.append("... further problems suppressed")
    return CensusReport(ok=ok, starters=len(ss.starters), errors=errors, per_color=per_color)
