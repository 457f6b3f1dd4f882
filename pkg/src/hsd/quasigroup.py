"""Schroder quasigroups and their correspondence with designs.

A Schroder quasigroup satisfies (x*y)*(y*x) = x.  An idempotent model of
order v is the same thing as a design of type 1^v: the block (a, b, c, d)
encodes a*b = c, b*a = d, c*d = a, d*c = b, and the identity makes the
four equations consistent.

Designs with bigger holes correspond to frames: partial tables where x*y
is defined exactly when x and y sit in different holes.  `check_frame`
re-derives a design's validity purely on the table side (each row and
column a permutation of the points outside its hole, plus the identity),
which gives an independent second route to verification.
"""

from __future__ import annotations

from collections import Counter

from hsd.core import Design, canonical_block, point_key


class Quasigroup:
    """Finite binary operation given by an explicit table."""

    def __init__(self, elements, table):
        self.elements = tuple(sorted(elements, key=point_key))
        self.table = dict(table)
        self._index = {e: i for i, e in enumerate(self.elements)}
        for (x, y), z in self.table.items():
            if x not in self._index or y not in self._index or z not in self._index:
                raise ValueError(f"table entry {(x, y)} -> {z!r} uses unknown elements")

    @staticmethod
    def from_rows(rows, elements=None):
        """Build from a square list of rows; elements default to 0..n-1."""
        n = len(rows)
        if elements is None:
            elements = list(range(n))
        table = {}
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("table is not square")
            for j, z in enumerate(row):
                table[(elements[i], elements[j])] = z
        return Quasigroup(elements, table)

    def __call__(self, x, y):
        return self.table[(x, y)]

    def __len__(self):
        return len(self.elements)

    def is_total(self):
        return len(self.table) == len(self.elements) ** 2

    def is_latin(self):
        """Every element once per row and once per column (total tables only)."""
        if not self.is_total():
            return False
        es = set(self.elements)
        for x in self.elements:
            if {self.table[(x, y)] for y in self.elements} != es:
                return False
            if {self.table[(y, x)] for y in self.elements} != es:
                return False
        return True

    def is_idempotent(self):
        return all(self.table.get((x, x)) == x for x in self.elements)

    def transpose(self):
        return Quasigroup(self.elements, {(y, x): z for (x, y), z in self.table.items()})


def check_schroder(q: Quasigroup):
    """Does (x*y)*(y*x) = x hold everywhere?  Returns (ok, counterexample)."""
    for x in q.elements:
        for y in q.elements:
            if q(q(x, y), q(y, x)) != x:
                return False, (x, y)
    return True, None


def check_weisner_pair(l1: Quasigroup, l2: Quasigroup):
    """Check the pairing condition linking two squares on the same elements.

    Whenever l1(x, y) = z and l2(x, y) = w, it must follow that
    l1(z, w) = x and l2(z, w) = y.  With l2 the transpose of l1 this is
    equivalent to l1 being Schroder.
    """
    if l1.elements != l2.elements:
        return False, None
    for x in l1.elements:
        for y in l1.elements:
            z, w = l1(x, y), l2(x, y)
            if l1(z, w) != x or l2(z, w) != y:
                return False, (x, y)
    return True, None


def design_to_quasigroup(design: Design) -> Quasigroup:
    """Idempotent Schroder quasigroup from a design with all holes size 1."""
    if any(len(h) != 1 for h in design.holes):
        raise ValueError(f"type {design.type} has holes larger than 1")
    table = {p: {} for p in design.points}
    for p in design.points:
        table[p][p] = p
    for a, b, c, d in design.blocks:
        for x, y, z in ((a, b, c), (b, a, d), (c, d, a), (d, c, b)):
            if y in table[x]:
                raise ValueError(f"product {x!r}*{y!r} defined twice")
            table[x][y] = z
    flat = {(x, y): z for x, row in table.items() for y, z in row.items()}
    q = Quasigroup(design.points, flat)
    if not q.is_total():
        raise ValueError("block list does not define a total operation")
    return q


def design_to_frame(design: Design) -> Quasigroup:
    """Partial Schroder quasigroup of any design: products only across holes.

    Raises on doubly-defined cells; completeness and the Latin/identity
    conditions are check_frame's business.
    """
    table = {}
    for a, b, c, d in design.blocks:
        for x, y, z in ((a, b, c), (b, a, d), (c, d, a), (d, c, b)):
            if (x, y) in table:
                raise ValueError(f"product {x!r}*{y!r} defined twice")
            table[(x, y)] = z
    return Quasigroup(design.points, table)


def check_frame(design: Design, max_errors: int = 8):
    """Table-side validity check, independent of verify_design.

    Builds the frame table from the blocks and checks, for every point x:
    row x and column x are defined exactly on the points outside x's hole
    and are permutations of those points; and for every defined cell,
    (x*y)*(y*x) = x.  Returns (ok, errors).
    """
    st = design.structure
    errors = []

    def note(msg):
        if len(errors) < max_errors:
            errors.append(msg)

    cells = Counter()
    table = {}
    for blk in design.blocks:
        if len(blk) != 4 or any(p not in st._hole_of for p in blk):
            note(f"malformed block {blk!r}")
            continue
        a, b, c, d = blk
        for x, y, z in ((a, b, c), (b, a, d), (c, d, a), (d, c, b)):
            cells[(x, y)] += 1
            table[(x, y)] = z
    for (x, y), k in cells.items():
        if k > 1:
            note(f"product {x!r}*{y!r} defined {k} times")

    pts = st.points
    for x in pts:
        outside = [q for q in pts if not st.same_hole(x, q)]
        want = set(outside)
        row = [table.get((x, y)) for y in outside]
        col = [table.get((y, x)) for y in outside]
        if set(row) != want:
            note(f"row {x!r} is not a permutation of the points outside its hole")
        if set(col) != want:
            note(f"column {x!r} is not a permutation of the points outside its hole")
    for (x, y), z in table.items():
        if st.same_hole(x, y):
            note(f"product {x!r}*{y!r} crosses no hole boundary")
            continue
        w = table.get((y, x))
        if w is None or table.get((z, w)) != x:
            note(f"identity fails at ({x!r}, {y!r})")
    ok = not errors
    return ok, errors


def quasigroup_to_design(q: Quasigroup) -> Design:
    """Inverse of design_to_quasigroup.  Requires an idempotent model."""
    if not q.is_total():
        raise ValueError("operation is partial")
    if not q.is_idempotent():
        raise ValueError("only idempotent models correspond to size-1 holes")
    blocks = set()
    for x in q.elements:
        for y in q.elements:
            if x == y:
                continue
            blocks.add(canonical_block((x, y, q(x, y), q(y, x))))
    holes = [[p] for p in q.elements]
    return Design(holes, blocks)
