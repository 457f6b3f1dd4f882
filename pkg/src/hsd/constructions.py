"""Recursive constructions: multiply, weighting over a GDD, filling holes.

All three return designs relabeled to integer points (intermediate points
are compound tuples and would not serialize).  None of them trusts its
inputs blindly: hole arithmetic is checked up front, and the caller is
expected to run verify_design on the output, which the test suite does.
"""

from __future__ import annotations

from collections import Counter, defaultdict

from hsd.algebra import GDD, mols_pair
from hsd.core import Design, TypeSpec, relabel


def _as_supplier(inners):
    if callable(inners):
        return inners
    table = dict(inners)
    return lambda key: table[key]


def multiply(design: Design, m: int) -> Design:
    """Blow every point up into m copies using an orthogonal square pair.

    Type h1^n1 h2^n2 ... becomes (m*h1)^n1 (m*h2)^n2 ...; each block turns
    into m^2 blocks.  Any orthogonal pair works, so m = 2 and 6 are
    impossible and other orders 2 (mod 4) are not built here (see mols).
    """
    if m == 1:
        return relabel(design)
    a, b = mols_pair(m)
    holes = [[(p, i) for p in hole for i in range(m)] for hole in design.holes]
    blocks = []
    for (w, x, y, z) in design.blocks:
        for i in range(m):
            for j in range(m):
                blocks.append(((w, i), (x, j), (y, a[i][j]), (z, b[i][j])))
    return relabel(Design(holes, blocks))


def weight_inflate(gdd: GDD, weights, supply) -> Design:
    """Weighting construction over a lambda = 1 GDD.

    Each point x becomes weight(x) copies; each GDD block is replaced by
    an ingredient design whose hole type is the multiset of its points'
    nonzero weights.  `supply` maps a TypeSpec to such a design (a dict or
    a callable); `weights` maps points to non-negative integers.
    Groups whose weight sums to zero disappear from the result.
    """
    if gdd.lam != 1:
        raise ValueError(f"weighting needs lambda = 1, got {gdd.lam}")
    w = dict(weights) if not callable(weights) else {p: weights(p) for p in gdd.points}
    for p in gdd.points:
        if w.get(p, 0) < 0:
            raise ValueError(f"negative weight on {p!r}")
    supply = _as_supplier(supply)

    holes = []
    for grp in gdd.groups:
        hole = [(p, i) for p in grp for i in range(w.get(p, 0))]
        if hole:
            holes.append(hole)

    blocks = []
    for blk in gdd.blocks:
        sizes = [w.get(p, 0) for p in blk]
        positive = [s for s in sizes if s]
        if not positive:
            continue
        spec = TypeSpec.of(*positive)
        ingredient = supply(spec)
        if ingredient.type != spec:
            raise ValueError(f"supplied type {ingredient.type}, block needs {spec}")
        # match ingredient holes to block points of the same weight
        by_size = defaultdict(list)
        for p, s in zip(blk, sizes):
            if s:
                by_size[s].append(p)
        mapping = {}
        used = Counter()
        for hole in ingredient.holes:
            owner = by_size[len(hole)][used[len(hole)]]
            used[len(hole)] += 1
            for i, q in enumerate(hole):
                mapping[q] = (owner, i)
        for ib in ingredient.blocks:
            blocks.append(tuple(mapping[q] for q in ib))
    return relabel(Design(holes, blocks))


def _fill(outer: Design, v: int, inner_by_size, keep_size) -> Design:
    inner_by_size = _as_supplier(inner_by_size)
    fresh = [("fill", i) for i in range(v)]
    kept = None
    if keep_size is not None:
        for idx, hole in enumerate(outer.holes):
            if len(hole) == keep_size:
                kept = idx
                break
        else:
            raise ValueError(f"no hole of size {keep_size} to keep")

    holes = []
    blocks = [tuple(blk) for blk in outer.blocks]
    long_hole = list(fresh)
    for idx, hole in enumerate(outer.holes):
        if idx == kept:
            long_hole.extend(hole)
            continue
        inner = inner_by_size(len(hole))
        inner_sizes = Counter(len(h) for h in inner.holes)
        if v and not inner_sizes.get(v):
            raise ValueError(f"inner design {inner.type} lacks a hole of size {v} to share")
        body = len(inner.points) - v
        if body != len(hole):
            raise ValueError(
                f"inner type {inner.type} fills {body} points, hole has {len(hole)}"
            )
        # map the inner's holes onto a partition of this hole, one hole of
        # size v onto the shared fresh points
        mapping = {}
        cursor = 0
        shared_done = False
        for ih in inner.holes:
            if v and not shared_done and len(ih) == v:
                for q, f in zip(ih, fresh):
                    mapping[q] = f
                shared_done = True
                continue
            part = hole[cursor : cursor + len(ih)]
            cursor += len(ih)
            for q, p in zip(ih, part):
                mapping[q] = p
            holes.append(list(part))
        for ib in inner.blocks:
            blocks.append(tuple(mapping[q] for q in ib))
    if long_hole:
        holes.append(long_hole)
    return relabel(Design(holes, blocks))


def fill_holes_a(outer: Design, v: int, inner: Design, keep_size=None) -> Design:
    """Fill every hole (except an optional kept one) with copies of `inner`.

    The inner design must consist of one hole of size v, shared across all
    copies as v fresh points, plus holes partitioning the outer hole.  The
    kept hole and the fresh points merge into the new long hole.
    """
    return _fill(outer, v, {len(h): inner for h in outer.holes}, keep_size)


def fill_holes_b(outer: Design, v: int, inner_s: Design, inner_t: Design, keep_size) -> Design:
    """Like fill_holes_a but with two hole sizes to fill.

    inner_s fills the big holes, inner_t the one odd-sized hole; both share
    the same v fresh points.  Degenerate inner designs with a single hole
    and no blocks are allowed (they leave their hole as is).
    """
    sizes = {}
    body = lambda d: len(d.points) - v  # noqa: E731
    sizes[body(inner_s)] = inner_s
    sizes[body(inner_t)] = inner_t
    return _fill(outer, v, sizes, keep_size)
