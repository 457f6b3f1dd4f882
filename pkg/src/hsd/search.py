"""Backtracking searches: whole designs, starter sets, and small GDDs.

`search_direct` is an exact-cover search over canonical candidate blocks:
items are (cross pair, color) slots, every slot must be covered exactly
once.  It is exhaustive, so status "none" is a nonexistence certificate;
"timeout" means the budget ran out and says nothing.

`search_starters` works over Z_g at step 1 and tracks signed difference
classes per color instead of pairs, which cuts the state down by a factor
of g.  Representatives are normalized (first entry 0, branch class in the
second slot, labels in the third), so each orbit class is tried once.

`search_orbits` is the step-k cousin: exact cover whose candidates are
whole shift orbits, for types whose modulus rules step 1 out.  Both only
reach shift-invariant designs.  `search_climb` drops completeness
altogether and hill-climbs with exact-cover repair; it is the tool of last
resort for small types that exist but carry no usable symmetry.

Nothing here consults feasibility or the catalog; callers that want the
cheap answer first should ask those directly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from hsd.algebra import GDD
from hsd.core import COLORS, Design, TypeSpec, block_pairs, block_sort_key, pair, point_key
from hsd.development import StarterSet, develop, orbit

FOUND = "found"
NONE = "none"
TIMEOUT = "timeout"


@dataclass
class SearchResult:
    status: str
    design: Optional[Design] = None
    starter_set: Optional[StarterSet] = None
    gdd: Optional[GDD] = None
    nodes: int = 0
    elapsed: float = 0.0

    def __bool__(self):
        return self.status == FOUND


class Budget:
    """Wall-clock deadline plus node counting, shared by all searches."""

    def __init__(self, time_limit=None, node_limit=None):
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.node_limit = node_limit
        self.nodes = 0
        self.started = time.monotonic()

    def tick(self) -> bool:
        """Count a node; True means keep going."""
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            return False
        if self.deadline is not None and not self.nodes % 256:
            return self.deadline > time.monotonic()
        return True

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started


class ExactCover:
    """Cover every item exactly once using the given candidate item-sets."""

    def __init__(self, n_items: int, cand_items: list):
        self.cand_items = cand_items
        self.item_cands = [[] for _ in range(n_items)]
        for ci, items in enumerate(cand_items):
            for it in items:
                self.item_cands[it].append(ci)
        self.n_items = n_items

    def solve(self, rng=None, budget: Optional[Budget] = None, order: str = "mrv"):
        """Returns (status, list of candidate indices or None).

        order "mrv" picks the scarcest uncovered item, "lex" the lowest
        numbered one; lex plus shuffled candidates behaves better on the
        denser design searches, mrv on thin ones.
        """
        alive = bytearray([1]) * len(self.cand_items)
        count = [len(l) for l in self.item_cands]
        covered = bytearray(self.n_items)
        budget = budget or Budget()
        chosen: list = []
        uncovered = self.n_items
        use_mrv = order == "mrv"

        def kill(ci, trail):
            alive[ci] = 0
            trail.append(ci)
            for it in self.cand_items[ci]:
                count[it] -= 1

        def revive(ci):
            alive[ci] = 1
            for it in self.cand_items[ci]:
                count[it] += 1

        def place(ci):
            nonlocal uncovered
            trail = []
            for it in self.cand_items[ci]:
                covered[it] = 1
                uncovered -= 1
                for other in self.item_cands[it]:
                    if alive[other]:
                        kill(other, trail)
            chosen.append(ci)
            return trail

        def unplace(ci, trail):
            nonlocal uncovered
            chosen.pop()
            for other in reversed(trail):
                revive(other)
            for it in self.cand_items[ci]:
                covered[it] = 0
                uncovered += 1

        def descend():
            if uncovered == 0:
                return FOUND
            if not budget.tick():
                return TIMEOUT
            best, best_count = -1, None
            for it in range(self.n_items):
                if not covered[it]:
                    c = count[it]
                    if c == 0:
                        return NONE
                    if best_count is None or (use_mrv and c < best_count):
                        best, best_count = it, c
                        if use_mrv and c == 1:
                            break
            options = [ci for ci in self.item_cands[best] if alive[ci]]
            if rng is not None:
                rng.shuffle(options)
            saw_timeout = False
            for ci in options:
                trail = place(ci)
                status = descend()
                if status == FOUND:
                    return FOUND  # keep placements for the caller
                unplace(ci, trail)
                if status == TIMEOUT:
                    saw_timeout = True
                    break
            return TIMEOUT if saw_timeout else NONE

        status = descend()
        return status, (list(chosen) if status == FOUND else None)


def _holes_for(t: TypeSpec) -> list:
    holes, next_pt = [], 0
    for size in t.sizes():
        holes.append(list(range(next_pt, next_pt + size)))
        next_pt += size
    return holes


def _with_restarts(run, seed, restarts, time_limit):
    """Run a seeded search with randomized restarts.

    A "none" from any try is final (exhaustion does not depend on the
    candidate order); "found" is final; only timeouts trigger another try
    with the next seed.
    """
    overall = Budget(time_limit)
    total_nodes = 0
    result = None
    for i in range(max(1, restarts)):
        remaining = None
        if overall.deadline is not None:
            remaining = overall.deadline - time.monotonic()
            if remaining <= 0:
                break
        result = run(seed + i, remaining)
        total_nodes += result.nodes
        if result.status != TIMEOUT:
            break
    if result is None:
        result = SearchResult(TIMEOUT)
    result.nodes = total_nodes
    result.elapsed = overall.elapsed
    return result


def search_direct(
    t: TypeSpec,
    seed: int = 0,
    time_limit=None,
    node_limit=None,
    restarts: int = 1,
    order: str = "lex",
) -> SearchResult:
    """Exhaustive exact-cover search for a design of the given type.

    Meant for small types (say up to ~20 points); the candidate list grows
    like points^4.  "none" is only returned when the space was fully
    exhausted within budget.  With restarts > 1 the search reruns with
    fresh candidate orderings whenever a try burns through node_limit.
    """
    if restarts > 1:
        return _with_restarts(
            lambda s, tl: search_direct(t, s, tl, node_limit, order=order),
            seed,
            restarts,
            time_limit,
        )
    holes = _holes_for(t)
    hole_of = {}
    for hi, hole in enumerate(holes):
        for p in hole:
            hole_of[p] = hi
    points = sorted(hole_of)

    item_id = {}
    for p, q in combinations(points, 2):
        if hole_of[p] != hole_of[q]:
            for c in COLORS:
                item_id[(pair(p, q), c)] = len(item_id)

    cand_blocks, cand_items = [], []
    for quad in combinations(points, 4):
        if len({hole_of[p] for p in quad}) != 4:
            continue
        a = quad[0]
        for rest in (
            (quad[1], quad[2], quad[3]),
            (quad[1], quad[3], quad[2]),
            (quad[2], quad[1], quad[3]),
            (quad[2], quad[3], quad[1]),
            (quad[3], quad[1], quad[2]),
            (quad[3], quad[2], quad[1]),
        ):
            blk = (a,) + rest
            cand_blocks.append(blk)
            cand_items.append(tuple(item_id[k] for k in block_pairs(blk)))

    budget = Budget(time_limit, node_limit)
    rng = random.Random(seed)
    status, picked = ExactCover(len(item_id), cand_items).solve(rng, budget, order)
    design = None
    if status == FOUND:
        design = Design(holes, [cand_blocks[ci] for ci in picked])
    return SearchResult(status, design=design, nodes=budget.nodes, elapsed=budget.elapsed)


def search_gdd(
    t: TypeSpec, seed: int = 0, time_limit=None, node_limit=None, order: str = "mrv"
) -> SearchResult:
    """Exact-cover search for a 4-GDD (lambda = 1) of the given group type."""
    groups = _holes_for(t)
    group_of = {}
    for gi, grp in enumerate(groups):
        for p in grp:
            group_of[p] = gi
    points = sorted(group_of)

    item_id = {}
    for p, q in combinations(points, 2):
        if group_of[p] != group_of[q]:
            item_id[(p, q)] = len(item_id)

    cand_blocks, cand_items = [], []
    for quad in combinations(points, 4):
        if len({group_of[p] for p in quad}) != 4:
            continue
        cand_blocks.append(quad)
        cand_items.append(
            tuple(item_id[(p, q)] for p, q in combinations(quad, 2))
        )

    budget = Budget(time_limit, node_limit)
    rng = random.Random(seed)
    status, picked = ExactCover(len(item_id), cand_items).solve(rng, budget, order)
    gdd = None
    if status == FOUND:
        gdd = GDD(groups, [cand_blocks[ci] for ci in picked], lam=1)
    return SearchResult(status, gdd=gdd, nodes=budget.nodes, elapsed=budget.elapsed)


def search_climb(
    t: TypeSpec,
    seed: int = 0,
    time_limit=None,
    iter_limit=None,
) -> SearchResult:
    """Stochastic design finder: min-conflict block insertion with eviction,
    plus exact-cover repair of the residue when the climb plateaus.

    Finds designs that stall the exhaustive search, but can never prove
    nonexistence: the only statuses are "found" and "timeout".
    """
    holes = _holes_for(t)
    hole_of = {}
    for hi, hole in enumerate(holes):
        for p in hole:
            hole_of[p] = hi
    points = sorted(hole_of)

    item_id = {}
    for p, q in combinations(points, 2):
        if hole_of[p] != hole_of[q]:
            for c in COLORS:
                item_id[(pair(p, q), c)] = len(item_id)
    n_items = len(item_id)

    cand_blocks, cand_items = [], []
    by_item = [[] for _ in range(n_items)]
    for quad in combinations(points, 4):
        if len({hole_of[p] for p in quad}) != 4:
            continue
        a = quad[0]
        for rest in (
            (quad[1], quad[2], quad[3]),
            (quad[1], quad[3], quad[2]),
            (quad[2], quad[1], quad[3]),
            (quad[2], quad[3], quad[1]),
            (quad[3], quad[1], quad[2]),
            (quad[3], quad[2], quad[1]),
        ):
            blk = (a,) + rest
            ci = len(cand_blocks)
            cand_blocks.append(blk)
            items = tuple(item_id[k] for k in block_pairs(blk))
            cand_items.append(items)
            for it in items:
                by_item[it].append(ci)

    rng = random.Random(seed)
    budget = Budget(time_limit, iter_limit)
    owner = [-1] * n_items  # covering candidate per item, -1 if none
    placed: set = set()
    missing = list(range(n_items))
    out_of_budget = False

    def evict(prev):
        placed.discard(prev)
        for kt in cand_items[prev]:
            if owner[kt] == prev:
                owner[kt] = -1
                missing.append(kt)

    def climb(steps):
        # Insert a block on a random missing item, evicting as few placed
        # blocks as possible; ties break at random.
        nonlocal missing, out_of_budget
        k = 0
        while missing and k < steps:
            k += 1
            if not budget.tick():
                out_of_budget = True
                return
            it = missing[rng.randrange(len(missing))]
            if owner[it] != -1:
                missing.remove(it)
                continue
            best, best_evictions = [], None
            for cand in by_item[it]:
                hit = set()
                for jt in cand_items[cand]:
                    prev = owner[jt]
                    if prev != -1:
                        hit.add(prev)
                e = len(hit)
                if best_evictions is None or e < best_evictions:
                    best_evictions, best = e, [cand]
                elif e == best_evictions:
                    best.append(cand)
            ci = best[rng.randrange(len(best))]
            for jt in cand_items[ci]:
                prev = owner[jt]
                if prev != -1 and prev != ci:
                    evict(prev)
            for jt in cand_items[ci]:
                owner[jt] = ci
            placed.add(ci)
            missing = [m for m in missing if owner[m] == -1]

    def repair(node_budget):
        # Drop a few blocks, then ask the exhaustive solver to recover the
        # freed items exactly.  Returns True when everything got covered.
        nonlocal missing
        if placed:
            drop = min(len(placed), 4 + rng.randrange(8))
            for prev in rng.sample(sorted(placed), drop):
                evict(prev)
        missing = [m for m in missing if owner[m] == -1]
        free = sorted(set(missing))
        remap = {it: i for i, it in enumerate(free)}
        free_set = set(free)
        sub_cands, sub_real = [], []
        considered = set()
        for it in free:
            for ci in by_item[it]:
                if ci in considered:
                    continue
                considered.add(ci)
                its = cand_items[ci]
                if all(jt in free_set for jt in its):
                    sub_cands.append(tuple(remap[jt] for jt in its))
                    sub_real.append(ci)
        status, chosen = ExactCover(len(free), sub_cands).solve(
            random.Random(rng.randrange(1 << 30)), Budget(None, node_budget), "mrv"
        )
        if status == FOUND:
            for sci in chosen:
                real = sub_real[sci]
                for jt in cand_items[real]:
                    owner[jt] = real
                placed.add(real)
            missing = [m for m in missing if owner[m] == -1]
        return not missing

    climb(40000)
    while missing and not out_of_budget:
        if repair(30000):
            break
        climb(2000)

    if missing:
        return SearchResult(TIMEOUT, nodes=budget.nodes, elapsed=budget.elapsed)
    design = Design(holes, [cand_blocks[ci] for ci in placed])
    return SearchResult(FOUND, design=design, nodes=budget.nodes, elapsed=budget.elapsed)


def search_orbits(
    n: int,
    u: int,
    hole_size: int = 3,
    step: int = 1,
    seed: int = 0,
    time_limit=None,
    node_limit=None,
    restarts: int = 1,
) -> SearchResult:
    """Exact cover at orbit granularity: candidates are whole orbits of a
    block under x -> x + step (mod hole_size * n), so one decision commits
    orbit-length blocks at once.

    Only designs invariant under the shift are reachable, which is the
    point: the tree is tiny, and small types that grind the block-level
    searches often carry exactly this symmetry.  A "none" here therefore
    says nothing about existence at large.  Short orbits are enumerated
    like any other candidate, so even-modulus types are fine.
    """
    if restarts > 1:
        return _with_restarts(
            lambda s, tl: search_orbits(n, u, hole_size, step, s, tl, node_limit),
            seed,
            restarts,
            time_limit,
        )
    g = hole_size * n
    if not 0 < step <= g or g % step:
        raise ValueError(f"step {step} does not divide the modulus {g}")
    labels = tuple(f"x{i + 1}" for i in range(u))
    holes = [[i + j * n for j in range(hole_size)] for i in range(n)]
    if labels:
        holes.append(list(labels))
    hole_of = {}
    for hi, hole in enumerate(holes):
        for p in hole:
            hole_of[p] = hi
    points = sorted(hole_of, key=point_key)

    item_id = {}
    for p, q in combinations(points, 2):
        if hole_of[p] != hole_of[q]:
            for c in COLORS:
                item_id[(pair(p, q), c)] = len(item_id)

    starters, orbit_items = [], []
    seen = set()
    for quad in combinations(points, 4):
        if len({hole_of[p] for p in quad}) != 4:
            continue
        a = quad[0]
        for rest in (
            (quad[1], quad[2], quad[3]),
            (quad[1], quad[3], quad[2]),
            (quad[2], quad[1], quad[3]),
            (quad[2], quad[3], quad[1]),
            (quad[3], quad[1], quad[2]),
            (quad[3], quad[2], quad[1]),
        ):
            blk = (a,) + rest
            orb = orbit(blk, g, step)
            rep = min(orb, key=block_sort_key)
            if rep in seen:
                continue
            seen.add(rep)
            items = [item_id[k] for b in orb for k in block_pairs(b)]
            if len(set(items)) != len(items):
                continue  # the orbit steps on itself
            starters.append(rep)
            orbit_items.append(tuple(items))

    budget = Budget(time_limit, node_limit)
    rng = random.Random(seed)
    status, picked = ExactCover(len(item_id), orbit_items).solve(rng, budget, "mrv")
    design = None
    ss = None
    if status == FOUND:
        ss = StarterSet(
            modulus=g,
            hole_size=hole_size,
            step=step,
            infinite=labels,
            starters=tuple(sorted((starters[ci] for ci in picked), key=block_sort_key)),
        )
        design = develop(ss)
    return SearchResult(
        status, design=design, starter_set=ss, nodes=budget.nodes, elapsed=budget.elapsed
    )


def _class_rep(d: int, g: int) -> int:
    d %= g
    return min(d, g - d)


def search_starters(
    n: int,
    u: int,
    hole_size: int = 3,
    seed: int = 0,
    time_limit=None,
    node_limit=None,
    restarts: int = 1,
) -> SearchResult:
    """Backtracking search for a step-1 starter set of type h^n u^1.

    Covers signed difference classes per color.  Normal form per orbit:
    first entry 0, the branched color-1 class in the second slot, labels
    used in a fixed order and only in the third slot.  Exhaustive within
    budget, so "none" certifies that no step-1 starter set exists.
    """
    if restarts > 1:
        return _with_restarts(
            lambda s, tl: search_starters(n, u, hole_size, s, tl, node_limit),
            seed,
            restarts,
            time_limit,
        )
    g = hole_size * n
    same = {(j * n) % g for j in range(1, hole_size)}
    if g % 2 == 0 and (g // 2) not in same:
        # any step-1 slot of difference g/2 covers its pairs twice over
        return SearchResult(NONE)

    reps = [d for d in range(1, g // 2 + 1) if d not in same and d != g - d]
    unc = {c: set(reps) for c in COLORS}
    labels = [f"x{i + 1}" for i in range(u)]
    budget = Budget(time_limit, node_limit)
    rng = random.Random(seed)
    chosen: list = []

    def descend(labels_left: int):
        k1 = len(unc[1])
        if k1 == 0:
            return FOUND if labels_left == 0 else NONE
        if labels_left > k1 or (k1 - labels_left) % 2:
            return NONE
        if not budget.tick():
            return TIMEOUT
        d_star = min(unc[1])
        cands = []
        if labels_left:
            for p2 in (d_star, g - d_star):
                for p4 in range(g):
                    if p4 == 0 or p4 == p2:
                        continue
                    r2, r3 = _class_rep(p4 - p2, g), _class_rep(p4, g)
                    if r2 in unc[2] and r3 in unc[3]:
                        cands.append((p2, None, p4, (d_star,), (r2,), (r3,)))
        for p3 in range(g):
            if p3 == 0 or p3 == d_star:
                continue
            r2a = _class_rep(p3, g)
            if r2a not in unc[2]:
                continue
            r3b = _class_rep(p3 - d_star, g)
            if r3b not in unc[3]:
                continue
            for p4 in range(g):
                if p4 == 0 or p4 == d_star or p4 == p3:
                    continue
                r1b = _class_rep(p4 - p3, g)
                if r1b == d_star or r1b not in unc[1]:
                    continue
                r2b = _class_rep(p4 - d_star, g)
                if r2b == r2a or r2b not in unc[2]:
                    continue
                r3a = _class_rep(p4, g)
                if r3a == r3b or r3a not in unc[3]:
                    continue
                cands.append((d_star, p3, p4, (d_star, r1b), (r2a, r2b), (r3b, r3a)))
        rng.shuffle(cands)
        saw_timeout = False
        for p2, p3, p4, c1, c2, c3 in cands:
            for r in c1:
                unc[1].remove(r)
            for r in c2:
                unc[2].remove(r)
            for r in c3:
                unc[3].remove(r)
            if p3 is None:
                block = (0, p2, labels[len(labels) - labels_left], p4)
                chosen.append(block)
                status = descend(labels_left - 1)
            else:
                block = (0, p2, p3, p4)
                chosen.append(block)
                status = descend(labels_left)
            if status == FOUND:
                return FOUND  # keep the chosen stack intact
            chosen.pop()
            for r in c1:
                unc[1].add(r)
            for r in c2:
                unc[2].add(r)
            for r in c3:
                unc[3].add(r)
            if status == TIMEOUT:
                saw_timeout = True
                break
        return TIMEOUT if saw_timeout else NONE

    status = descend(u)
    ss = None
    if status == FOUND:
        ss = StarterSet(
            modulus=g,
            hole_size=hole_size,
            step=1,
            infinite=tuple(labels),
            starters=tuple(chosen),
        )
    return SearchResult(status, starter_set=ss, nodes=budget.nodes, elapsed=budget.elapsed)
