"""Embedded catalog: every starter table plus the derived base designs.

Entries live as data files under hsd/data with a checksummed manifest.
Canonical ids are "<table>/<type>" ("A1/3^8 1^1", "C2/9^5 2^1", "S/3^5",
"GDD/3^4"); lookup also accepts a bare table name when unique ("Ex2.1")
and a bare type when unique ("3^13 16^1").

Statuses:
    verbatim  transcribed as printed
    repaired  minimal fix applied; the note quotes the defective line
    derived   regenerated content; the note names the generating oracle

The three repaired entries are A5/3^7 7^1 (missing commas), A5/3^11 7^1
(unclosed bracket), A6/3^9 8^1 (truncated label).  C2/9^5 2^1 is derived:
the printed table duplicates the u = 8 table and its real content is
unrecoverable, so a searched step-1 starter set stands in.
"""

from __future__ import annotations

import hashlib
import json
import time
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from hsd.algebra import GDD, verify_gdd
from hsd.core import Design, TypeSpec, parse_type, verify_design
from hsd.development import StarterSet, develop, orbit
from hsd.files import parse_design, parse_gdd, parse_starter

_PARSERS = {"starter": parse_starter, "design": parse_design, "gdd": parse_gdd}


def _data_dir():
    return resources.files("hsd") / "data"


@dataclass
class CatalogEntry:
    id: str
    table: str
    type: TypeSpec
    kind: str  # starter | design | gdd
    status: str  # verbatim | repaired | derived
    file: str
    sha256: str
    expected_blocks: object  # int, or None for gdd entries
    note: str = ""
    _obj: object = field(default=None, repr=False)

    def load(self):
        """Parse the data file (cached), checking its manifest checksum."""
        if self._obj is None:
            text = (_data_dir() / self.file).read_text()
            digest = hashlib.sha256(text.encode()).hexdigest()
            if digest != self.sha256:
                raise ValueError(
                    f"{self.file}: checksum mismatch "
                    f"(manifest {self.sha256[:12]}.., file {digest[:12]}..)"
                )
            self._obj = _PARSERS[self.kind](text)
        return self._obj

    def text(self) -> str:
        """Raw file content, checksum-checked against the manifest."""
        text = (_data_dir() / self.file).read_text()
        digest = hashlib.sha256(text.encode()).hexdigest()
        if digest != self.sha256:
            raise ValueError(f"{self.file}: checksum mismatch")
        return text

    def design(self) -> Design:
        """The entry as a concrete design (starters are developed)."""
        obj = self.load()
        if isinstance(obj, StarterSet):
            return develop(obj)
        if isinstance(obj, Design):
            return obj
        raise TypeError(f"{self.id} is a GDD, not a design")


_cache = None


def _entries() -> list:
    global _cache
    if _cache is None:
        manifest = json.loads((_data_dir() / "manifest.json").read_text())
        if manifest.get("format") != 1:
            raise ValueError(f"unsupported manifest format {manifest.get('format')!r}")
        _cache = [
            CatalogEntry(
                id=row["id"],
                table=row["table"],
                type=parse_type(row["type"]),
                kind=row["kind"],
                status=row["status"],
                file=row["file"],
                sha256=row["sha256"],
                expected_blocks=row["expected_block_count"],
                note=row["note"],
            )
            for row in manifest["entries"]
        ]
    return _cache


def catalog_ids() -> list:
    return [e.id for e in _entries()]


def catalog_list(table=None, status=None, kind=None) -> list:
    out = []
    for e in _entries():
        if table is not None and e.table != table:
            continue
        if status is not None and e.status != status:
            continue
        if kind is not None and e.kind != kind:
            continue
        out.append(e)
    return out


def catalog_get(key: str) -> CatalogEntry:
    """Resolve an id, a unique table name, or a unique type string."""
    entries = _entries()
    for e in entries:
        if e.id == key:
            return e
    hits = [e for e in entries if e.table == key]
    if len(hits) > 1:
        raise KeyError(f"{key!r} is ambiguous: " + ", ".join(e.id for e in hits))
    if hits:
        return hits[0]
    try:
        t = parse_type(key)
    except ValueError:
        t = None
    if t is not None:
        hits = [e for e in entries if e.type == t]
        if len(hits) > 1:
            # a GDD may share its type with a design of the same name
            non_gdd = [e for e in hits if e.kind != "gdd"]
            if len(non_gdd) == 1:
                return non_gdd[0]
            raise KeyError(f"{key!r} is ambiguous: " + ", ".join(e.id for e in hits))
        if hits:
            return hits[0]
    raise KeyError(f"no catalog entry {key!r}")


@dataclass
class CatalogRow:
    id: str
    status: str
    kind: str
    ok: bool
    blocks: int
    expected: object
    orbit_census: dict  # orbit length -> starter count (starter entries)
    errors: list
    elapsed: float


@dataclass
class CatalogReport:
    rows: list
    elapsed: float

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if not r.ok]


def verify_entry(e: CatalogEntry) -> CatalogRow:
    """Develop (if needed) and certify one entry from scratch."""
    t0 = time.time()
    errors = []
    census = {}
    if e.kind == "gdd":
        g = e.load()
        rep = verify_gdd(g)
        errors = list(rep.errors)
        blocks = len(g.blocks)
        if g.type != e.type:
            errors.append(f"manifest type {e.type}, file holds {g.type}")
    else:
        obj = e.load()
        if isinstance(obj, StarterSet):
            census = dict(
                sorted(Counter(len(orbit(s, obj.modulus, obj.step)) for s in obj.starters).items())
            )
            d = develop(obj)
        else:
            d = obj
        rep = verify_design(d)
        errors = list(rep.errors)
        blocks = len(d.blocks)
        if d.type != e.type:
            errors.append(f"manifest type {e.type}, entry develops to {d.type}")
        if blocks != e.expected_blocks:
            errors.append(f"{blocks} blocks, manifest expects {e.expected_blocks}")
    return CatalogRow(
        id=e.id,
        status=e.status,
        kind=e.kind,
        ok=not errors,
        blocks=blocks,
        expected=e.expected_blocks,
        orbit_census=census,
        errors=errors,
        elapsed=time.time() - t0,
    )


def catalog_verify_all(progress=None) -> CatalogReport:
    t0 = time.time()
    rows = []
    for e in _entries():
        row = verify_entry(e)
        rows.append(row)
        if progress is not None:
            progress(row)
    return CatalogReport(rows=rows, elapsed=time.time() - t0)
