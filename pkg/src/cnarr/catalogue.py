"""Catalogue of rank-3 simplicial arrangements stored as exact JSON data."""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .exactnum import QQ, NumberField
from .omcore import Arrangement

SCHEMA = "1"
FAMILIES = ("F1", "F2", "F3", "sporadic")
VERDICTS = ("always", "sometimes", "never")
_NAME_RE = re.compile(r"A\((\d+),(\d+)\)(?:_(\d+))?$")


class CatalogueError(ValueError):
    pass


def default_path() -> str:
    env = os.environ.get("CATALOGUE_PATH")
    if env:
        return env
    return str(resources.files("cnarr").joinpath("data/catalogue.json"))


def parse_name(name: str) -> tuple:
    mt = _NAME_RE.match(name)
    if not mt:
        raise CatalogueError(f"malformed arrangement name {name!r}")
    return int(mt.group(1)), int(mt.group(2)), int(mt.group(3)) if mt.group(3) else None


@dataclass
class CatalogueEntry:
    name: str
    family: Optional[str]
    field_id: str
    normals: list  # raw coefficient strings: [normal][coordinate][power]
    expected_regions: int
    expected_classification: Optional[dict]
    field: NumberField = dc_field(repr=False, default=None)
    _arr: Optional[Arrangement] = dc_field(repr=False, default=None)

    @property
    def m(self) -> int:
        return len(self.normals)

    @property
    def arrangement(self) -> Arrangement:
        if self._arr is None:
            normals = tuple(
                tuple(self.field.element([Fraction(c) for c in coord]) for coord in n) for n in self.normals
            )
            self._arr = Arrangement(self.name, self.field, normals, self.expected_regions)
        return self._arr


def _parse_rational(s, where: str) -> Fraction:
    if not isinstance(s, str):
        raise CatalogueError(f"{where}: coefficient must be a string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise CatalogueError(f"{where}: malformed coefficient {s!r}") from None


def build_fields(raw: dict) -> dict:
    fields = {}
    for fid, rec in raw.items():
        mp = [_parse_rational(c, f"field {fid}") for c in rec["minpoly"]]
        lo, hi = (_parse_rational(c, f"field {fid}") for c in rec["root_interval"])
        if fid == "QQ":
            fields[fid] = QQ
        else:
            fields[fid] = NumberField(fid, mp, (lo, hi))
    return fields


def parse_catalogue(text: str, validate: bool = True) -> tuple:
    """Return (fields_raw, entries) from catalogue JSON text."""
    if not text.strip():
        return {}, []
    doc = json.loads(text)
    fields_raw = doc.get("fields", {})
    fields = build_fields(fields_raw)
    entries = []
    names = set()
    for e in doc.get("entries", []):
        name = e["name"]
        if name in names:
            raise CatalogueError(f"duplicate entry {name}")
        names.add(name)
        fid = e["field"]
        if fid not in fields:
            raise CatalogueError(f"{name}: unknown field id {fid!r}")
        fam = e.get("family")
        if fam is not None and fam not in FAMILIES:
            raise CatalogueError(f"{name}: unknown family {fam!r}")
        deg = fields[fid].degree
        for n in e["normals"]:
            if len(n) != 3:
                raise CatalogueError(f"{name}: normal {n!r} is not a 3-vector")
            for coord in n:
                if len(coord) != deg:
                    raise CatalogueError(f"{name}: coefficient vector of wrong degree")
                for c in coord:
                    _parse_rational(c, name)
        cls = e.get("expected_classification")
        if cls is not None and cls.get("verdict") not in VERDICTS:
            raise CatalogueError(f"{name}: bad verdict")
        entry = CatalogueEntry(
            name=name,
            family=fam,
            field_id=fid,
            normals=e["normals"],
            expected_regions=int(e["expected_regions"]),
            expected_classification=cls,
            field=fields[fid],
        )
        m, r, _ = parse_name(name)
        if m != entry.m or r != entry.expected_regions:
            raise CatalogueError(f"{name}: name does not match data")
        if validate:
            entry.arrangement
        entries.append(entry)
    return fields_raw, entries


def load_catalogue(path: Optional[str] = None, validate: bool = True) -> list:
    path = path or default_path()
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    _, entries = parse_catalogue(text, validate=validate)
    return entries


def load_catalogue_with_fields(path: Optional[str] = None, validate: bool = False) -> tuple:
    path = path or default_path()
    with open(path, encoding="utf-8") as fh:
        return parse_catalogue(fh.read(), validate=validate)


def _j(v) -> str:
    return json.dumps(v, ensure_ascii=False)


def serialize_catalogue(fields_raw: dict, entries: list) -> str:
    """Canonical text form; parse_catalogue followed by this is the identity on canonical files."""
    out = ["{", f' "schema": {_j(SCHEMA)},', ' "fields": {']
    items = list(fields_raw.items())
    for k, (fid, rec) in enumerate(items):
        comma = "," if k + 1 < len(items) else ""
        out.append(f'  {_j(fid)}: {{"minpoly": {_j(rec["minpoly"])}, "root_interval": {_j(rec["root_interval"])}}}{comma}')
    out.append(" },")
    out.append(' "entries": [')
    for k, e in enumerate(entries):
        out.append("  {")
        out.append(f'   "name": {_j(e.name)},')
        out.append(f'   "family": {_j(e.family)},')
        out.append(f'   "field": {_j(e.field_id)},')
        out.append(f'   "expected_regions": {_j(e.expected_regions)},')
        out.append(f'   "expected_classification": {_j(e.expected_classification)},')
        out.append('   "normals": [')
        for t, n in enumerate(e.normals):
            comma = "," if t + 1 < len(e.normals) else ""
            out.append(f"    {_j(n)}{comma}")
        out.append("   ]")
        out.append("  }" + ("," if k + 1 < len(entries) else ""))
    out.append(" ]")
    out.append("}")
    return "\n".join(out) + "\n"


def find_entry(entries: list, name: str) -> CatalogueEntry:
    for e in entries:
        if e.name == name:
            return e
    raise KeyError(name)


def near_pencil(m: int) -> Arrangement:
    if m < 3:
        raise ValueError("near-pencil needs m >= 3")
    normals = [(1, k, 0) for k in range(m - 1)] + [(0, 0, 1)]
    return Arrangement(f"F1({m})", QQ, tuple(tuple(QQ(c) for c in n) for n in normals), 4 * (m - 1))


def arrangement_from_file(path: str) -> Arrangement:
    """Read a user arrangement: JSON {"name", optional "field" record, "normals"}.

    Rational normals may be given directly as strings or numbers per coordinate.
    """
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    name = doc.get("name", os.path.basename(path))
    frec = doc.get("field")
    if frec is None:
        fld = QQ
    else:
        fld = NumberField(frec.get("name", "K"), [Fraction(c) for c in frec["minpoly"]],
                          tuple(Fraction(c) for c in frec["root_interval"]))
    normals = []
    for n in doc["normals"]:
        vec = []
        for c in n:
            if isinstance(c, list):
                vec.append(fld.element([Fraction(str(x)) for x in c]))
            else:
                vec.append(fld(Fraction(str(c))))
        normals.append(tuple(vec))
    return Arrangement(name, fld, tuple(normals), doc.get("expected_regions"))
