import json

import pytest

from cnarr.catalogue import (
    CatalogueError,
    default_path,
    load_catalogue,
    near_pencil,
    parse_catalogue,
    serialize_catalogue,
)
from cnarr.exactnum import NumberField
from cnarr.invariants import compute_invariants
from cnarr.shards import classify


def test_full_catalogue(entries):
    assert len(entries) == 119
    assert len({e.name for e in entries}) == 119
    assert max(e.m for e in entries) == 37


def test_a10_first_normal(entries):
    e = next(e for e in entries if e.name == "A(10,60)_3")
    t = e.field.generator
    assert e.field_id == "tau"
    assert e.arrangement.normals[0] == (2 * t + 1, 2 * t, t)


def test_round_trip():
    text = open(default_path(), encoding="utf-8").read()
    raw, entries = parse_catalogue(text, validate=False)
    assert serialize_catalogue(raw, entries) == text


def test_empty_file(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text("")
    assert load_catalogue(str(p)) == []


def _doc(**override):
    entry = {"name": "A(3,8)", "family": None, "field": "QQ", "expected_regions": 8,
             "expected_classification": None, "normals": [[["1"], ["0"], ["0"]], [["0"], ["1"], ["0"]], [["0"], ["0"], ["1"]]]}
    entry.update(override)
    return {"schema": "1", "fields": {"QQ": {"minpoly": ["0", "1"], "root_interval": ["-1", "1"]}}, "entries": [entry]}


def test_parse_errors():
    parse_catalogue(json.dumps(_doc()))
    with pytest.raises(CatalogueError):
        parse_catalogue(json.dumps(_doc(field="nope")))
    with pytest.raises(CatalogueError):
        parse_catalogue(json.dumps(_doc(normals=[[["1/0"], ["0"], ["0"]], [["0"], ["1"], ["0"]], [["0"], ["0"], ["1"]]])))
    with pytest.raises(CatalogueError):
        parse_catalogue(json.dumps(_doc(normals=[[["x"], ["0"], ["0"]], [["0"], ["1"], ["0"]], [["0"], ["0"], ["1"]]])))
    doc = _doc()
    doc["entries"].append(doc["entries"][0])
    with pytest.raises(CatalogueError):
        parse_catalogue(json.dumps(doc))


def test_family_tags(entries):
    fam = {e.name: e.family for e in entries}
    assert fam["A(10,60)_3"] == "F2" and fam["A(12,84)_3"] == "F2"
    assert fam["A(9,48)"] == "F3" and fam["A(37,720)_2"] == "F3"
    assert sum(1 for f in fam.values() if f == "F2") == 16
    assert sum(1 for f in fam.values() if f == "F3") == 8


def test_expected_counts_sum(entries):
    for e in entries:
        c = e.expected_classification
        assert c["cn_count"] + c["ncn_count"] == e.expected_regions


def test_fields_certified(entries):
    for e in entries:
        assert isinstance(e.field, NumberField)


def test_near_pencil():
    a = near_pencil(3)
    assert len(a.topes) == 8
    a4 = near_pencil(4)
    assert [len(f) for f in a4.flats].count(3) == 1
    a6 = near_pencil(6)
    big = [f for f in a6.flats if len(f) > 2]
    assert len(big) == 1 and len(big[0]) == 5
    assert classify(a6, 1).verdict == "always"
    assert len(a6.topes) == a6.expected_regions == compute_invariants(a6).chambers
    with pytest.raises(ValueError):
        near_pencil(2)
