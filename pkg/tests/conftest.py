from fractions import Fraction

import pytest

from cnarr.catalogue import find_entry, load_catalogue
from cnarr.exactnum import QQ, NumberField
from cnarr.omcore import make_arrangement
from cnarr.oracle import Lattice

TAU = NumberField("tau", [-1, -1, 1], (1, 2))


@pytest.fixture(scope="session")
def entries():
    return load_catalogue(validate=False)


@pytest.fixture(scope="session")
def get(entries):
    def _get(name):
        return find_entry(entries, name).arrangement

    return _get


@pytest.fixture(scope="session")
def a6():
    """A(6,24) with catalogue rows permuted to 2,1,4,3,5,6 (labelling of the golden covectors)."""
    a, b, c, d, e, f = (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 1)
    return make_arrangement("A(6,24)", [b, a, d, c, e, f], QQ, 24)


def a10_normals():
    t = TAU.generator
    return [
        (0, 1, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (t + 1, t, t),
        (t + 1, t + 1, 1), (t + 1, t + 1, t), (2 * t, 2 * t, t), (2 * t + 1, 2 * t, t),
        (2 * t + 2, 2 * t + 1, t + 1),
    ]


@pytest.fixture(scope="session")
def a10():
    """A(10,60)_3 in the labelling of the golden four-cycle (base point (-1,-1,-2))."""
    return make_arrangement("A(10,60)_3", a10_normals(), TAU, 60)


# reference label k (1-based) -> catalogue row, recovered by matching collinearities
# and affine orientations of the labelled point configuration
A14_LABELS = (10, 11, 9, 12, 8, 7, 5, 13, 3, 1, 6, 14, 4, 2)
A14_POINT = (Fraction(38, 100), Fraction(285, 100), Fraction(-785, 100))


@pytest.fixture(scope="session")
def a14_ref(get):
    base = get("A(14,116)")
    normals = [base.normals[k - 1] for k in A14_LABELS]
    return make_arrangement("A(14,116)", normals, base.field, 116)


def lattice(covers_text: str) -> Lattice:
    labels = []
    covers = []
    for item in covers_text.split():
        a, b = item.split("<")
        covers.append((a, b))
        for x in (a, b):
            if x not in labels:
                labels.append(x)
    return Lattice.from_covers(labels, covers)


LATTICES = {
    "L1": "0<a 0<b 0<c a<d b<d b<e c<e d<1 e<1",
    "L2": "0<a 0<b a<c a<d b<d b<e c<1 d<1 e<1",
    "L3": "0<a 0<b a<d b<c c<d b<e d<1 e<1",
    "L4": "0<a 0<b 0<c a<d c<d d<1 b<1",
    "L5": "0<d d<a d<c a<1 c<1 0<b b<1",
    "M3": "0<a 0<b 0<c a<1 b<1 c<1",
    "B3": "0<x 0<y 0<z x<xy x<xz y<xy y<yz z<xz z<yz xy<1 xz<1 yz<1",
    "chain": "0<a a<b b<c",
}
