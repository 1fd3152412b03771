import numpy as np
import pytest

from conftest import LATTICES, lattice
from cnarr.omcore import delete, make_arrangement, sign_eval
from cnarr.oracle import (
    NotALatticeError,
    OracleCapError,
    Lattice,
    build_region_lattice,
    cross_validate,
    is_congruence_normal_lattice,
    is_semidistributive,
    polyhedral_edge,
    principal_congruence,
)
from cnarr.shards import ShardCovector, analyze, is_congruence_normal
from cnarr.omcore import parse_signs


def blocks(L, part):
    out = {}
    for x, b in enumerate(part):
        out.setdefault(b, set()).add(L.labels[x])
    return sorted(sorted(s) for s in out.values())


def test_reference_lattices():
    expected = {
        "L1": (False, True),
        "L2": (False, True),
        "L3": (False, False),
        "L4": (False, False),
        "L5": (False, False),
        "M3": (False, False),
        "B3": (True, True),
        "chain": (True, True),
    }
    for name, (sd, cn) in expected.items():
        L = lattice(LATTICES[name])
        assert is_semidistributive(L) == sd, name
        assert is_congruence_normal_lattice(L) == cn, name


def test_principal_congruence_l3():
    L = lattice(LATTICES["L3"])
    part = principal_congruence(L, L.index("b"), L.index("c"))
    assert blocks(L, part) == [["0", "a"], ["1", "e"], ["b", "c", "d"]]
    assert len(set(principal_congruence(L, 2, 2))) == L.n
    assert len(set(principal_congruence(L, L.index("0"), L.index("1")))) == 1


def test_not_a_lattice():
    # two incomparable maximal lower bounds
    with pytest.raises(NotALatticeError):
        Lattice.from_covers(list("0abcd1"), [("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"),
                                               ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")])


def test_region_lattice(a6):
    for T in a6.topes:
        L = build_region_lattice(a6, T)
        assert L.n == 24 and L.height() == 6
        assert L.topes[0] == T and not L.sep[0].any()
        # covers flip exactly one sign
        a, b = np.nonzero(L.cover)
        assert ((L.sep[b] ^ L.sep[a]).sum(axis=1) == 1).all()


def test_region_cap(get):
    with pytest.raises(OracleCapError):
        arr = get("A(19,204)")
        build_region_lattice(arr, arr.topes[0])


def test_boolean_arrangement_is_cn():
    three = make_arrangement("three", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    L = build_region_lattice(three, three.topes[0])
    assert L.n == 8 and is_congruence_normal_lattice(L)


def test_deletion_example(a10):
    d = delete(a10, 3)
    B = sign_eval(d, (-1, -1, 2))
    L = build_region_lattice(d, B)
    assert L.n == 52
    assert is_semidistributive(L)
    assert not is_congruence_normal_lattice(L)
    assert not is_congruence_normal(d, B).acyclic


def test_a10_lattice_not_cn(a10):
    B = sign_eval(a10, (-1, -1, -2))
    assert not is_congruence_normal_lattice(build_region_lattice(a10, B))


def test_polyhedral_edge_examples(a6, a10):
    minus = (-1,) * 6
    assert polyhedral_edge(a6, minus, ShardCovector(0, parse_signs("0*****")), ShardCovector(5, parse_signs("+*-+-0")))
    # 6 is not in pre(1)
    assert not polyhedral_edge(a6, minus, ShardCovector(5, parse_signs("+*-+-0")), ShardCovector(0, parse_signs("0*****")))
    B = sign_eval(a10, (-1, -1, -2))
    assert polyhedral_edge(a10, B, ShardCovector(7, parse_signs("-*-+***0*+")), ShardCovector(8, parse_signs("*--*+**+0*")))


def test_cross_validate_small(a6):
    reps = [cross_validate(a6, T) for T in a6.topes]
    assert all(r["acyclic"] and r["lattice_cn"] and r["semidistributive"] for r in reps)


def test_congruences_are_validated(a10):
    # _check_congruence runs on every call; exercise it over all join-irreducibles
    L = build_region_lattice(a10, a10.topes[3])
    for j in L.join_irreducibles():
        (low,) = L.lower_covers(j)
        principal_congruence(L, low, j)
    assert len(L.join_irreducibles()) == analyze(a10, a10.topes[3]).shard_count
