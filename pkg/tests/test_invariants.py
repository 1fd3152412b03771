from math import comb

from cnarr.invariants import compute_invariants, integer_roots, mobius_char_poly, pair_count_identity
from cnarr.omcore import make_arrangement


def test_a6(get):
    r = compute_invariants(get("A(6,24)"), 24)
    assert r.t_vector == {2: 3, 3: 4}
    assert r.f_vector == (7, 18, 12) and r.chambers == 24
    assert r.char_poly == (1, -6, 11, -6)
    assert r.exponents == (1, 2, 3)


def test_boolean():
    three = make_arrangement("three", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    r = compute_invariants(three)
    assert r.t_vector == {2: 3}
    assert r.char_poly == (1, -3, 3, -1)
    assert r.exponents == (1, 1, 1)
    assert r.chambers == 8


def test_h3_exponents(get):
    r = compute_invariants(get("A(15,120)"), 120)
    assert r.exponents == (1, 5, 9) and sum(r.exponents) == 15


def test_integer_roots():
    assert integer_roots((1, -6, 11, -6)) == (1, 2, 3)
    assert integer_roots((1, -3, 1, -1)) is None
    assert integer_roots((1, 0, 0, 0)) == (0, 0, 0)


def test_identities_all_entries(entries):
    for e in entries:
        arr = e.arrangement
        r = compute_invariants(arr, e.expected_regions)
        c = r.char_poly
        assert sum(c) == 0, e.name  # chi(1) = 0
        f0, f1, f2 = r.f_vector
        assert f0 - f1 + f2 == 1
        assert 2 * f2 == r.chambers
        assert pair_count_identity(arr)
        assert sum(comb(k, 2) * v for k, v in r.t_vector.items()) == comb(arr.m, 2)
        # Zaslavsky's count agrees with the region count in the name
        assert abs(c[0] * -1 + c[1] - c[2] + c[3]) == e.expected_regions


def test_mobius_oracle(entries):
    for e in entries:
        if e.m > 17:
            continue
        arr = e.arrangement
        assert mobius_char_poly(arr) == compute_invariants(arr, e.expected_regions).char_poly, e.name
