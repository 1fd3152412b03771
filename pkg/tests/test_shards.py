import pytest

from cnarr.catalogue import near_pencil
from cnarr.omcore import make_arrangement, parse_signs, sign_eval, sign_string
from cnarr.shards import (
    ShardCovector,
    analyze,
    classify,
    find_cycle,
    forcing_edge,
    hyperplane_digraph,
    is_additive,
    is_congruence_normal,
    line_covectors_for,
    pre_sets,
    shard_count,
    shard_covectors,
    shard_digraph,
)

MINUS6 = (-1,) * 6


def one_based(pre):
    return [tuple(k + 1 for k in p) for p in pre]


def test_pre_sets_a6(a6):
    pre = pre_sets(a6, MINUS6)
    assert one_based(pre)[5] == (1, 3, 4, 5)
    assert pre[0] == ()
    generic = make_arrangement("g", [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    assert all(p == () for p in pre_sets(generic, generic.topes[0]))


def test_shard_covectors_a6(a6):
    got = {str(c) for c in shard_covectors(a6, MINUS6, 5)}
    assert got == {"+*+--0", "+*-+-0", "-*-++0", "-*+-+0"}
    assert [str(c) for c in shard_covectors(a6, MINUS6, 0)] == ["0*****"]
    # one cutting line gives two shards
    an = analyze(a6, MINUS6)
    for T in a6.topes:
        an = analyze(a6, T)
        for i in range(6):
            cuts = len(an.pre[i]) // 2
            assert len(an.shards[i]) == (1 if cuts == 0 else 2 * cuts)


def test_shard_covector_invariants(a10):
    for T in a10.topes:
        an = analyze(a10, T)
        for i, vs in enumerate(an.shards):
            assert len(set(vs)) == len(vs)
            for v in vs:
                assert v.count(0) == 1 and v[i] == 0
                for k, x in enumerate(v):
                    if k in an.pre[i]:
                        assert x in (1, -1)
                    elif k != i:
                        assert x == 2


def test_shard_count_examples(a6, a10, get):
    assert shard_count(a6, MINUS6) == 11
    assert shard_count(a10, sign_eval(a10, (-1, -1, -2))) == 29
    for name in ("A(31,480)", "A(30,480)"):
        arr = get(name)
        assert shard_count(arr, arr.topes[0]) == 239


def test_forcing_edge_examples(a6, a10):
    s1 = ShardCovector(0, parse_signs("0*****"))
    th = ShardCovector(5, parse_signs("+*-+-0"))
    lcs = line_covectors_for(a6, MINUS6, 0, 5)
    assert forcing_edge(s1, th, lcs)
    assert (s1, th) in shard_digraph(a6, MINUS6).edges
    B = sign_eval(a10, (-1, -1, -2))
    th8 = ShardCovector(7, parse_signs("-*-+***0*+"))
    up9 = ShardCovector(8, parse_signs("*--*+**+0*"))
    assert forcing_edge(th8, up9, line_covectors_for(a10, B, 7, 8))
    with pytest.raises(ValueError):
        forcing_edge(th8, th8, [])


def test_forcing_edge_requires_nonstar_entry(a6):
    s = ShardCovector(5, parse_signs("+*+--0"))
    t = ShardCovector(0, parse_signs("0*****"))
    assert not forcing_edge(s, t, line_covectors_for(a6, MINUS6, 0, 5))


def test_a10_four_cycle(a10):
    B = sign_eval(a10, (-1, -1, -2))
    g = shard_digraph(a10, B)
    cyc = [
        ShardCovector(7, parse_signs("-*-+***0*+")),
        ShardCovector(8, parse_signs("*--*+**+0*")),
        ShardCovector(5, parse_signs("+*-+*0**-*")),
        ShardCovector(9, parse_signs("*-*++-+*-0")),
    ]
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert (a, b) in g.edges
    rep = is_congruence_normal(a10, B)
    assert not rep.acyclic
    assert len(rep.witness_cycle) >= 2
    nodes = set(g.nodes)
    for a, b in zip(rep.witness_cycle, rep.witness_cycle[1:] + rep.witness_cycle[:1]):
        assert (a, b) in g.edges and a in nodes


def test_edge_precondition(a10):
    for T in a10.topes[::5]:
        an = analyze(a10, T)
        for a, b in an.digraph().edges:
            assert a.hyperplane in an.pre[b.hyperplane]
            assert forcing_edge(a, b, line_covectors_for(a10, T, a.hyperplane, b.hyperplane))


def test_digraph_edges_match_pairwise_forcing(a6):
    for T in a6.topes:
        an = analyze(a6, T)
        g = an.digraph()
        brute = set()
        for s in g.nodes:
            for t in g.nodes:
                if s.hyperplane != t.hyperplane and s.hyperplane in an.pre[t.hyperplane]:
                    if forcing_edge(s, t, line_covectors_for(a6, T, s.hyperplane, t.hyperplane)):
                        brute.add((s, t))
        assert brute == g.edges


def test_hyperplane_digraph(a6, a14_ref):
    from conftest import A14_POINT

    H = hyperplane_digraph(a6, MINUS6)
    assert {(i + 1, j + 1) for i, j in H if j == 5} == {(1, 6), (3, 6), (4, 6), (5, 6)}
    B = sign_eval(a14_ref, A14_POINT)
    H = {(i + 1, j + 1) for i, j in hyperplane_digraph(a14_ref, B)}
    assert {(1, 4), (4, 7), (7, 1)} <= H
    assert is_congruence_normal(a14_ref, B).acyclic


def test_find_cycle():
    assert find_cycle([[1], [2], []]) is None
    assert find_cycle([[1], [2], [0]]) == [0, 1, 2]
    assert find_cycle([[0]]) == [0]


def test_antipodal_symmetry(entries):
    for e in entries:
        if e.m > 14:
            continue
        arr = e.arrangement
        verdict = {T: is_congruence_normal(arr, T).acyclic for T in arr.topes}
        for T, v in verdict.items():
            assert verdict[tuple(-x for x in T)] == v, e.name


def test_classify_examples(a10, get):
    c = classify(a10, 1)
    assert (c.verdict, c.cn_count, c.ncn_count) == ("sometimes", 40, 20)
    assert [r.base for r in c.per_region] == sorted(a10.topes)
    c = classify(get("A(15,120)"), 1)
    assert c.verdict == "always"


def test_classify_parallel_matches_sequential(a10):
    a = classify(a10, 1)
    b = classify(a10, 2)
    assert [(r.base, r.acyclic, r.shard_count) for r in a.per_region] == [
        (r.base, r.acyclic, r.shard_count) for r in b.per_region
    ]


def test_additivity(a6):
    assert is_additive(a6, MINUS6)
    three = make_arrangement("three", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert all(is_additive(three, T) for T in three.topes)
    np6 = near_pencil(6)
    verdicts = [(is_additive(np6, T), is_congruence_normal(np6, T).acyclic) for T in np6.topes]
    assert any(not add and cn for add, cn in verdicts)
    assert all(cn for _, cn in verdicts)


def test_near_pencil_paths_are_short():
    arr = near_pencil(7)
    for T in arr.topes:
        _, adj = analyze(arr, T).edge_index()
        # no path of length two
        for a, row in enumerate(adj):
            for b in row:
                assert not adj[b]
