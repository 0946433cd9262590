import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import closure, covers
from rkspectra import (
    PreorderError,
    are_isomorphic,
    build_t1,
    build_t2,
    build_theory,
    hasse_edges,
    make_preorder,
    pareto_product,
    quotient_rk,
    verify_witness,
)
from rkspectra.poset import IsoWitness, product_name


def chain(names, labels):
    return make_preorder(names, list(zip(names, names[1:])), dict(zip(names, labels)))


def il_multiset(p):
    return sorted(p.il.values())


@st.composite
def preorders(draw, max_nodes=7):
    n = draw(st.integers(1, max_nodes))
    names = [f"v{i}" for i in range(n)]
    pairs = draw(st.lists(st.tuples(st.sampled_from(names), st.sampled_from(names)), max_size=2 * n))
    labels = draw(st.lists(st.integers(0, 5), min_size=n, max_size=n))
    return make_preorder(names, pairs, dict(zip(names, labels)))


@st.composite
def posets(draw, max_nodes=7):
    # Orient every pair from lower to higher index so the result is acyclic.
    p = draw(preorders(max_nodes))
    pairs = [(x, y) if p.index[x] <= p.index[y] else (y, x) for x, y in p.generators]
    return make_preorder(p.nodes, pairs, p.il)


# --- make_preorder ---------------------------------------------------------


def test_single_point():
    p = make_preorder(["x"], [], {"x": 0})
    assert p.leq == {("x", "x")}
    assert p.il["x"] == 0


def test_two_chain():
    p = make_preorder(["a", "b"], [("a", "b")], {"a": 0, "b": 1})
    assert p.leq == {("a", "a"), ("b", "b"), ("a", "b")}
    assert il_multiset(p) == [0, 1]


def test_three_chain_is_closed():
    p = make_preorder(["a", "b", "c"], [("a", "b"), ("b", "c")], {"a": 0, "b": 0, "c": 3})
    assert ("a", "c") in p.leq
    assert ("c", "a") not in p.leq
    assert len(p.leq) == 6


@pytest.mark.parametrize(
    "nodes, pairs, il, match",
    [
        ([], [], {}, "at least one"),
        (["a", "a"], [], {"a": 0}, "duplicate"),
        (["a", "b"], [], {"a": 0}, "no IL"),
        (["a"], [], {"a": -1}, "negative"),
        (["a"], [("a", "z")], {"a": 0}, "unknown node"),
        (["a"], [], {"a": 0, "z": 1}, "unknown nodes"),
        (["a"], [], {"a": 1.5}, "integer"),
    ],
)
def test_make_preorder_rejects(nodes, pairs, il, match):
    with pytest.raises(PreorderError, match=match):
        make_preorder(nodes, pairs, il)


def test_canonical_flag_is_checked():
    with pytest.raises(PreorderError, match="antisymmetric"):
        make_preorder(["a", "b"], [("a", "b"), ("b", "a")], {"a": 0, "b": 0}, canonical=True)
    with pytest.raises(PreorderError, match="least"):
        make_preorder(["a", "b"], [], {"a": 0, "b": 0}, canonical=True)
    with pytest.raises(PreorderError, match="IL 0"):
        make_preorder(["a", "b"], [("a", "b")], {"a": 1, "b": 0}, canonical=True)


def test_big_labels_are_exact():
    big = 3**200
    p = make_preorder(["x"], [], {"x": big})
    assert p.il["x"] == big


@given(preorders())
def test_closure_matches_naive_fixpoint(p):
    assert p.leq == closure(p.nodes, p.generators)


@given(preorders())
def test_closure_is_idempotent(p):
    again = make_preorder(p.nodes, sorted(p.leq), p.il)
    assert again == p


# --- quotient_rk -------------------------------------------------------------


def test_quotient_of_chain_is_itself():
    p = build_t1()
    assert quotient_rk(p) == p
    assert quotient_rk(build_t2()) == build_t2()


def test_quotient_sums_class_labels():
    p = make_preorder(["x", "y"], [("x", "y"), ("y", "x")], {"x": 1, "y": 2})
    q = quotient_rk(p)
    assert q.nodes == ("x",)
    assert q.il["x"] == 3
    assert quotient_rk(q) == q


@given(preorders())
def test_quotient_is_antisymmetric_and_idempotent(p):
    q = quotient_rk(p)
    assert q.is_antisymmetric()
    assert quotient_rk(q) == q
    assert sum(q.il.values()) == sum(p.il.values())


@given(preorders())
def test_quotient_order_matches_classes(p):
    q = quotient_rk(p)
    rel = closure(p.nodes, p.generators)
    rep = {x: min(y for y in p.nodes if (x, y) in rel and (y, x) in rel) for x in p.nodes}
    expected = {(rep[x], rep[y]) for x, y in rel}
    assert q.leq == expected


# --- hasse_edges -------------------------------------------------------------


def test_hasse_of_chain():
    p = chain(["a", "b", "c"], [0, 0, 3])
    assert hasse_edges(p) == [("a", "b"), ("b", "c")]


def test_hasse_of_square():
    edges = hasse_edges(build_theory((2, 0)))
    assert edges == [("00|", "01|"), ("00|", "10|"), ("01|", "11|"), ("10|", "11|")]


def test_hasse_of_grid():
    edges = hasse_edges(build_theory((0, 2)))
    assert len(edges) == 12


def test_hasse_rejects_preorder():
    p = make_preorder(["x", "y"], [("x", "y"), ("y", "x")], {"x": 0, "y": 0})
    with pytest.raises(PreorderError):
        hasse_edges(p)


@given(posets())
def test_hasse_matches_definition(p):
    rel = closure(p.nodes, p.generators)
    assert hasse_edges(p) == covers(p.nodes, rel)


@given(posets())
def test_hasse_generates_the_order(p):
    regenerated = make_preorder(p.nodes, hasse_edges(p), p.il)
    assert regenerated == p


# --- pareto_product -----------------------------------------------------------


def test_square_from_two_t1():
    sq = pareto_product(build_t1(), build_t1())
    assert len(sq) == 4
    assert il_multiset(sq) == [0, 1, 1, 3]
    assert len(hasse_edges(sq)) == 4


def test_t1_times_t2():
    p = pareto_product(build_t1(), build_t2())
    assert len(p) == 6
    assert il_multiset(p) == [0, 0, 1, 1, 3, 7]
    top = p.nodes[-1]
    assert p.il[top] == 7
    assert all(p.le(x, top) for x in p.nodes)


def test_point_is_identity():
    point = make_preorder(["o"], [], {"o": 0})
    for p in (build_t1(), build_t2(), build_theory((1, 1))):
        w = are_isomorphic(pareto_product(p, point), p)
        assert w is not None
        assert verify_witness(pareto_product(p, point), p, w)


def test_product_names_are_escaped():
    p = make_preorder(["a*b", "c"], [], {"a*b": 0, "c": 0})
    q = make_preorder(["d"], [], {"d": 0})
    names = pareto_product(p, q).nodes
    assert len(set(names)) == 2
    assert product_name("a*b", "d") != product_name("a", "b*d")
    assert product_name("a\\", "b") != product_name("a", "\\b")


@settings(max_examples=50)
@given(preorders(4), preorders(4))
def test_product_size_and_label_sum(p, q):
    r = pareto_product(p, q)
    assert len(r) == len(p) * len(q)
    lhs = sum(r.il.values()) + len(r)
    assert lhs == (sum(p.il.values()) + len(p)) * (sum(q.il.values()) + len(q))


@settings(max_examples=50)
@given(preorders(4), preorders(4))
def test_product_order_is_componentwise(p, q):
    r = pareto_product(p, q)
    for (x1, y1), (x2, y2) in itertools.product(itertools.product(p.nodes, q.nodes), repeat=2):
        assert r.le(product_name(x1, y1), product_name(x2, y2)) == (p.le(x1, x2) and q.le(y1, y2))


SMALL = [(k, s) for k in range(5) for s in range(5) if k + s <= 4]


@pytest.mark.parametrize(
    "a, b", [(a, b) for a in SMALL for b in SMALL if sum(a) + sum(b) <= 4]
)
def test_product_commutes(a, b):
    pq = pareto_product(build_theory(a), build_theory(b))
    qp = pareto_product(build_theory(b), build_theory(a))
    w = are_isomorphic(pq, qp)
    assert w is not None and verify_witness(pq, qp, w)


@pytest.mark.parametrize(
    "a, b, c",
    [(a, b, c) for a in SMALL for b in SMALL for c in SMALL if sum(a) + sum(b) + sum(c) <= 4],
)
def test_product_associates(a, b, c):
    x, y, z = (build_theory(sig) for sig in (a, b, c))
    left = pareto_product(pareto_product(x, y), z)
    right = pareto_product(x, pareto_product(y, z))
    w = are_isomorphic(left, right)
    assert w is not None and verify_witness(left, right, w)


# --- are_isomorphic --------------------------------------------------------


def test_renamed_chain_is_isomorphic():
    p = build_t1()
    q = chain(["bottom", "top"], [0, 1])
    w = are_isomorphic(p, q)
    assert w is not None
    assert dict(w.mapping) == {"0|": "bottom", "1|": "top"}
    assert verify_witness(p, q, w)


def test_different_labels_block_isomorphism():
    assert are_isomorphic(build_t1(), chain(["a", "b"], [0, 2])) is None


def test_same_labels_different_order():
    p = make_preorder(["a", "b", "c"], [("a", "b"), ("a", "c")], {"a": 0, "b": 1, "c": 1})
    q = make_preorder(["a", "b", "c"], [("a", "b"), ("b", "c")], {"a": 0, "b": 1, "c": 1})
    assert are_isomorphic(p, q) is None


def test_witness_is_deterministic():
    sq = build_theory((2, 0))
    assert are_isomorphic(sq, sq) == are_isomorphic(sq, sq)
    # Ties between the two atoms resolve to the smallest identifier.
    assert are_isomorphic(sq, sq).mapping["01|"] == "01|"


def test_verify_witness_rejects_bad_maps():
    p = build_theory((2, 0))
    bad = IsoWitness({"00|": "11|", "01|": "01|", "10|": "10|", "11|": "00|"})
    assert not verify_witness(p, p, bad)
    assert not verify_witness(p, p, IsoWitness({"00|": "00|"}))


def test_large_isomorphism_with_renaming():
    import random

    p = build_theory((0, 4))
    rng = random.Random(7)
    perm = list(p.nodes)
    rng.shuffle(perm)
    rename = dict(zip(p.nodes, perm))
    q = make_preorder(
        [rename[x] for x in reversed(p.nodes)],
        [(rename[x], rename[y]) for x, y in p.generators],
        {rename[x]: p.il[x] for x in p.nodes},
    )
    w = are_isomorphic(p, q)
    assert w is not None and verify_witness(p, q, w)


@settings(max_examples=60)
@given(posets(6), st.randoms(use_true_random=False))
def test_isomorphism_is_symmetric(p, rnd):
    names = list(p.nodes)
    shuffled = names[:]
    rnd.shuffle(shuffled)
    rename = dict(zip(names, shuffled))
    q = make_preorder(
        [rename[x] for x in names], [(rename[x], rename[y]) for x, y in p.generators],
        {rename[x]: p.il[x] for x in names},
    )
    forward, backward = are_isomorphic(p, q), are_isomorphic(q, p)
    assert forward is not None and backward is not None
    assert verify_witness(p, q, forward) and verify_witness(q, p, backward)


@settings(max_examples=80)
@given(posets(5), posets(5))
def test_isomorphism_agrees_with_brute_force(p, q):
    def brute():
        if len(p) != len(q):
            return False
        for perm in itertools.permutations(q.nodes):
            f = dict(zip(p.nodes, perm))
            if verify_witness(p, q, IsoWitness(f)):
                return True
        return False

    found = are_isomorphic(p, q)
    assert (found is not None) == brute()
    assert (are_isomorphic(q, p) is not None) == (found is not None)
