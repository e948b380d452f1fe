import random
from fractions import Fraction

import pytest

from helpers import random_admissible_fork, random_tree
from sncalc.calculus import (
    BoundaryTag,
    bark,
    bark_chain,
    chain_invariants,
    classify_boundary,
    det_branch_formula,
    det_join_formula,
    discriminant,
    kobayashi_check,
    sharp,
)
from sncalc.errors import NonAdmissibleError, NonTreeError, NotMinimalError
from sncalc.graphs import Chain, DualGraph, build_fork
from sncalc.linalg import is_negative_definite

chain = DualGraph.from_chain_weights


def test_discriminant_examples():
    assert discriminant(DualGraph((), frozenset())) == 1
    assert discriminant(chain([-2])) == 2
    assert discriminant(chain([-2, -2, -2])) == 4
    assert discriminant(chain([-3])) == 3
    assert discriminant(chain([-6])) == 6
    assert discriminant(build_fork(-1, [(3,), (3,), (3,)])) == 0


def test_discriminant_restricted_support():
    g = chain([-2, -1, -2])
    assert discriminant(g, ["v1", "v3"]) == 4
    assert discriminant(g, []) == 1
    with pytest.raises(KeyError):
        discriminant(g, ["ghost"])


def test_branch_formula_examples():
    assert det_branch_formula(chain([-2]), "v1") == 2
    assert det_branch_formula(build_fork(-1, [(3,), (3,), (3,)]), "B") == 0
    assert det_branch_formula(build_fork(-1, [(2,), (4,), (4,)]), "B") == 0


def test_branch_formula_rejects_non_trees():
    two = DualGraph.build([("a", -2), ("b", -2)], [])
    with pytest.raises(NonTreeError):
        det_branch_formula(two, "a")


def test_join_formula_examples():
    assert det_join_formula(chain([-2, -2]), ["v1"], ["v2"]) == 3
    assert det_join_formula(chain([-2, -2, -2]), ["v1", "v2"], ["v3"]) == 4
    assert det_join_formula(chain([-1, -1]), ["v1"], ["v2"]) == 0


def test_join_formula_validates_partition():
    g = chain([-2, -2, -2])
    with pytest.raises(ValueError, match="partition"):
        det_join_formula(g, ["v1"], ["v2"])
    with pytest.raises(ValueError, match="exactly 1"):
        det_join_formula(g, ["v1", "v3"], ["v2"])


def test_determinant_recursions_match_direct():
    rng = random.Random(0x2741)
    for _ in range(150):
        g = random_tree(rng, max_vertices=12)
        d = discriminant(g)
        v = rng.choice(g.ids)
        assert det_branch_formula(g, v) == d
        if g.edges:
            a, b = rng.choice(sorted(g.edges))
            keep = set()
            stack = [a]
            while stack:
                u = stack.pop()
                if u in keep:
                    continue
                keep.add(u)
                stack.extend(w for w in g.neighbors(u) if w != b and w not in keep)
            other = [u for u in g.ids if u not in keep]
            assert det_join_formula(g, sorted(keep), other) == d


@pytest.mark.parametrize(
    "bracket,d,d_prime,e,e_tilde,delta",
    [
        ([2], 2, 1, "1/2", "1/2", "1/2"),
        ([2, 2, 2], 4, 3, "3/4", "3/4", "1/4"),
        ([3, 2], 5, 2, "2/5", "3/5", "1/5"),
    ],
)
def test_chain_invariant_examples(bracket, d, d_prime, e, e_tilde, delta):
    ci = chain_invariants(Chain.from_bracket(bracket))
    assert (ci.d, ci.d_prime) == (d, d_prime)
    assert ci.e == Fraction(e) and ci.e_tilde == Fraction(e_tilde)
    assert ci.delta == Fraction(delta)


def test_chain_invariants_reject_non_admissible():
    with pytest.raises(NonAdmissibleError):
        chain_invariants(Chain.from_bracket([2, 1, 2]))


def test_chain_invariant_identities():
    rng = random.Random(0xC4A)
    for _ in range(200):
        bracket = [rng.randint(2, 6) for _ in range(rng.randint(1, 6))]
        ci = chain_invariants(Chain.from_bracket(bracket))
        assert 0 < ci.delta <= ci.e < 1
        assert ci.d >= len(bracket) + 1
        if ci.d == len(bracket) + 1:
            assert all(b == 2 for b in bracket)
        rev = chain_invariants(Chain.from_bracket(bracket[::-1]))
        assert ci.e_tilde == rev.e and ci.d == rev.d
    for k in range(1, 7):
        ci = chain_invariants(Chain.from_bracket([2] * k))
        assert ci.e == Fraction(k, k + 1)


def test_bark_whole_component_examples():
    b = bark(chain([-2]))
    assert b["v1"] == 1
    b2 = bark(chain([-2, -3]))  # admissible chain gets a full-component bark
    g = chain([-2, -3])
    q = g.intersection_matrix()
    for i, v in enumerate(g.ids):
        lhs = sum(q[i][j] * b2[g.ids[j]] for j in range(2))
        assert lhs == g.degree(v) - 2


def test_bark_twig_examples():
    g = build_fork(-1, [(2,), (2, 2, 2), (2, 2, 2)])
    bk = bark(g)
    assert bk["T1_1"] == Fraction(1, 2)
    assert (bk["T2_1"], bk["T2_2"], bk["T2_3"]) == (
        Fraction(3, 4),
        Fraction(1, 2),
        Fraction(1, 4),
    )
    assert bk["B"] == 0


def coeff_tuple(divisor, ch):
    return tuple(divisor[v] for v in ch.ids)


def test_bark_chain_examples():
    ch = Chain.from_bracket([2])
    assert coeff_tuple(bark_chain(ch), ch) == (Fraction(1, 2),)
    ch = Chain.from_bracket([2, 2])
    assert coeff_tuple(bark_chain(ch), ch) == (Fraction(2, 3), Fraction(1, 3))
    ch = Chain.from_bracket([3])
    assert coeff_tuple(bark_chain(ch), ch) == (Fraction(1, 3),)
    # the tip equation and the interior equations hold exactly
    ch = Chain.from_bracket([2, 3, 2])
    bk = bark_chain(ch)
    g = ch.to_graph()
    q = g.intersection_matrix(ch.ids)
    prods = [
        sum(q[i][j] * bk[ch.ids[j]] for j in range(len(ch))) for i in range(len(ch))
    ]
    assert prods == [-1, 0, 0]
    with pytest.raises(NonAdmissibleError):
        bark_chain(Chain.from_bracket([1, 2]))


def test_bark_errors():
    with pytest.raises(NonAdmissibleError):
        bark(build_fork(-1, [(2,), (2,), (0, 2)]))  # non-admissible twig
    with pytest.raises(NotMinimalError):
        bark(chain([-2, -1, -2]))  # contractible (-1) inside
    tri = DualGraph.build(
        [("a", -2), ("b", -2), ("c", -2)], [("a", "b"), ("b", "c"), ("a", "c")]
    )
    with pytest.raises(NonTreeError):
        bark(tri)
    with pytest.raises(NonAdmissibleError):
        bark(chain([0]), kind="component")
    with pytest.raises(NonAdmissibleError):
        bark(chain([-2, -2]), kind="twigs")


def test_bark_random_fork_properties():
    rng = random.Random(0xBA2)
    for _ in range(60):
        g = random_admissible_fork(rng)
        bk = bark(g)
        support = bk.support()
        assert support  # admissible twigs always contribute
        for v in g.ids:
            assert 0 <= bk[v] <= 1
        # defining equations have residual exactly zero, recomputed from
        # adjunction rather than through the solver's own right-hand side
        q = g.intersection_matrix()
        ids = list(g.ids)
        for i, v in enumerate(ids):
            if v not in support:
                continue
            k_dot = -2 - g.weight(v)
            d_dot = g.weight(v) + g.degree(v)
            bk_dot = sum(q[i][j] * bk[ids[j]] for j in range(len(ids)))
            assert k_dot + d_dot - bk_dot == 0
        assert is_negative_definite(g.intersection_matrix(support))


def test_bark_zero_is_not_negative_definite_edge():
    # a single 0-curve has empty bark; nothing to test for definiteness
    assert bark(chain([0])).coeffs == {}


def test_sharp_examples():
    assert sharp(chain([-2])).coeffs == {}
    assert sharp(chain([0]))["v1"] == 1
    g = build_fork(-1, [(2,), (2, 2, 2), (2, 2, 2)])
    sp = sharp(g)
    assert sp["B"] == 1
    assert sp["T1_1"] == Fraction(1, 2)
    assert sp["T2_1"] == Fraction(1, 4)


def test_classify_boundary_shapes():
    assert classify_boundary(chain([-2, -2, -2])).tag is BoundaryTag.NEGATIVE_DEFINITE
    x = build_fork(0, [(2,)] * 4)
    assert classify_boundary(x).tag is BoundaryTag.TYPE_X
    x1 = build_fork(-1, [(2,)] * 4)
    assert classify_boundary(x1).tag is BoundaryTag.TYPE_X
    y = classify_boundary(build_fork(-1, [(2, 2)] * 3))
    assert y.tag is BoundaryTag.TYPE_Y and y.triple == (3, 3, 3)
    y2 = classify_boundary(build_fork(-1, [(2,), (2, 2, 2), (2, 2, 2)]))
    assert y2.triple == (2, 4, 4)
    h = DualGraph.build(
        [("b1", -1), ("b2", -3), ("l", -2), ("d1", -2), ("r", -2), ("d2", -2), ("m", -2)],
        [("l", "b1"), ("d1", "b1"), ("b1", "m"), ("m", "b2"), ("b2", "r"), ("b2", "d2")],
    )
    assert classify_boundary(h).tag is BoundaryTag.TYPE_H
    # a fork whose twig deltas do not sum to 1 is Other
    other = build_fork(0, [(2,), (2,), (3, 3)])
    assert classify_boundary(other).tag is BoundaryTag.OTHER
    assert classify_boundary(chain([0])).tag is BoundaryTag.OTHER


def test_classify_boundary_requires_connected():
    g = DualGraph.build([("a", -2), ("b", -2)], [])
    with pytest.raises(ValueError):
        classify_boundary(g)


def test_classify_negative_definite_wins_over_pattern():
    # an X-shaped graph with a -3 center is negative definite and reported so
    g = build_fork(-3, [(2,)] * 4)
    assert classify_boundary(g).tag is BoundaryTag.NEGATIVE_DEFINITE


def test_kobayashi_examples():
    ok, slack = kobayashi_check(0, [2], Fraction(0))
    assert ok and slack == Fraction(1, 2)
    ok, slack = kobayashi_check(0, [3], Fraction(0))
    assert ok and slack == Fraction(1, 3)
    ok, slack = kobayashi_check(-1, [2], Fraction(0))
    assert not ok and slack == Fraction(-1, 2)
    with pytest.raises(ValueError):
        kobayashi_check(0, [1], Fraction(0))
