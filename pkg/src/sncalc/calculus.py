"""Discriminants, chain invariants, barks and boundary classification.

The discriminant of a reduced divisor is det(-Q) of its intersection
matrix, with the empty divisor given discriminant 1.  Barks are the unique
rational divisors supported on admissible twigs (or on whole admissible
chain/fork components) that make K + D - Bk D orthogonal to the supporting
components; adjunction K.C = -2 - C^2 for rational components is hard-coded
throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NonAdmissibleError, NonTreeError, NotMinimalError
from .graphs import Chain, DualGraph, QDivisor, maximal_twigs
from .linalg import det_exact, is_negative_definite, solve_rational

__all__ = [
    "ChainInvariants",
    "BoundaryTag",
    "BoundaryType",
    "discriminant",
    "det_branch_formula",
    "det_join_formula",
    "chain_invariants",
    "bark",
    "bark_chain",
    "sharp",
    "classify_boundary",
    "kobayashi_check",
]


def _neg(m: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[-x for x in row] for row in m]


def discriminant(g: DualGraph, support: Iterable[str] | None = None) -> Fraction:
    """det(-Q) restricted to the given components; empty support gives 1."""
    sup = list(g.ids if support is None else support)
    return det_exact(_neg(g.intersection_matrix(sup)))


def _chain_d(weights: Sequence[int]) -> Fraction:
    """Discriminant of a bare chain, by weights alone."""
    return det_exact(
        _neg(
            [
                [w if i == j else (1 if abs(i - j) == 1 else 0) for j, w in enumerate(weights)]
                for i in range(len(weights))
            ]
        )
    )


def det_branch_formula(g: DualGraph, c: str) -> Fraction:
    """Discriminant via the expansion along one component.

    With D_1..D_k the connected components of g - c and C_i the component of
    D_i meeting c:

        d(D) = -c^2 prod d(D_i) - sum_i d(D_i - C_i) prod_{j != i} d(D_j)
    """
    if c not in g:
        raise KeyError(c)
    if not g.is_tree():
        raise NonTreeError("the branch expansion needs a tree")
    rest = g.without(c)
    comps = rest.components()
    d_comp = [discriminant(rest, comp) for comp in comps]
    total = Fraction(-g.weight(c))
    for d in d_comp:
        total *= d
    for i, comp in enumerate(comps):
        meeting = [v for v in comp if g.has_edge(v, c)]
        assert len(meeting) == 1  # tree: each branch hangs off one edge
        term = discriminant(rest, [v for v in comp if v != meeting[0]])
        for j, d in enumerate(d_comp):
            if j != i:
                term *= d
        total -= term
    return total


def det_join_formula(g: DualGraph, d1: Iterable[str], d2: Iterable[str]) -> Fraction:
    """Discriminant of a one-edge join: d(D1)d(D2) - d(D1-C1)d(D2-C2)."""
    s1, s2 = set(d1), set(d2)
    if s1 & s2 or s1 | s2 != set(g.ids):
        raise ValueError("the two parts must partition the vertices")
    joins = [e for e in g.edges if (e[0] in s1) != (e[1] in s1)]
    if len(joins) != 1:
        raise ValueError(f"parts joined by {len(joins)} edges, need exactly 1")
    if not g.subgraph(s1).is_connected() or not g.subgraph(s2).is_connected():
        raise ValueError("both parts must be connected")
    (a, b) = joins[0]
    c1, c2 = (a, b) if a in s1 else (b, a)
    return discriminant(g, s1) * discriminant(g, s2) - discriminant(
        g, s1 - {c1}
    ) * discriminant(g, s2 - {c2})


@dataclass(frozen=True)
class ChainInvariants:
    """The five numerical invariants of an admissible chain.

    d and d' are integers (d' drops the tip); e = d'/d, delta = 1/d, and
    e_tilde is e of the reversed chain.
    """

    d: int
    d_prime: int
    e: Fraction
    e_tilde: Fraction
    delta: Fraction


def chain_invariants(ch: Chain) -> ChainInvariants:
    if not ch.is_admissible():
        raise NonAdmissibleError(
            f"chain {list(ch.bracket)} has a component above -2; e and delta undefined"
        )
    d = _chain_d(ch.chain_weights)
    d_prime = _chain_d(ch.chain_weights[1:])
    # e-tilde through the explicitly reversed chain, not a shortcut formula
    rev = ch.reversed()
    d_rev = _chain_d(rev.chain_weights)
    d_rev_prime = _chain_d(rev.chain_weights[1:])
    assert d == d_rev
    return ChainInvariants(
        d=int(d),
        d_prime=int(d_prime),
        e=Fraction(int(d_prime), int(d)),
        e_tilde=Fraction(int(d_rev_prime), int(d_rev)),
        delta=Fraction(1, int(d)),
    )


# -- barks -------------------------------------------------------------


def _check_minimal(g: DualGraph) -> None:
    # isolated (-1)-components are tolerated: they have no twigs and get an
    # empty bark, so no twig semantics can go wrong on them
    for v, w in g.vertices:
        if w == -1 and 1 <= g.degree(v) <= 2:
            raise NotMinimalError(
                f"component {v!r} is a contractible (-1)-curve; minimalize first"
            )


def _is_admissible_chain_or_fork(g: DualGraph, comp: tuple[str, ...]) -> bool:
    sub = g.subgraph(comp)
    if any(w > -2 for _, w in sub.vertices):
        return False
    degsorted = sorted(sub.degree(v) for v in comp)
    if all(d <= 2 for d in degsorted):
        return True  # admissible chain; automatically negative definite
    # admissible fork = the resolution graph of a non-cyclic quotient
    # singularity: a unique degree-three branching component, negative
    # definite, with twig discriminants (2,2,n), (2,3,3), (2,3,4) or
    # (2,3,5), i.e. reciprocals summing above 1.  Weights below -1 alone
    # force neither definiteness nor the triple condition.
    if degsorted[-1] != 3 or (len(degsorted) >= 2 and degsorted[-2] > 2):
        return False
    twigs = maximal_twigs(sub)
    if len(twigs) != 3:
        return False
    recip = sum(Fraction(1, int(_chain_d(t.chain_weights))) for t in twigs)
    if recip <= 1:
        return False
    return is_negative_definite(sub.intersection_matrix())


def _bark_component(g: DualGraph, comp: tuple[str, ...], mode: str) -> dict[str, Fraction]:
    """Bark coefficients for one connected component.

    mode 'component' solves (K + D - Bk).D_i = 0 over the whole component;
    mode 'twigs' solves it over the maximal admissible twigs only.  Both
    reduce to Q x = rhs with rhs_i = deg(i) - 2 by adjunction.
    """
    sub = g.subgraph(comp)
    if mode == "component":
        if not _is_admissible_chain_or_fork(g, comp):
            raise NonAdmissibleError(
                f"component {comp} is not an admissible chain or fork"
            )
        support = list(comp)
    else:
        if all(sub.degree(v) <= 2 for v in comp):
            raise NonAdmissibleError(
                f"component {comp} is a chain; twig bark undefined"
            )
        twigs = maximal_twigs(sub)
        for t in twigs:
            if not t.is_admissible():
                raise NonAdmissibleError(
                    f"maximal twig {list(t.bracket)} is not admissible"
                )
        support = [v for t in twigs for v in t.ids]
    if not support:
        return {}
    q = g.intersection_matrix(support)
    rhs = [g.degree(v) - 2 for v in support]
    x = solve_rational(q, rhs)
    coeffs = dict(zip(support, x))
    # the defining equations must hold exactly
    for i, v in enumerate(support):
        assert sum(q[i][j] * coeffs[support[j]] for j in range(len(support))) == rhs[i]
    return coeffs


def bark(g: DualGraph, kind: str = "auto") -> QDivisor:
    """The bark of a reduced snc-minimal forest.

    kind 'auto' treats each connected component the way its shape demands:
    admissible chains and admissible forks get whole-component barks, other
    components get barks supported on their maximal admissible twigs, and
    non-admissible chains (which have no twigs) contribute nothing.  kinds
    'component' (alias 'whole-component') and 'twigs' force the respective
    system on every component.
    """
    if kind == "whole-component":
        kind = "component"
    if kind not in ("auto", "component", "twigs"):
        raise ValueError(f"unknown bark kind {kind!r}")
    if not g.is_forest():
        raise NonTreeError("bark of a cyclic graph is undefined")
    _check_minimal(g)
    coeffs: dict[str, Fraction] = {}
    for comp in g.components():
        if kind == "auto":
            sub = g.subgraph(comp)
            if _is_admissible_chain_or_fork(g, comp):
                mode = "component"
            elif all(sub.degree(v) <= 2 for v in comp):
                continue  # non-admissible chain: empty bark
            else:
                mode = "twigs"
        else:
            mode = kind
        coeffs.update(_bark_component(g, comp, mode))
    return QDivisor(g, coeffs)


def bark_chain(ch: Chain) -> QDivisor:
    """The divisor supported on the chain with tip product -1, 0 elsewhere."""
    if not ch.is_admissible():
        raise NonAdmissibleError(f"chain {list(ch.bracket)} is not admissible")
    n = len(ch)
    q = [
        [ch.chain_weights[i] if i == j else (1 if abs(i - j) == 1 else 0) for j in range(n)]
        for i in range(n)
    ]
    rhs = [-1] + [0] * (n - 1)
    return QDivisor(ch.to_graph(), dict(zip(ch.ids, solve_rational(q, rhs))))


def sharp(g: DualGraph, kind: str = "auto") -> QDivisor:
    """D - Bk D, coefficientwise on the reduced divisor."""
    bk = bark(g, kind)
    return QDivisor(g, {v: 1 - bk[v] for v in g.ids})


# -- boundary classification -------------------------------------------


class BoundaryTag(Enum):
    NEGATIVE_DEFINITE = "negative-definite"
    TYPE_X = "X"
    TYPE_H = "H"
    TYPE_Y = "Y"
    OTHER = "other"


@dataclass(frozen=True)
class BoundaryType:
    tag: BoundaryTag
    triple: tuple[int, int, int] | None = None

    def __str__(self) -> str:
        if self.tag is BoundaryTag.TYPE_Y:
            return f"Y{self.triple}"
        return self.tag.value


def classify_boundary(g: DualGraph) -> BoundaryType:
    """Match a connected rational tree against the boundary shapes.

    Negative definiteness wins first; then the literal patterns: (X) is a
    degree-4 center with four (-2)-tips, (H) has two degree-3 branching
    vertices joined by a chain, each carrying two (-2)-tips, and (Y) is a
    fork whose three maximal twigs are admissible with twig deltas summing
    to 1.  Everything else is Other.
    """
    if not g.is_connected() or len(g) == 0:
        raise ValueError("classification needs a nonempty connected graph")
    if not g.is_tree():
        raise NonTreeError("boundaries are trees")
    if is_negative_definite(g.intersection_matrix()):
        return BoundaryType(BoundaryTag.NEGATIVE_DEFINITE)
    branching = [v for v in g.ids if g.degree(v) >= 3]
    if len(branching) == 1:
        b = branching[0]
        if g.degree(b) == 4 and len(g) == 5 and all(
            g.weight(v) == -2 for v in g.ids if v != b
        ):
            return BoundaryType(BoundaryTag.TYPE_X)
        if g.degree(b) == 3:
            twigs = maximal_twigs(g)
            if len(twigs) == 3 and all(t.is_admissible() for t in twigs):
                inv = [chain_invariants(t) for t in twigs]
                if sum(ci.delta for ci in inv) == 1:
                    triple = tuple(sorted(ci.d for ci in inv))
                    return BoundaryType(BoundaryTag.TYPE_Y, triple)
    elif len(branching) == 2 and all(g.degree(v) == 3 for v in branching):
        twigs = maximal_twigs(g)
        if len(twigs) == 4 and all(t.bracket == (2,) for t in twigs):
            return BoundaryType(BoundaryTag.TYPE_H)
    return BoundaryType(BoundaryTag.OTHER)


def kobayashi_check(
    chi_open: int, group_orders: Iterable[int], kd_sharp_sq: Fraction
) -> tuple[bool, Fraction]:
    """Evaluate chi + sum 1/|G| >= (1/3) (K + D#)^2 exactly.

    Returns the truth value together with the slack (left minus right).
    """
    orders = list(group_orders)
    if any(o < 2 for o in orders):
        raise ValueError("local fundamental groups have order at least 2")
    lhs = Fraction(chi_open) + sum((Fraction(1, o) for o in orders), Fraction(0))
    slack = lhs - Fraction(kd_sharp_sq) / 3
    return slack >= 0, slack
