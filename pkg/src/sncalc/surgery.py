"""Blow-up and blow-down surgery on dual graphs, and the fiber calculus.

A blow-up inserts a (-1)-vertex, sprouting on a vertex or subdividing an
edge; contraction is its inverse and is only allowed where the image stays
an snc tree.  A graph is a valid fiber when some contraction sequence ends
in a single 0-vertex; its multiplicities are the primitive positive kernel
vector of the intersection matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotAFiberError
from .graphs import DualGraph, canonical_form
from .linalg import kernel_basis

__all__ = [
    "FiberGraph",
    "RulingBookkeeping",
    "UniqueMinusOneReport",
    "blowup_graph",
    "contract_minus_one",
    "is_valid_fiber",
    "fiber_multiplicities",
    "unique_minus_one_checks",
    "fujita_check",
]


def _fresh_id(g: DualGraph, stem: str = "e") -> str:
    k = 1
    while f"{stem}{k}" in g:
        k += 1
    return f"{stem}{k}"


def blowup_graph(
    g: DualGraph, center: str | tuple[str, str], new_id: str | None = None
) -> DualGraph:
    """Blow up a point on one component (sprouting) or on an edge
    (subdivisional).

    The new vertex has weight -1; the center vertex loses 1 from its weight,
    and for an edge center both endpoints do.
    """
    if new_id is None:
        new_id = _fresh_id(g)
    if new_id in g:
        raise ValueError(f"vertex id {new_id!r} already taken")
    if isinstance(center, str):
        if center not in g:
            raise KeyError(center)
        verts = tuple(
            (v, w - 1 if v == center else w) for v, w in g.vertices
        ) + ((new_id, -1),)
        edges = set(g.edges) | {tuple(sorted((center, new_id)))}
        return DualGraph(verts, frozenset(edges))
    a, b = center
    if not g.has_edge(a, b):
        raise KeyError(f"no edge between {a!r} and {b!r}")
    verts = tuple(
        (v, w - 1 if v in (a, b) else w) for v, w in g.vertices
    ) + ((new_id, -1),)
    edges = set(g.edges) - {tuple(sorted((a, b)))}
    edges |= {tuple(sorted((a, new_id))), tuple(sorted((b, new_id)))}
    return DualGraph(verts, frozenset(edges))


def contract_minus_one(g: DualGraph, v: str) -> DualGraph:
    """Contract a non-branching (-1)-vertex; neighbors gain 1 and join up."""
    if v not in g:
        raise KeyError(v)
    if g.weight(v) != -1:
        raise ValueError(f"{v!r} has weight {g.weight(v)}, not -1")
    ns = g.neighbors(v)
    if len(ns) > 2:
        raise ValueError(f"{v!r} meets {len(ns)} components; image would not be snc")
    if len(ns) == 2 and g.has_edge(ns[0], ns[1]):
        raise ValueError("neighbors already meet; image would not be snc")
    verts = tuple((u, w + 1 if u in ns else w) for u, w in g.vertices if u != v)
    edges = {e for e in g.edges if v not in e}
    if len(ns) == 2:
        edges.add(tuple(sorted(ns)))
    return DualGraph(verts, frozenset(edges))


def is_valid_fiber(g: DualGraph) -> tuple[bool, list[str] | None]:
    """Search for a contraction sequence ending in a single 0-vertex.

    Returns (True, trace) with the contracted vertex ids in order, or
    (False, None).  The search is depth-first over all (-1)-choices with
    failures memoized on canonical forms, so isomorphic dead ends are
    pruned.
    """
    if len(g) == 0 or len(g.components()) != 1:
        raise ValueError("fiber candidates must be nonempty and connected")
    if len(g.edges) != len(g) - 1:
        return False, None  # a cycle never contracts to a tree
    failed: set = set()

    def search(h: DualGraph) -> list[str] | None:
        if len(h) == 1:
            return [] if h.vertices[0][1] == 0 else None
        candidates = [v for v, w in h.vertices if w == -1 and h.degree(v) <= 2]
        if not candidates:
            return None  # cheap dead end; not worth memoizing
        key = canonical_form(h)
        if key in failed:
            return None
        for v in candidates:
            tail = search(contract_minus_one(h, v))
            if tail is not None:
                return [v, *tail]
        failed.add(key)
        return None

    trace = search(g)
    return trace is not None, trace


@dataclass(frozen=True)
class FiberGraph:
    """A valid fiber with its component multiplicities.

    The weighted sum of components pairs to zero with every component, and
    the multiplicity vector is primitive.
    """

    graph: DualGraph
    multiplicities: dict[str, int]

    def __post_init__(self):
        ids = self.graph.ids
        if set(self.multiplicities) != set(ids):
            raise ValueError("multiplicities must cover exactly the components")
        mu = [self.multiplicities[v] for v in ids]
        if any(m < 1 for m in mu):
            raise ValueError("multiplicities are positive")
        if gcd(*mu) != 1:
            raise ValueError("multiplicity vector must be primitive")
        q = self.graph.intersection_matrix()
        for i in range(len(ids)):
            if sum(q[i][j] * mu[j] for j in range(len(ids))) != 0:
                raise ValueError("weighted sum does not pair to zero with each component")

    def mu(self, v: str) -> int:
        return self.multiplicities[v]


def fiber_multiplicities(g: DualGraph) -> FiberGraph:
    """Multiplicities of a valid fiber: the primitive positive kernel vector
    of its intersection matrix."""
    ok, _ = is_valid_fiber(g)
    if not ok:
        raise NotAFiberError("graph does not contract to a smooth 0-curve")
    basis = kernel_basis(g.intersection_matrix())
    if len(basis) != 1:
        raise NotAFiberError(f"kernel has dimension {len(basis)}, expected 1")
    vec = basis[0]
    from math import lcm

    scale = lcm(*(f.denominator for f in vec))
    ints = [int(f * scale) for f in vec]
    g_ = gcd(*ints)
    ints = [x // g_ for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise NotAFiberError("kernel vector is not positive")
    return FiberGraph(g, dict(zip(g.ids, ints)))


@dataclass(frozen=True)
class UniqueMinusOneReport:
    """Structure facts about a fiber with a unique (-1)-component."""

    minus_one: str
    mu_of_minus_one: int
    mu_one_components: tuple[str, ...]
    first_branch: tuple[str, ...]
    mu_exceeds_one: bool
    exactly_two_mu_one: bool
    mu_one_are_tips: bool
    mu_one_in_first_branch: bool

    @property
    def passed(self) -> bool:
        return (
            self.mu_exceeds_one
            and self.exactly_two_mu_one
            and self.mu_one_are_tips
            and self.mu_one_in_first_branch
        )


def unique_minus_one_checks(f: FiberGraph) -> UniqueMinusOneReport:
    """Check the structure forced on a fiber with a unique (-1)-curve.

    The first branch consists of the components created no later than the
    first branching component in the blow-up sequence recovering the fiber
    from a 0-curve (the whole fiber when it is a chain); creation order is
    read off a contraction trace, reversed.
    """
    g = f.graph
    minus_ones = [v for v, w in g.vertices if w == -1]
    if len(minus_ones) != 1:
        raise ValueError(f"{len(minus_ones)} components of weight -1; report needs exactly 1")
    c = minus_ones[0]
    ok, trace = is_valid_fiber(g)
    assert ok and trace is not None
    # contracted first = created last; the surviving 0-curve has time 0
    creation = {v: len(trace) - i for i, v in enumerate(trace)}
    for v in g.ids:
        creation.setdefault(v, 0)
    branching = sorted((v for v in g.ids if g.degree(v) >= 3), key=creation.__getitem__)
    b1 = branching[0] if branching else c
    first_branch = tuple(v for v in g.ids if creation[v] <= creation[b1])
    mu_one = tuple(v for v in g.ids if f.mu(v) == 1)
    return UniqueMinusOneReport(
        minus_one=c,
        mu_of_minus_one=f.mu(c),
        mu_one_components=mu_one,
        first_branch=first_branch,
        mu_exceeds_one=f.mu(c) > 1,
        exactly_two_mu_one=len(mu_one) == 2,
        mu_one_are_tips=all(g.degree(v) <= 1 for v in mu_one),
        mu_one_in_first_branch=all(v in first_branch for v in mu_one),
    )


@dataclass(frozen=True)
class RulingBookkeeping:
    """The characteristic numbers of a ruled pair.

    h counts horizontal boundary components, nu the fibers contained in the
    boundary, sigma_excess the total number of extra non-boundary fiber
    components, and the b2 fields are the second Betti numbers of the
    surface and of the boundary divisor.
    """

    h: int
    nu: int
    sigma_excess: int
    b2_surface: int
    b2_boundary: int


def fujita_check(r: RulingBookkeeping) -> bool:
    """The count identity tying fiber excess to horizontal components."""
    return r.sigma_excess == r.h + r.nu + r.b2_surface - r.b2_boundary - 2
