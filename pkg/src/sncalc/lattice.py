"""Blow-up programs over the plane and the resulting unimodular lattice.

A program declares plane curves (lines and conics) and a sequence of
blow-ups; each blow-up center is the common point of the curves listed for
it.  The lattice keeps the proper-transform class of every named curve in
the basis (H, e_1, ..., e_n) with Gram form diag(1, -1, ..., -1); tangency
is expressed combinatorially by blowing up infinitely-near points, i.e. by
listing the previous exceptional curve as passing through the next center.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .calculus import bark
from .errors import (
    ExcessIntersectionError,
    GraphParseError,
    LatticeError,
    NonTreeError,
    UnderconstrainedError,
)
from .graphs import DualGraph
from .linalg import TorsionGroup, is_negative_definite, solve_integer, torsion_of_cokernel
from .surgery import RulingBookkeeping

__all__ = [
    "BlowupProgram",
    "SurfaceLattice",
    "RulingDecomposition",
    "FiberPiece",
    "parse_arrangement",
    "run_program",
    "extract_boundary_graph",
    "k_plus_sharp_class",
    "euler_numbers",
    "h1_order",
    "ruling_decompose",
    "solve_curve_class",
]

Vector = tuple[int, ...]


@dataclass(frozen=True)
class BlowupProgram:
    """Declarative curve declarations and blow-up steps.

    steps entries are ("curve", name, degree) or ("blowup", name, centers).
    """

    steps: tuple[tuple, ...]

    @property
    def n_blowups(self) -> int:
        return sum(1 for s in self.steps if s[0] == "blowup")


def parse_arrangement(text: str) -> BlowupProgram:
    """Parse the line-based arrangement format.

    ::

        curve <name> degree=<d>
        blowup <name> at <name>,<name>,...
        blowup <name>              # free center, on no named curve
    """
    steps: list[tuple] = []
    names: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "curve":
            if len(parts) != 3 or not parts[2].startswith("degree="):
                raise GraphParseError("expected 'curve <name> degree=<d>'", lineno)
            name = parts[1]
            if name in names:
                raise GraphParseError(f"name {name!r} already declared", lineno)
            try:
                degree = int(parts[2][7:])
            except ValueError:
                raise GraphParseError(f"bad degree {parts[2][7:]!r}", lineno) from None
            names.add(name)
            steps.append(("curve", name, degree))
        elif parts[0] == "blowup":
            if len(parts) == 2:
                name, centers = parts[1], ()
            elif len(parts) == 4 and parts[2] == "at":
                name = parts[1]
                centers = tuple(c for c in parts[3].split(",") if c)
            else:
                raise GraphParseError("expected 'blowup <name> [at <name>,...]'", lineno)
            if name in names:
                raise GraphParseError(f"name {name!r} already declared", lineno)
            if len(set(centers)) != len(centers):
                raise GraphParseError("center lists a curve twice", lineno)
            for c in centers:
                if c not in names:
                    raise GraphParseError(f"center references unknown curve {c!r}", lineno)
            names.add(name)
            steps.append(("blowup", name, centers))
        else:
            raise GraphParseError(f"unknown directive {parts[0]!r}", lineno)
    return BlowupProgram(tuple(steps))


class SurfaceLattice:
    """The Picard lattice of an iterated blow-up of the plane.

    Basis (H, e_1, ..., e_n); the Gram form is diag(1, -1, ..., -1) and the
    canonical class is -3H + sum e_i.  Named classes are stored as integer
    vectors in this basis.
    """

    def __init__(self, n_blowups: int):
        self._n = n_blowups
        self._classes: dict[str, Vector] = {}

    @property
    def rank(self) -> int:
        return self._n + 1

    @property
    def n_blowups(self) -> int:
        return self._n

    @property
    def canonical_class(self) -> Vector:
        return (-3,) + (1,) * self._n

    def names(self) -> tuple[str, ...]:
        return tuple(self._classes)

    def class_of(self, name: str) -> Vector:
        try:
            return self._classes[name]
        except KeyError:
            raise KeyError(f"unknown curve {name!r}") from None

    def resolve(self, obj) -> tuple:
        """Accept a curve name, 'K', or an explicit vector."""
        if isinstance(obj, str):
            if obj == "K":
                return self.canonical_class
            return self.class_of(obj)
        vec = tuple(obj)
        if len(vec) != self.rank:
            raise LatticeError(f"vector has length {len(vec)}, lattice rank is {self.rank}")
        return vec

    def pair(self, a, b) -> int | Fraction:
        """Gram pairing of two classes (names, 'K', or vectors)."""
        va, vb = self.resolve(a), self.resolve(b)
        out = va[0] * vb[0] - sum(x * y for x, y in zip(va[1:], vb[1:]))
        return out

    def register(self, name: str, vec: Sequence[int]) -> None:
        """Name a derived class; rational-curve adjunction is enforced."""
        if name in self._classes:
            raise LatticeError(f"name {name!r} already in use")
        v = tuple(int(x) for x in vec)
        if len(v) != self.rank:
            raise LatticeError("class vector has the wrong length")
        self._register_checked(name, v)

    def _register_checked(self, name: str, v: Vector) -> None:
        if self.pair(v, v) + self.pair(v, "K") != -2:
            raise LatticeError(f"class for {name!r} violates rational adjunction")
        self._classes[name] = v


def run_program(p: BlowupProgram) -> SurfaceLattice:
    """Execute a blow-up program, tracking proper-transform classes.

    Blowing up subtracts the new exceptional class from every curve listed
    in the center, after checking that all listed curves still meet there
    pairwise.  Adjunction is re-checked for every class after every step.
    """
    n = p.n_blowups
    lat = SurfaceLattice(n)
    classes: dict[str, list[int]] = {}
    k = 0
    for step in p.steps:
        if step[0] == "curve":
            _, name, degree = step
            if degree not in (1, 2):
                raise LatticeError(
                    f"curve {name!r} has degree {degree}; only smooth rational "
                    "plane curves (degree 1 or 2) are supported"
                )
            classes[name] = [degree] + [0] * n
        else:
            _, name, centers = step
            k += 1
            for i, a in enumerate(centers):
                for b in centers[i + 1 :]:
                    prod = _dot(classes[a], classes[b])
                    if prod < 1:
                        raise ExcessIntersectionError(
                            f"blow-up {name!r}: curves {a!r} and {b!r} no longer "
                            "meet at the center (excess intersection exhausted)"
                        )
            for c in centers:
                classes[c][k] -= 1
            vec = [0] * (n + 1)
            vec[k] = 1
            classes[name] = vec
        for cname, cvec in classes.items():
            sq = _dot(cvec, cvec)
            kc = -3 * cvec[0] - sum(cvec[1 : k + 1])  # K pairs only with spent basis
            if sq + kc != -2:
                raise LatticeError(
                    f"adjunction fails for {cname!r} after step introducing {step[1]!r}"
                )
    for cname, cvec in classes.items():
        lat._register_checked(cname, tuple(cvec))
    return lat


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[0] - sum(x * y for x, y in zip(a[1:], b[1:]))


def extract_boundary_graph(l: SurfaceLattice, names: Sequence[str]) -> DualGraph:
    """Dual graph of a set of named curves: weights are self-pairings, edges
    mark pairing 1.  Pairing 2 or more is a non-snc configuration and is
    rejected; so are cycles."""
    verts = []
    edges = []
    for i, a in enumerate(names):
        verts.append((a, int(l.pair(a, a))))
        for b in names[i + 1 :]:
            prod = l.pair(a, b)
            if prod == 1:
                edges.append((a, b))
            elif prod != 0:
                raise LatticeError(
                    f"curves {a!r} and {b!r} pair to {prod}; not an snc tree"
                )
    g = DualGraph.build(verts, edges)
    if not g.is_forest():
        raise NonTreeError("boundary curves form a cycle")
    return g


def k_plus_sharp_class(l: SurfaceLattice, boundary: Sequence[str]) -> tuple[Fraction, ...]:
    """K + D - Bk D as an exact rational vector in the (H, e) basis."""
    g = extract_boundary_graph(l, boundary)
    bk = bark(g)
    vec = [Fraction(x) for x in l.canonical_class]
    for name in boundary:
        coeff = 1 - bk[name]
        cvec = l.class_of(name)
        for i in range(l.rank):
            vec[i] += coeff * cvec[i]
    return tuple(vec)


def euler_numbers(
    l: SurfaceLattice, boundary: Sequence[str], exceptional: Sequence[str]
) -> tuple[int, int, int, int]:
    """(chi of surface, of boundary, of exceptional locus, of the complement).

    The surface contributes 3 + n; a forest of rational curves contributes
    its component count plus its number of connected pieces.
    """
    if set(boundary) & set(exceptional):
        raise LatticeError("boundary and exceptional curve sets overlap")

    def chi_forest(names: Sequence[str]) -> int:
        if not names:
            return 0
        g = extract_boundary_graph(l, names)
        return len(g) + len(g.components())

    chi_s = 3 + l.n_blowups
    chi_d = chi_forest(boundary)
    chi_e = chi_forest(exceptional)
    return chi_s, chi_d, chi_e, chi_s - chi_d - chi_e


def h1_order(l: SurfaceLattice, boundary: Sequence[str]) -> TorsionGroup:
    """Torsion of the quotient of the lattice by the boundary classes."""
    cols = [l.class_of(name) for name in boundary]
    matrix = [[c[r] for c in cols] for r in range(l.rank)]
    if not cols:
        return TorsionGroup(())
    return torsion_of_cokernel(matrix)


@dataclass(frozen=True)
class FiberPiece:
    """One connected group of named vertical curves.

    When the group's classes sum (with multiplicities) exactly to the fiber
    class the piece is complete; otherwise multiplicities stay None and the
    residual records what is missing with all multiplicities set to one.
    """

    names: tuple[str, ...]
    multiplicities: tuple[int, ...] | None
    residual: tuple[int, ...] | None
    in_boundary: bool
    sigma: int

    @property
    def complete(self) -> bool:
        return self.multiplicities is not None


@dataclass(frozen=True)
class RulingDecomposition:
    fiber_class: Vector
    horizontal: tuple[tuple[str, int], ...]
    fibers: tuple[FiberPiece, ...]
    bookkeeping: RulingBookkeeping


def ruling_decompose(
    l: SurfaceLattice,
    fiber_class: Sequence[int],
    curve_names: Sequence[str],
    boundary: Sequence[str],
) -> RulingDecomposition:
    """Split named curves into horizontal ones and fiber groups.

    Vertical curves are grouped by connectivity of the pairing graph; each
    group's multiplicities are solved from the class equation.  Groups with
    zero pairing that truly belong to one fiber stay separate pieces -- the
    decomposition never invents connectivity.
    """
    f = l.resolve(fiber_class)
    if l.pair(f, f) != 0 or l.pair(f, "K") != -2:
        raise LatticeError("not a fiber class: need F.F = 0 and F.K = -2")
    bset = set(boundary)
    unknown = bset - set(curve_names)
    if unknown:
        raise LatticeError(f"boundary names missing from curve list: {sorted(unknown)}")
    horizontal: list[tuple[str, int]] = []
    vertical: list[str] = []
    for name in curve_names:
        deg = l.pair(name, f)
        if deg > 0:
            horizontal.append((name, int(deg)))
        elif deg == 0:
            vertical.append(name)
        else:
            raise LatticeError(f"curve {name!r} pairs negatively with the fiber class")

    # group vertical curves by pairing connectivity
    groups: list[list[str]] = []
    assigned: dict[str, int] = {}
    for name in vertical:
        touching = {
            assigned[other]
            for other in vertical
            if other in assigned and l.pair(name, other) > 0
        }
        if not touching:
            assigned[name] = len(groups)
            groups.append([name])
        else:
            keep = min(touching)
            groups[keep].append(name)
            assigned[name] = keep
            for gi in sorted(touching - {keep}, reverse=True):
                for moved in groups[gi]:
                    assigned[moved] = keep
                groups[keep].extend(groups[gi])
                groups[gi] = []
    groups = [sorted(grp, key=list(curve_names).index) for grp in groups if grp]

    pieces: list[FiberPiece] = []
    for grp in groups:
        cols = [l.class_of(name) for name in grp]
        a = [[c[r] for c in cols] for r in range(l.rank)]
        sol = _solve_rational_overdetermined(a, list(f))
        in_boundary = all(name in bset for name in grp)
        sigma = sum(1 for name in grp if name not in bset)
        if sol is None:
            residual = tuple(
                f[r] - sum(c[r] for c in cols) for r in range(l.rank)
            )
            pieces.append(FiberPiece(tuple(grp), None, residual, in_boundary, sigma))
        else:
            if any(x.denominator != 1 or x < 1 for x in sol):
                raise LatticeError(
                    f"fiber group {grp} solves to non-positive-integer "
                    f"multiplicities {sol}"
                )
            pieces.append(
                FiberPiece(tuple(grp), tuple(int(x) for x in sol), None, in_boundary, sigma)
            )

    nu = sum(1 for p in pieces if p.in_boundary and p.complete)
    sigma_excess = sum(p.sigma - 1 for p in pieces if not p.in_boundary)
    bookkeeping = RulingBookkeeping(
        h=sum(1 for name, _ in horizontal if name in bset),
        nu=nu,
        sigma_excess=sigma_excess,
        b2_surface=l.rank,
        b2_boundary=len(bset),
    )
    return RulingDecomposition(f, tuple(horizontal), tuple(pieces), bookkeeping)


def _solve_rational_overdetermined(a, b) -> list[Fraction] | None:
    """Unique rational solution of a (possibly tall) system, or None.

    Raises if the columns are dependent: fiber groups must have independent
    classes for the multiplicity question to be well-posed.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(a[i][j]) for j in range(cols)] + [Fraction(b[i])] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                fct = m[i][c] * inv
                for j in range(c, cols + 1):
                    m[i][j] -= fct * m[r][j]
        pivots.append((r, c))
        r += 1
    if len(pivots) < cols:
        raise LatticeError("fiber group classes are linearly dependent")
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    return [m[i][cols] / m[i][c] for i, c in pivots]


def solve_curve_class(
    l: SurfaceLattice,
    constraints: Iterable[tuple[object, int]],
    self_sq: int,
) -> list[Vector]:
    """All integer classes with the given self-intersection, rational-curve
    adjunction, and prescribed pairings.

    The linear constraints cut out an affine sublattice; the quadratic
    condition is then enumerated exactly.  When the Gram form on the
    sublattice's direction space is not negative definite the solution set
    can be infinite and an error lists the free directions.
    """
    rows: list[list[int]] = []
    rhs: list[int] = []

    def add(vec, value):
        # v . c = value, written in coordinates via the Gram form
        rows.append([vec[0]] + [-x for x in vec[1:]])
        rhs.append(int(value))

    add(l.canonical_class, -self_sq - 2)
    for key, value in constraints:
        add(l.resolve(key), value)
    sol = solve_integer(rows, rhs)
    if sol is None:
        return []
    x0, basis = sol
    if not basis:
        return [tuple(x0)] if _dot(x0, x0) == self_sq else []
    gram = [[_dot(bi, bj) for bj in basis] for bi in basis]
    if not is_negative_definite(gram):
        raise UnderconstrainedError(
            "constraints leave a direction space that is not negative definite; "
            "the solution family may be infinite",
            free_directions=basis,
        )
    lin = [_dot(x0, bi) for bi in basis]
    const = _dot(x0, x0)
    # solve t' M t' = radius for M = -gram around center M^{-1} b
    m = [[-x for x in row] for row in gram]
    out: list[Vector] = []
    budget = [10**6]
    center = _solve_pos_def(m, lin)
    radius = Fraction(const - self_sq) + sum(
        Fraction(lin[i]) * center[i] for i in range(len(basis))
    )
    if radius < 0:
        return []
    chol = _rational_cholesky(m)
    t = [Fraction(0)] * len(basis)

    def recurse(i: int, remaining: Fraction):
        if budget[0] <= 0:
            raise LatticeError("curve-class enumeration exceeded the candidate cap")
        if i < 0:
            if remaining == 0:
                vec = list(x0)
                for j, bj in enumerate(basis):
                    for r in range(len(vec)):
                        vec[r] += int(t[j]) * bj[r]
                out.append(tuple(vec))
            return
        d, coeffs = chol[i]
        shift = center[i] - sum(coeffs[j] * (t[j] - center[j]) for j in range(i + 1, len(basis)))
        lo, hi = _integer_range(shift, remaining / d)
        for ti in range(lo, hi + 1):
            budget[0] -= 1
            t[i] = Fraction(ti)
            used = d * (ti - shift) ** 2
            if used <= remaining:
                recurse(i - 1, remaining - used)

    recurse(len(basis) - 1, radius)
    out.sort()
    return out


def _solve_pos_def(m, b) -> list[Fraction]:
    """Solve m x = b for symmetric positive definite m, exactly."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for k in range(n):
        inv = 1 / a[k][k]
        for i in range(n):
            if i != k:
                f = a[i][k] * inv
                for j in range(k, n + 1):
                    a[i][j] -= f * a[k][j]
    return [a[i][n] / a[i][i] for i in range(n)]


def _rational_cholesky(m) -> list[tuple[Fraction, list[Fraction]]]:
    """LDL-style data for a positive definite rational matrix.

    Returns per row i the positive pivot d_i and the coefficients c_ij
    (j > i) such that x' M x = sum_i d_i (x_i + sum_j c_ij x_j)^2.
    """
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] for i in range(n)]
    out: list[tuple[Fraction, list[Fraction]]] = []
    for i in range(n):
        d = a[i][i]
        assert d > 0
        coeffs = [a[i][j] / d for j in range(n)]
        out.append((d, coeffs))
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                a[r][c] -= a[r][i] * a[i][c] / d
    return out


def _integer_range(center: Fraction, sq_bound: Fraction) -> tuple[int, int]:
    """Integers t with (t - center)^2 <= sq_bound (empty range when negative)."""
    if sq_bound < 0:
        return 0, -1
    p, q = sq_bound.numerator, sq_bound.denominator
    a, b = center.numerator, center.denominator
    # |t b - a| <= b sqrt(p/q)
    umax = isqrt(p * b * b // q) + 1
    lo = -((umax - a) // b)  # ceil((a - umax) / b)
    hi = (a + umax) // b
    while Fraction(lo, 1) < center and (lo - center) ** 2 > sq_bound:
        lo += 1
    while Fraction(hi, 1) > center and (hi - center) ** 2 > sq_bound:
        hi -= 1
    return lo, hi
