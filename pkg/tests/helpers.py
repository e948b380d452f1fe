"""Shared generators for randomized suites; all callers pass a seeded rng."""

from __future__ import annotations

import random

from sncalc.graphs import DualGraph


def random_tree(
    rng: random.Random, max_vertices: int = 20, weights: tuple[int, int] = (-5, 2)
) -> DualGraph:
    n = rng.randint(1, max_vertices)
    verts = [(f"v{i}", rng.randint(*weights)) for i in range(n)]
    edges = [(f"v{i}", f"v{rng.randint(0, i - 1)}") for i in range(1, n)]
    return DualGraph.build(verts, edges)


def random_forest(
    rng: random.Random, max_vertices: int = 20, weights: tuple[int, int] = (-5, 2)
) -> DualGraph:
    n = rng.randint(0, max_vertices)
    verts = [(f"v{i}", rng.randint(*weights)) for i in range(n)]
    edges = []
    for i in range(1, n):
        if rng.random() < 0.8:
            edges.append((f"v{i}", f"v{rng.randint(0, i - 1)}"))
    return DualGraph.build(verts, edges)


def random_admissible_fork(rng: random.Random) -> DualGraph:
    """A branching vertex with 3..4 admissible twigs of length 1..4."""
    from sncalc.graphs import build_fork

    n_twigs = rng.randint(3, 4)
    brackets = [
        [rng.randint(2, 5) for _ in range(rng.randint(1, 4))] for _ in range(n_twigs)
    ]
    return build_fork(rng.randint(-3, 0), brackets)
