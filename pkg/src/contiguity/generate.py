"""Seeded random complexes, maps and covers for property checks."""
from __future__ import annotations

import random

from .complex import SimplicialComplex, SimplicialMap, bits, is_connected


def random_complex(rng: random.Random, max_vertices: int = 6, max_facets: int = 8) -> SimplicialComplex:
    """A connected complex on at most ``max_vertices`` vertices with at most ``max_facets`` facets.

    A random spanning tree of edges keeps it connected; extra faces are
    mostly edges and triangles, so cycles and non-collapsible complexes turn
    up often.
    """
    while True:
        n = rng.choices(range(1, max_vertices + 1), weights=[1, 1, 3, 5, 6, 6][:max_vertices])[0]
        names = [f"v{i}" for i in range(n)]
        faces: list[list[int]] = [[0]]
        for v in range(1, n):
            faces.append([v, rng.randrange(v)])
        for _ in range(rng.randint(0, max_facets)):
            size = min(n, rng.choices([2, 3, 4], weights=[6, 4, 1])[0])
            faces.append(rng.sample(range(n), size))
        K = SimplicialComplex.build(names, faces)
        if K.n_facets <= max_facets and is_connected(K):
            return K


def random_map(rng: random.Random, K: SimplicialComplex, K2: SimplicialComplex) -> SimplicialMap:
    """A uniformly-seeded random simplicial map, by randomised backtracking.

    Constant maps are always simplicial, so the search cannot fail.
    """
    n = K.n_vertices
    image = [-1] * n
    order = list(range(n))
    rng.shuffle(order)

    def fits(v: int, w: int) -> bool:
        for j in K.incidence[v]:
            m = 1 << w
            for u in K.facets[j]:
                if image[u] >= 0:
                    m |= 1 << image[u]
            if not K2.is_simplex_mask(m):
                return False
        return True

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        choices = list(range(K2.n_vertices))
        rng.shuffle(choices)
        for w in choices:
            if fits(v, w):
                image[v] = w
                if extend(k + 1):
                    return True
                image[v] = -1
        return False

    extend(0)
    return SimplicialMap(K, K2, tuple(image))


def random_class_member(rng: random.Random, f: SimplicialMap, steps: int = 6) -> SimplicialMap:
    """A random walk of single-vertex moves, each a one-step contiguity."""
    dom, cod = f.domain, f.codomain
    image = list(f.assignment)
    for _ in range(steps):
        v = rng.randrange(dom.n_vertices)
        allowed = (1 << cod.n_vertices) - 1
        for j in dom.incidence[v]:
            m = 0
            for u in dom.facets[j]:
                m |= 1 << image[u]
            allowed &= cod.star_union(m)
        image[v] = rng.choice(list(bits(allowed)))
    return SimplicialMap(dom, cod, tuple(image))


def random_connected_cover(rng: random.Random, K: SimplicialComplex, max_pieces: int = 3) -> list[int]:
    """Facet masks of connected subcomplexes whose union is all of ``K``.

    Pieces grow from a random uncovered facet through facets sharing a vertex;
    pieces may overlap.
    """
    full = K.full_mask
    covered = 0
    pieces: list[int] = []
    adjacency = []
    for j, facet in enumerate(K.facets):
        adj = 0
        for v in facet:
            for i in K.incidence[v]:
                adj |= 1 << i
        adjacency.append(adj)
    target = rng.randint(1, max_pieces)
    while covered != full:
        left = [j for j in range(K.n_facets) if not covered >> j & 1]
        seed = rng.choice(left)
        piece = 1 << seed
        size = len(left) if len(pieces) + 1 >= target else rng.randint(1, K.n_facets)
        while piece.bit_count() < size:
            frontier = 0
            for j in range(K.n_facets):
                if piece >> j & 1:
                    frontier |= adjacency[j]
            frontier &= ~piece
            if not frontier:
                break
            options = [j for j in range(K.n_facets) if frontier >> j & 1]
            piece |= 1 << rng.choice(options)
        pieces.append(piece)
        covered |= piece
    return pieces
