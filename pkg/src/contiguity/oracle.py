"""Brute-force reference implementations, used to cross-check the search engine.

Nothing here shares code with the engine beyond the basic complex and map
types: contiguity classes come from the full contiguity graph on every
simplicial map, and distances from enumerating every facet mask.
"""
from __future__ import annotations

import numpy as np

from .complex import ComplexError, SimplicialMap, restrict, restrict_map

DEFAULT_ASSIGNMENT_CAP = 3_000_000
DEFAULT_MAP_CAP = 50_000
DEFAULT_FACET_CAP = 12


class OracleCapError(RuntimeError):
    pass


class _SimplexTest:
    """Vectorised membership of vertex codes in the set of simplices of ``K``."""

    def __init__(self, K):
        codes = sorted({sum(1 << v for v in s) for s in K.simplices()})
        self.codes = np.array(codes, dtype=np.int64)
        self.table = None
        if K.n_vertices <= 22:
            self.table = np.zeros(1 << K.n_vertices, dtype=bool)
            self.table[self.codes] = True

    def __call__(self, values: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[values]
        idx = np.minimum(np.searchsorted(self.codes, values), len(self.codes) - 1)
        return self.codes[idx] == values


def all_simplicial_maps(dom, cod, cap: int = DEFAULT_ASSIGNMENT_CAP) -> np.ndarray:
    """Every simplicial assignment ``dom -> cod`` as rows of an integer array."""
    n, m = dom.n_vertices, cod.n_vertices
    if m > 62:
        raise OracleCapError("codomain too large for 64-bit vertex codes")
    if m**n > cap:
        raise OracleCapError(f"{m}^{n} assignments exceed the oracle cap {cap}")
    grid = np.indices((m,) * n, dtype=np.int64).reshape(n, -1).T
    test = _SimplexTest(cod)
    keep = np.ones(len(grid), dtype=bool)
    for facet in dom.facets:
        code = np.zeros(len(grid), dtype=np.int64)
        for v in facet:
            code |= np.left_shift(1, grid[:, v])
        keep &= test(code)
    return grid[keep]


def exhaustive_same_class(
    f: SimplicialMap,
    g: SimplicialMap,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
    map_cap: int = DEFAULT_MAP_CAP,
) -> bool:
    """Reachability in the one-step contiguity graph on all simplicial maps."""
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ComplexError("maps must share domain and codomain")
    dom, cod = f.domain, f.codomain
    maps = all_simplicial_maps(dom, cod, cap)
    count = len(maps)
    if count > map_cap:
        raise OracleCapError(f"{count} simplicial maps exceed the pairwise cap {map_cap}")
    test = _SimplexTest(cod)
    images = np.zeros((count, dom.n_facets), dtype=np.int64)
    for j, facet in enumerate(dom.facets):
        for v in facet:
            images[:, j] |= np.left_shift(1, maps[:, v])
    index = {tuple(row): i for i, row in enumerate(maps.tolist())}
    source, target = index[f.assignment], index[g.assignment]
    # the graph's edges are generated lazily: a frontier batch against every unvisited map
    seen = np.zeros(count, dtype=bool)
    seen[source] = True
    frontier = np.array([source])
    batch = max(1, 4_000_000 // max(1, count * dom.n_facets))
    while len(frontier) and not seen[target]:
        found = np.zeros(count, dtype=bool)
        rest = np.nonzero(~seen)[0]
        for start in range(0, len(frontier), batch):
            block = images[frontier[start : start + batch]]
            union = block[:, None, :] | images[rest][None, :, :]
            found[rest] |= test(union).all(axis=2).any(axis=0)
        found &= ~seen
        seen |= found
        frontier = np.nonzero(found)[0]
    return bool(seen[target])


def exhaustive_distance(
    phi: SimplicialMap,
    psi: SimplicialMap,
    facet_cap: int = DEFAULT_FACET_CAP,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
    map_cap: int = DEFAULT_MAP_CAP,
) -> int:
    """Least ``(pieces - 1)`` over all covers of the facets by good facet masks."""
    K = phi.domain
    F = K.n_facets
    if F > facet_cap:
        raise OracleCapError(f"{F} facets exceed the oracle cap {facet_cap}")
    good = []
    for mask in range(1, 1 << F):
        L = restrict(K, mask)
        if exhaustive_same_class(restrict_map(phi, L), restrict_map(psi, L), cap, map_cap):
            good.append(mask)
    full = (1 << F) - 1
    reach = np.zeros(1 << F, dtype=bool)
    reach[0] = True
    idx = np.arange(1 << F)
    for pieces in range(1, F + 1):
        nxt = np.zeros_like(reach)
        src = idx[reach]
        for m in good:
            nxt[src | m] = True
        if nxt[full]:
            return pieces - 1
        reach = nxt
    raise AssertionError("singleton masks always cover")
