"""Dominated vertices, strong collapses and cores."""
from __future__ import annotations

from dataclasses import dataclass

from .complex import (
    SimplicialComplex,
    SimplicialMap,
    are_isomorphic,
    bits,
    maximal_masks,
)


@dataclass(frozen=True)
class CoreResult:
    core: SimplicialComplex
    retraction: SimplicialMap
    inclusion: SimplicialMap
    elimination_trace: tuple[tuple[int, int], ...]
    """``(dominated, dominator)`` pairs as vertex ids of the original complex."""


def _dominators(facets: list[int], v: int) -> int:
    bit = 1 << v
    inter = -1
    for m in facets:
        if m & bit:
            inter &= m
    return inter & ~bit


def strong_collapse_masks(n: int, facet_masks: tuple[int, ...] | list[int]):
    """Collapse to a core on raw facet masks.

    Returns ``(alive, facets, trace, retraction)``: the surviving vertex mask,
    the surviving facet masks, the elimination trace and the composite
    retraction as a list over all ``n`` original ids (values are original ids
    of surviving vertices).
    """
    facets = list(facet_masks)
    alive = (1 << n) - 1
    retraction = list(range(n))
    trace: list[tuple[int, int]] = []
    while True:
        step = None
        for v in bits(alive):
            dom = _dominators(facets, v)
            if dom:
                step = (v, (dom & -dom).bit_length() - 1)
                break
        if step is None:
            return alive, facets, trace, retraction
        v, w = step
        bit = 1 << v
        trace.append(step)
        facets = maximal_masks([m & ~bit if m & bit else m for m in facets])
        alive &= ~bit
        for u in range(n):
            if retraction[u] == v:
                retraction[u] = w


def dominated_by(K: SimplicialComplex, v: int | str) -> set[int]:
    """Vertices ``v'`` such that every facet containing ``v`` also contains ``v'``."""
    if isinstance(v, str):
        v = K.vertex_id(v)
    if not 0 <= v < K.n_vertices:
        raise ValueError(f"unknown vertex id {v}")
    return set(bits(_dominators(list(K.facet_masks), v)))


def _step(K: SimplicialComplex, v: int, w: int) -> tuple[SimplicialComplex, SimplicialMap]:
    """Remove dominated ``v`` from ``K``; returns the smaller complex and the map ``v -> w``."""
    keep = [u for u in range(K.n_vertices) if u != v]
    local = {u: i for i, u in enumerate(keep)}
    faces = [[local[u] for u in f if u != v] for f in K.facets]
    smaller = SimplicialComplex.build([K.names[u] for u in keep], faces)
    step = SimplicialMap(K, smaller, tuple(local[w if u == v else u] for u in range(K.n_vertices)))
    return smaller, step


def core(K: SimplicialComplex) -> CoreResult:
    """Strong-collapse ``K`` until no vertex is dominated.

    At each step the lowest-id dominated vertex is sent to its lowest-id
    dominator. Every elementary step map is built (and so validated) as a
    :class:`SimplicialMap`.
    """
    current = K
    ids = list(range(K.n_vertices))  # current id -> original id
    retraction = list(range(K.n_vertices))  # original id -> current id
    trace: list[tuple[int, int]] = []
    while True:
        step = None
        masks = list(current.facet_masks)
        for v in range(current.n_vertices):
            dom = _dominators(masks, v)
            if dom:
                step = (v, (dom & -dom).bit_length() - 1)
                break
        if step is None:
            break
        v, w = step
        trace.append((ids[v], ids[w]))
        current, step_map = _step(current, v, w)
        retraction = [step_map.assignment[r] for r in retraction]
        ids = [u for i, u in enumerate(ids) if i != v]
    return CoreResult(
        core=current,
        retraction=SimplicialMap(K, current, tuple(retraction)),
        inclusion=SimplicialMap(current, K, tuple(ids)),
        elimination_trace=tuple(trace),
    )


def is_strongly_collapsible(K: SimplicialComplex) -> bool:
    alive, _, _, _ = strong_collapse_masks(K.n_vertices, K.facet_masks)
    return alive.bit_count() == 1


def same_strong_homotopy_type(K: SimplicialComplex, K2: SimplicialComplex) -> bool:
    """Compare strong homotopy types through isomorphism of cores (Barmak–Minian)."""
    return are_isomorphic(core(K).core, core(K2).core)
