"""Contiguity distance between simplicial maps, and scat / TC built on it.

Search space. Goodness of a piece (both restrictions in one contiguity class)
is closed under passing to subcomplexes, so any good cover by arbitrary
subcomplexes can be replaced by the cover generated by the facets each piece
contains: it is still good and still covers every facet. Only facet masks are
searched. Each single facet spans a cone, which is strongly collapsible, so
singletons are always good and the value never exceeds ``#facets - 1``.

Because good masks form a down-closed family, a minimum cover can be taken to
be a partition. The exact search is a branch and bound over partitions of the
facets into ``k`` good blocks, with memoised goodness.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .complex import (
    ComplexError,
    SimplicialComplex,
    SimplicialMap,
    bits,
    compose,
    constant_map,
    identity_map,
    inclusion_map,
    is_connected,
    restrict,
    restrict_map,
)
from .constructions import DEFAULT_PRODUCT_CAP, Product, categorical_product, diagonal
from .engine import (
    DEFAULT_STATE_CAP,
    CodomainCore,
    ContiguityCertificate,
    contiguity_class_members,
)

DEFAULT_EXHAUSTIVE_CAP = 20
DEFAULT_NODE_BUDGET = 200_000
DEFAULT_FARBER_CAP = 12


class DisconnectedError(ComplexError):
    pass


@dataclass(frozen=True)
class DistanceResult:
    """Outcome of a distance computation.

    ``value`` is exact when ``exact`` is set; otherwise it is an upper bound
    (the witness is always a verified good cover) and ``lower_bound`` holds
    what was proven from below.
    """

    value: int
    exact: bool
    witness: tuple[int, ...]
    certificates: tuple[ContiguityCertificate, ...] = ()
    lower_bound: int = 0
    undecided: tuple[int, ...] = ()
    stats: dict = field(default_factory=dict, compare=False)


class _SearchBudget(Exception):
    pass


def _pool_is_good(args):
    phi, psi, masks, cap = args
    ev = Goodness(phi, psi, state_cap=cap)
    return [ev.evaluate(m) for m in masks]


class Goodness:
    """Memoised goodness of facet masks for a fixed pair of maps."""

    def __init__(self, phi: SimplicialMap, psi: SimplicialMap, state_cap: int = DEFAULT_STATE_CAP,
                 context: CodomainCore | None = None):
        if phi.domain != psi.domain or phi.codomain != psi.codomain:
            raise ComplexError("maps must share domain and codomain")
        self.phi, self.psi = phi, psi
        self.domain = phi.domain
        self.state_cap = state_cap
        self.context = context or CodomainCore(phi.codomain)
        self.memo: dict[int, bool | None] = {}
        self.calls = 0
        # goodness is down-closed: keep the maximal good and minimal bad masks seen so far
        self.good_max: list[int] = []
        self.bad_min: list[int] = []

    def evaluate(self, mask: int) -> bool | None:
        if mask.bit_count() == 1:
            return True
        K = self.domain
        fm = K.facet_masks
        vmask = 0
        for j in bits(mask):
            vmask |= fm[j]
        verts = list(bits(vmask))
        local = {v: i for i, v in enumerate(verts)}
        facets = [sum(1 << local[v] for v in K.facets[j]) for j in bits(mask)]
        fa = [self.phi.assignment[v] for v in verts]
        ga = [self.psi.assignment[v] for v in verts]
        same, _, _, _ = self.context.search(len(verts), facets, fa, ga, self.state_cap)
        return same

    def __call__(self, mask: int) -> bool | None:
        out = self.memo.get(mask, 0)
        if out == 0:
            out = self.implied(mask)
            if out is None:
                self.calls += 1
                out = self.evaluate(mask)
                self.learn(mask, out)
            self.memo[mask] = out
        return out

    def implied(self, mask: int) -> bool | None:
        if any(g & mask == mask for g in self.good_max):
            return True
        if any(b & mask == b for b in self.bad_min):
            return False
        return None

    def learn(self, mask: int, value: bool | None) -> None:
        if value is True:
            self.good_max = [g for g in self.good_max if g & mask != g] + [mask]
        elif value is False:
            self.bad_min = [b for b in self.bad_min if b & mask != mask] + [mask]

    def prime(self, masks: Iterable[int], threads: int) -> None:
        """Evaluate ``masks`` ahead of need, in worker processes when ``threads > 1``."""
        todo = [m for m in dict.fromkeys(masks) if m not in self.memo]
        if threads <= 1 or len(todo) < 2 * threads:
            for m in todo:
                self(m)
            return
        chunks = [todo[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_pool_is_good, [(self.phi, self.psi, c, self.state_cap) for c in chunks]))
        for chunk, res in zip(chunks, results):
            for m, r in zip(chunk, res):
                self.memo[m] = r
                self.learn(m, r)
        self.calls += len(todo)

    def certificate(self, mask: int) -> ContiguityCertificate:
        L = restrict(self.domain, mask)
        f, g = restrict_map(self.phi, L), restrict_map(self.psi, L)
        return self.context.decide(f, g, cap=self.state_cap).certificate


def is_good(phi: SimplicialMap, psi: SimplicialMap, mask: int | Iterable[int],
            state_cap: int = DEFAULT_STATE_CAP) -> bool | None:
    """Whether both maps restricted to the facet-generated subcomplex agree up to contiguity."""
    if not isinstance(mask, int):
        mask = sum(1 << j for j in set(mask))
    if mask <= 0 or mask >> phi.domain.n_facets:
        raise ComplexError("mask must select a non-empty set of domain facets")
    return Goodness(phi, psi, state_cap).evaluate(mask)


def facet_order(K: SimplicialComplex) -> list[int]:
    """Facets in breadth-first order over shared vertices, ties by index."""
    fm = K.facet_masks
    order: list[int] = []
    seen = 0
    for root in range(K.n_facets):
        if seen >> root & 1:
            continue
        queue = [root]
        seen |= 1 << root
        while queue:
            j = queue.pop(0)
            order.append(j)
            for v in K.facets[j]:
                for i in K.incidence[v]:
                    if not seen >> i & 1:
                        seen |= 1 << i
                        queue.append(i)
    return order


def _first_fit(order: list[int], good) -> list[int]:
    blocks: list[int] = []
    for j in order:
        bit = 1 << j
        for b, m in enumerate(blocks):
            if good(m | bit):
                blocks[b] = m | bit
                break
        else:
            blocks.append(bit)
    return blocks


def _partition(order: list[int], k: int, good, budget: int | None, stats: dict) -> list[int] | None:
    """First partition (in search order) of the facets into at most ``k`` good blocks."""
    blocks: list[int] = []
    nodes = 0
    n = len(order)

    def dfs(i: int) -> bool:
        nonlocal nodes
        if i == n:
            return True
        nodes += 1
        if budget is not None and nodes > budget:
            raise _SearchBudget
        bit = 1 << order[i]
        for b in range(len(blocks)):
            m = blocks[b] | bit
            if good(m):
                blocks[b] = m
                if dfs(i + 1):
                    return True
                blocks[b] = m ^ bit
        if len(blocks) < k:
            blocks.append(bit)
            if dfs(i + 1):
                return True
            blocks.pop()
        return False

    try:
        found = dfs(0)
    finally:
        stats["nodes"] = stats.get("nodes", 0) + nodes
    return list(blocks) if found else None


def _require_connected(*complexes: SimplicialComplex) -> None:
    for K in complexes:
        if not is_connected(K):
            raise DisconnectedError("contiguity distance needs edge-path connected complexes")


def contiguity_distance(
    phi: SimplicialMap,
    psi: SimplicialMap,
    *,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    node_budget: int = DEFAULT_NODE_BUDGET,
    state_cap: int = DEFAULT_STATE_CAP,
    threads: int = 1,
    hints: Iterable[Iterable[int]] = (),
    upper_target: int | None = None,
    lower_target: int | None = None,
) -> DistanceResult:
    """Least ``n`` such that ``n + 1`` good facet-generated subcomplexes cover the domain.

    Up to ``exhaustive_cap`` facets the partition search runs to completion;
    above it the search gets ``node_budget`` nodes and reports an upper bound
    if it runs out. ``hints`` are candidate covers (lists of facet masks);
    each is checked piece by piece and, when good, bounds the search from
    above. With ``upper_target`` set, the search stops as soon as a verified
    cover with at most ``upper_target + 1`` pieces is known; the result is
    then only an upper bound unless the bounds happen to meet. Symmetrically,
    ``lower_target`` stops the search once the proven lower bound reaches it.

    ``exact`` is set exactly when the proven lower bound reaches the value.
    A refutation run that consulted an undecided mask proves nothing.
    """
    if phi.domain != psi.domain or phi.codomain != psi.codomain:
        raise ComplexError("maps must share domain and codomain")
    _require_connected(phi.domain, phi.codomain)
    K = phi.domain
    good = Goodness(phi, psi, state_cap)
    stats: dict = {}
    full = K.full_mask

    def undecided() -> tuple[int, ...]:
        return tuple(sorted(m for m, r in good.memo.items() if r is None))

    def finish(blocks: list[int], exact: bool, lower: int) -> DistanceResult:
        blocks = sorted(blocks, key=lambda m: tuple(bits(m)))
        stats["is_good_calls"] = good.calls
        return DistanceResult(
            value=len(blocks) - 1,
            exact=exact,
            witness=tuple(blocks),
            certificates=tuple(good.certificate(m) for m in blocks),
            lower_bound=len(blocks) - 1 if exact else lower,
            undecided=undecided(),
            stats=stats,
        )

    if upper_target is not None:
        for blocks in _hinted_covers(hints, full, good):
            if len(blocks) - 1 <= upper_target:
                stats["upper_seed"] = len(blocks) - 1
                return finish(blocks, len(blocks) == 1, 0)

    top = good(full)
    if top:
        return finish([full], True, 0)
    lower = 1 if top is False else 0
    order = facet_order(K)
    if lower_target is not None and lower >= lower_target:
        singletons = [1 << j for j in order]
        return finish(singletons, lower >= len(singletons) - 1, lower)

    if threads > 1 and K.n_facets <= exhaustive_cap:
        # pairs of facets are always good over a connected codomain; triples are the first real test
        good.prime((sum(1 << j for j in t) for t in combinations(range(K.n_facets), 3)), threads)
    best = _first_fit(order, good)
    for blocks in _hinted_covers(hints, full, good):
        if len(blocks) < len(best):
            best = blocks
    stats["upper_seed"] = len(best) - 1

    # a refutation only counts if no unknown goodness was consulted on the way
    consulted_unknown = False

    def probe(mask: int) -> bool:
        nonlocal consulted_unknown
        out = good(mask)
        if out is None:
            consulted_unknown = True
        return bool(out)

    budget = None if K.n_facets <= exhaustive_cap else node_budget
    k = lower + 1
    while k < len(best):
        if upper_target is not None and len(best) - 1 <= upper_target:
            break
        consulted_unknown = False
        try:
            found = _partition(order, k, probe, budget, stats)
        except _SearchBudget:
            break
        if found is not None:
            best = found
            break
        if consulted_unknown:
            break
        lower = k
        k += 1
        if lower_target is not None and lower >= lower_target:
            break
    return finish(best, lower >= len(best) - 1, lower)


def _hinted_covers(hints: Iterable[Iterable[int]], full: int, good) -> Iterator[list[int]]:
    """Hints that cover every facet with good pieces, made disjoint."""
    for hint in hints:
        pieces = [m for m in hint if m]
        cover = 0
        for m in pieces:
            cover |= m
        if cover == full and all(good(m) for m in pieces):
            yield _disjoint(pieces)


def _disjoint(pieces: list[int]) -> list[int]:
    out, used = [], 0
    for m in pieces:
        m &= ~used
        if m:
            out.append(m)
            used |= m
    return out


def scat(K: SimplicialComplex, **kw) -> DistanceResult:
    """Simplicial LS category, as the distance from the identity to the constant at vertex 0."""
    _require_connected(K)
    return contiguity_distance(identity_map(K), constant_map(K, K, 0), **kw)


def tc(K: SimplicialComplex, product_cap: int = DEFAULT_PRODUCT_CAP, **kw) -> DistanceResult:
    """Discrete topological complexity as the distance between the two projections of ``K∏K``."""
    _require_connected(K)
    square = categorical_product(K, K, product_cap)
    return contiguity_distance(square.p1, square.p2, **kw)


def scat_map(phi: SimplicialMap, **kw) -> DistanceResult:
    """LS category of a map: distance from ``phi`` to the constant at codomain vertex 0."""
    _require_connected(phi.domain, phi.codomain)
    return contiguity_distance(phi, constant_map(phi.domain, phi.codomain, 0), **kw)


def farber_check(
    K: SimplicialComplex,
    omega: int | Iterable[int],
    section: SimplicialMap,
    square: Product | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> bool | None:
    """Whether ``Δ ∘ section`` is in the class of the inclusion of ``omega`` into ``K∏K``."""
    square = square or categorical_product(K, K)
    L = restrict(square.complex, omega)
    if section.domain != L.complex or section.codomain != K:
        raise ComplexError("section must map the subcomplex omega into K")
    ctx = CodomainCore(square.complex)
    return ctx.decide(compose(diagonal(K, square), section), inclusion_map(L),
                      cap=state_cap, certificate=False).same


@dataclass(frozen=True)
class FarberWitness:
    omega: int
    section: SimplicialMap


def farber_cover_tc(
    K: SimplicialComplex,
    cap: int = DEFAULT_FARBER_CAP,
    state_cap: int = DEFAULT_STATE_CAP,
) -> tuple[int, tuple[FarberWitness, ...]]:
    """TC straight from its definition: fewest Farber subcomplexes covering ``K∏K``, minus one.

    Every facet mask of ``K∏K`` is classified. A section ``s`` of a Farber
    subcomplex satisfies ``s = p1∘Δ∘s ~ p1|Ω``, so the candidate sections are
    exactly the members of the contiguity class of ``p1|Ω``; all of them are
    tried. Farber masks are closed under shrinking, which prunes the scan.
    """
    _require_connected(K)
    square = categorical_product(K, K)
    P = square.complex
    if P.n_facets > cap:
        raise RuntimeError(f"K∏K has {P.n_facets} facets, above the Farber cap {cap}")
    delta = diagonal(K, square)
    ctx = CodomainCore(P)
    sections: dict[int, SimplicialMap | None] = {}
    for size in range(1, P.n_facets + 1):
        for combo in combinations(range(P.n_facets), size):
            mask = sum(1 << j for j in combo)
            if any(sections.get(mask ^ (1 << j)) is None for j in combo if size > 1):
                sections[mask] = None
                continue
            L = restrict(P, mask)
            incl = inclusion_map(L)
            found = None
            for s in contiguity_class_members(restrict_map(square.p1, L), cap=state_cap):
                same = ctx.decide(compose(delta, s), incl, cap=state_cap, certificate=False).same
                if same is None:
                    raise RuntimeError("state cap hit while checking a Farber section")
                if same:
                    found = s
                    break
            sections[mask] = found

    farber = [m for m, s in sections.items() if s is not None]
    maximal = [m for m in farber if not any(o != m and o & m == m for o in farber)]
    full = P.full_mask
    # fewest maximal Farber masks whose union is everything
    frontier = {0: ()}
    pieces = 0
    while full not in frontier:
        pieces += 1
        nxt: dict[int, tuple[int, ...]] = {}
        for covered, used in sorted(frontier.items()):
            for m in maximal:
                u = covered | m
                if u not in nxt and u not in frontier:
                    nxt[u] = used + (m,)
        frontier = nxt
    cover = frontier[full]
    return pieces - 1, tuple(FarberWitness(m, sections[m]) for m in cover)
