"""Contiguity of simplicial maps and contiguity-class decisions.

Class membership is decided by breadth-first search over the finite space of
simplicial maps. Two reductions keep that space small:

* the codomain is replaced by its core: with ``r`` the core retraction and
  ``ι`` the inclusion, ``ι∘r`` is in the class of the identity, so
  ``f ~ g`` iff ``r∘f ~ r∘g``;
* the domain is replaced by its core in the same way, since ``f ~ g`` iff
  ``f∘ι ~ g∘ι``.

The search moves one vertex at a time. Any one-step contiguity ``f ~c g`` can
be realised by changing vertices one by one (every intermediate assignment
lands inside ``f(σ) ∪ g(σ)``), so single-vertex moves reach exactly the
contiguity class.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .collapse import strong_collapse_masks
from .complex import ComplexError, SimplicialComplex, SimplicialMap, bits

DEFAULT_STATE_CAP = 1_000_000


@dataclass(frozen=True)
class ContiguityCertificate:
    """Chain of one-step contiguous maps, or a refutation.

    ``chain`` is ``None`` when no chain exists (``explored`` then counts the
    exhausted component) or when the search hit its state cap.
    """

    chain: tuple[SimplicialMap, ...] | None
    explored: int


class ClassDecision(NamedTuple):
    same: bool | None
    certificate: ContiguityCertificate


def _check_parallel(f: SimplicialMap, g: SimplicialMap) -> None:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ComplexError("maps must share domain and codomain")


def is_contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    """One-step contiguity, checked on facets only."""
    _check_parallel(f, g)
    cod = f.codomain
    return all(cod.is_simplex_mask(f.image_mask(s) | g.image_mask(s)) for s in f.domain.facets)


def contiguity_neighbors(f: SimplicialMap) -> list[SimplicialMap]:
    """Every simplicial map one-step contiguous to ``f`` (``f`` included), in lexicographic order."""
    dom, cod = f.domain, f.codomain
    fimg = [f.image_mask(s) for s in dom.facets]
    cand = []
    for v in range(dom.n_vertices):
        allowed = (1 << cod.n_vertices) - 1
        for j in dom.incidence[v]:
            allowed &= cod.star_union(fimg[j])
        cand.append(list(bits(allowed)))
    # a facet is checked once its last vertex (in id order) is assigned
    closing: list[list[int]] = [[] for _ in range(dom.n_vertices)]
    for j, facet in enumerate(dom.facets):
        closing[facet[-1]].append(j)
    out: list[SimplicialMap] = []
    g = [0] * dom.n_vertices

    def extend(v: int) -> None:
        if v == dom.n_vertices:
            out.append(SimplicialMap(dom, cod, tuple(g)))
            return
        for w in cand[v]:
            g[v] = w
            ok = True
            for j in closing[v]:
                m = fimg[j]
                for u in dom.facets[j]:
                    m |= 1 << g[u]
                if not cod.is_simplex_mask(m):
                    ok = False
                    break
            if ok:
                extend(v + 1)

    extend(0)
    return out


class _Space:
    """Simplicial maps ``n``-vertex domain -> codomain as assignment tuples."""

    def __init__(self, n: int, facets: Sequence[Sequence[int]], cod_facets: Sequence[int]):
        self.n = n
        self.facets = [tuple(f) for f in facets]
        self.inc: list[list[int]] = [[] for _ in range(n)]
        for j, facet in enumerate(self.facets):
            for v in facet:
                self.inc[v].append(j)
        self.cod_facets = list(cod_facets)
        self._star: dict[int, int] = {}

    def star(self, mask: int) -> int:
        out = self._star.get(mask)
        if out is None:
            out = 0
            for m in self.cod_facets:
                if m & mask == mask:
                    out |= m
            self._star[mask] = out
        return out

    def moves(self, state: tuple[int, ...]):
        img = []
        for facet in self.facets:
            m = 0
            for u in facet:
                m |= 1 << state[u]
            img.append(m)
        star = self.star
        for v in range(self.n):
            allowed = -1
            for j in self.inc[v]:
                allowed &= star(img[j])
            allowed &= ~(1 << state[v])
            while allowed:
                low = allowed & -allowed
                w = low.bit_length() - 1
                allowed ^= low
                yield state[:v] + (w,) + state[v + 1 :]


class _CapExceeded(Exception):
    pass


def _bfs_meet(space: _Space, start: tuple, goal: tuple, cap: int):
    """Bidirectional BFS. Returns ``(path or None, explored)``; raises on cap."""
    if start == goal:
        return [start], 1
    par_a: dict[tuple, tuple | None] = {start: None}
    par_b: dict[tuple, tuple | None] = {goal: None}
    front_a, front_b = [start], [goal]
    while front_a and front_b:
        forward = len(front_a) <= len(front_b)
        front, par, other = (front_a, par_a, par_b) if forward else (front_b, par_b, par_a)
        nxt = []
        meet = None
        for s in front:
            for t in space.moves(s):
                if t in par:
                    continue
                par[t] = s
                if t in other:
                    meet = t
                    break
                nxt.append(t)
            if meet is not None:
                break
            if len(par_a) + len(par_b) > cap:
                raise _CapExceeded(len(par_a) + len(par_b))
        if meet is not None:
            left = _walk(par_a, meet)[::-1]
            right = _walk(par_b, meet)
            return left + right[1:], len(par_a) + len(par_b)
        if forward:
            front_a = nxt
        else:
            front_b = nxt
    return None, len(par_a) + len(par_b)


def _walk(par: dict, s: tuple) -> list:
    out = [s]
    while par[s] is not None:
        s = par[s]
        out.append(s)
    return out


class CodomainCore:
    """Core reduction of a fixed codomain, reusable across many decisions."""

    def __init__(self, K: SimplicialComplex):
        self.complex = K
        alive, facets, trace, retraction = strong_collapse_masks(K.n_vertices, K.facet_masks)
        self.alive = list(bits(alive))
        local = {v: i for i, v in enumerate(self.alive)}
        self.local = local
        self.trace = trace
        self.retraction = retraction
        self.to_core = [local[retraction[w]] for w in range(K.n_vertices)]
        self.core_facets = [sum(1 << local[v] for v in bits(m)) for m in facets]
        self._spaces: dict[tuple, _Space] = {}
        # the decision depends only on the reduced problem, so equal reductions share one search
        self._decided: dict[tuple, tuple] = {}

    def space(self, n: int, facets: tuple[tuple[int, ...], ...]) -> _Space:
        key = (n, facets)
        sp = self._spaces.get(key)
        if sp is None:
            sp = _Space(n, facets, self.core_facets)
            if len(self._spaces) < 4096:
                self._spaces[key] = sp
        return sp

    def search(self, n: int, facet_masks, fa, ga, cap: int = DEFAULT_STATE_CAP):
        """Decide on raw data: an ``n``-vertex domain given by facet masks, assignments into the full codomain.

        Returns ``(same, explored, path, domain_reduction)`` where ``path`` is the
        chain of reduced states when ``same`` is true.
        """
        d_alive, d_facets, d_trace, d_retr = strong_collapse_masks(n, facet_masks)
        d_ids = list(bits(d_alive))
        d_local = {v: i for i, v in enumerate(d_ids)}
        core_facets = tuple(sorted(tuple(d_local[v] for v in bits(m)) for m in d_facets))
        tc = self.to_core
        start = tuple(tc[fa[v]] for v in d_ids)
        goal = tuple(tc[ga[v]] for v in d_ids)
        reduction = (d_ids, d_trace, d_retr)
        key = (core_facets, start, goal)
        hit = self._decided.get(key)
        if hit is not None and (hit[0] is not None or hit[1] >= cap):
            return hit[0], hit[1], hit[2], reduction
        try:
            path, explored = _bfs_meet(self.space(len(d_ids), core_facets), start, goal, cap)
        except _CapExceeded as exc:
            out = (None, exc.args[0], None)
        else:
            out = (path is not None, explored, path)
        if len(self._decided) < 200_000:
            self._decided[key] = out
        return out[0], out[1], out[2], reduction

    def decide(
        self,
        f: SimplicialMap,
        g: SimplicialMap,
        cap: int = DEFAULT_STATE_CAP,
        certificate: bool = True,
    ) -> ClassDecision:
        _check_parallel(f, g)
        if f.codomain != self.complex:
            raise ComplexError("map codomain differs from the reduced codomain")
        dom = f.domain
        same, explored, path, reduction = self.search(
            dom.n_vertices, dom.facet_masks, f.assignment, g.assignment, cap
        )
        if not same:
            return ClassDecision(same, ContiguityCertificate(None, explored))
        chain = self._lift(f, g, path, *reduction) if certificate else None
        return ClassDecision(True, ContiguityCertificate(chain, explored))

    def _lift(self, f, g, path, d_ids, d_trace, d_retr) -> tuple[SimplicialMap, ...]:
        dom = f.domain
        n = dom.n_vertices
        d_local = {v: i for i, v in enumerate(d_ids)}
        r_dom = [d_local[d_retr[u]] for u in range(n)]

        def side(h: SimplicialMap) -> list[tuple[int, ...]]:
            seq = [h.assignment]
            rho = list(range(n))
            for v, w in d_trace:
                rho = [w if x == v else x for x in rho]
                seq.append(tuple(h.assignment[x] for x in rho))
            last = seq[-1]
            for v, w in self.trace:
                last = tuple(w if x == v else x for x in last)
                seq.append(last)
            return seq

        middle = [tuple(self.alive[s[r_dom[u]]] for u in range(n)) for s in path]
        raw = side(f) + middle + side(g)[::-1]
        chain: list[tuple[int, ...]] = []
        for a in raw:
            if not chain or chain[-1] != a:
                chain.append(a)
        return tuple(SimplicialMap(dom, f.codomain, a) for a in chain)


def same_contiguity_class(
    f: SimplicialMap,
    g: SimplicialMap,
    cap: int = DEFAULT_STATE_CAP,
    certificate: bool = True,
) -> ClassDecision:
    """Decide ``f ~ g``; ``same`` is ``None`` when the state cap was hit."""
    _check_parallel(f, g)
    return CodomainCore(f.codomain).decide(f, g, cap=cap, certificate=certificate)


def contiguity_class_members(f: SimplicialMap, cap: int = DEFAULT_STATE_CAP) -> list[SimplicialMap]:
    """All maps in the contiguity class of ``f``, without any core reduction.

    Raises ``RuntimeError`` when the class has more than ``cap`` members.
    """
    dom, cod = f.domain, f.codomain
    space = _Space(dom.n_vertices, dom.facets, cod.facet_masks)
    seen = {f.assignment: None}
    queue = deque([f.assignment])
    while queue:
        s = queue.popleft()
        for t in space.moves(s):
            if t not in seen:
                seen[t] = None
                if len(seen) > cap:
                    raise RuntimeError(f"contiguity class exceeds {cap} maps")
                queue.append(t)
    return [SimplicialMap(dom, cod, a) for a in seen]


def check_certificate(f: SimplicialMap, g: SimplicialMap, cert: ContiguityCertificate) -> bool:
    """Independently re-check a positive certificate."""
    chain = cert.chain
    if not chain or chain[0] != f or chain[-1] != g:
        return False
    return all(is_contiguous(a, b) for a, b in zip(chain, chain[1:]))
