"""Finite abstract simplicial complexes, facet-generated subcomplexes and simplicial maps.

Complexes are stored by their facets only. Vertices carry a dense integer id
and a display name; a simplex is any non-empty subset of a facet. Vertex sets
are handled internally as ``int`` bitmasks (bit ``i`` is vertex ``i``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

NAME_RE = re.compile(r"[A-Za-z0-9_(),'{}-]+")


class ComplexError(ValueError):
    """Invalid complex, map or query."""


class ParseError(ComplexError):
    pass


class NotSimplicialError(ComplexError):
    """A vertex assignment sends some facet outside the codomain."""

    def __init__(self, message: str, facet: tuple[str, ...]):
        super().__init__(message)
        self.facet = facet


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(ids: Iterable[int]) -> int:
    mask = 0
    for i in ids:
        mask |= 1 << i
    return mask


def maximal_masks(masks: Iterable[int]) -> list[int]:
    """Deduplicate and drop every mask contained in another one."""
    uniq = sorted(set(masks), key=lambda m: -m.bit_count())
    kept: list[int] = []
    for m in uniq:
        if not any(m & k == m for k in kept):
            kept.append(m)
    return kept


@dataclass(frozen=True)
class SimplicialComplex:
    """A complex given by vertex names and its maximal simplices.

    Build instances with :meth:`build` or :meth:`from_facets`; the raw
    constructor expects canonical input (sorted, deduplicated, maximal facets
    covering every vertex) and checks it.
    """

    names: tuple[str, ...]
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.names:
            raise ComplexError("a complex needs at least one vertex")
        if len(set(self.names)) != len(self.names):
            raise ComplexError("vertex names must be unique")
        seen = 0
        for facet in self.facets:
            if not facet or list(facet) != sorted(set(facet)):
                raise ComplexError(f"facet {facet} is not a sorted vertex tuple")
            if facet[-1] >= len(self.names) or facet[0] < 0:
                raise ComplexError(f"facet {facet} uses an unknown vertex id")
            seen |= to_mask(facet)
        if seen != (1 << len(self.names)) - 1:
            raise ComplexError("every vertex must lie in some facet")
        if list(self.facets) != sorted(set(self.facets)):
            raise ComplexError("facets must be deduplicated and sorted")
        masks = self.facet_masks
        if len(maximal_masks(masks)) != len(masks):
            raise ComplexError("facets must be pairwise incomparable")

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, names: Sequence[str], faces: Iterable[Iterable[int]]) -> SimplicialComplex:
        """Canonical complex on ``names`` generated by ``faces`` (vertex ids)."""
        kept = maximal_masks(to_mask(f) for f in faces)
        facets = sorted(tuple(bits(m)) for m in kept)
        return cls(tuple(names), tuple(facets))

    @classmethod
    def from_facets(cls, faces: Iterable[Iterable[str]]) -> SimplicialComplex:
        """Complex generated by faces given as name collections; ids follow sorted names."""
        faces = [list(f) for f in faces]
        for f in faces:
            if not f:
                raise ComplexError("empty face")
            if len(set(f)) != len(f):
                raise ComplexError(f"duplicate vertex name in face {f}")
        names = sorted({v for f in faces for v in f})
        index = {v: i for i, v in enumerate(names)}
        return cls.build(names, ([index[v] for v in f] for f in faces))

    # -- basic structure ----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.names)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def facet_masks(self) -> tuple[int, ...]:
        return tuple(to_mask(f) for f in self.facets)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the indices of the facets containing it."""
        inc: list[list[int]] = [[] for _ in self.names]
        for j, facet in enumerate(self.facets):
            for v in facet:
                inc[v].append(j)
        return tuple(tuple(x) for x in inc)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.facets)) - 1

    def vertex_id(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ComplexError(f"unknown vertex {name!r}") from None

    def is_simplex_mask(self, mask: int) -> bool:
        if not mask:
            return False
        low = (mask & -mask).bit_length() - 1
        if low >= len(self.names) or mask >> len(self.names):
            return False
        fm = self.facet_masks
        return any(fm[j] & mask == mask for j in self.incidence[low])

    def star_union(self, mask: int) -> int:
        """Union of all facets containing the simplex ``mask`` (0 if it is not a simplex)."""
        out = 0
        if not mask:
            return (1 << len(self.names)) - 1
        low = (mask & -mask).bit_length() - 1
        fm = self.facet_masks
        for j in self.incidence[low]:
            if fm[j] & mask == mask:
                out |= fm[j]
        return out

    def simplices(self) -> list[tuple[int, ...]]:
        """All simplices, ordered by dimension and then lexicographically by ids."""
        found: set[tuple[int, ...]] = set()
        for facet in self.facets:
            for r in range(1, len(facet) + 1):
                found.update(combinations(facet, r))
        return sorted(found, key=lambda s: (len(s), s))

    def edges(self) -> list[tuple[int, int]]:
        found: set[tuple[int, int]] = set()
        for facet in self.facets:
            found.update(combinations(facet, 2))
        return sorted(found)

    def facet_names(self, j: int) -> tuple[str, ...]:
        return tuple(self.names[v] for v in self.facets[j])

    def to_text(self) -> str:
        """Serialize in the ``.cplx`` facet format (bit-exact canonical form)."""
        lines = sorted(sorted(self.names[v] for v in f) for f in self.facets)
        return "".join(" ".join(line) + "\n" for line in lines)

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(self.facet_names(j)) + "}" for j in range(self.n_facets))
        return f"SimplicialComplex[{body}]"


def parse_complex(text: str) -> SimplicialComplex:
    """Parse the ``.cplx`` facet format: one face per line, ``#`` comments."""
    faces: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        for tok in tokens:
            if not NAME_RE.fullmatch(tok):
                raise ParseError(f"line {lineno}: unparsable token {tok!r}")
        if len(set(tokens)) != len(tokens):
            raise ParseError(f"line {lineno}: duplicate vertex name in one facet")
        faces.append(tokens)
    if not faces:
        raise ParseError("empty document")
    return SimplicialComplex.from_facets(faces)


def is_simplex(K: SimplicialComplex, s: Iterable[str]) -> bool:
    return K.is_simplex_mask(to_mask(K.vertex_id(v) for v in s))


def is_connected(K: SimplicialComplex) -> bool:
    """Whether the 1-skeleton is connected."""
    reached = K.facet_masks[0]
    fm = K.facet_masks
    grown = True
    while grown:
        grown = False
        for m in fm:
            if m & reached and m & ~reached:
                reached |= m
                grown = True
    return reached == (1 << K.n_vertices) - 1


def components(K: SimplicialComplex) -> list[int]:
    """Vertex masks of the connected components, ordered by lowest vertex."""
    left = list(K.facet_masks)
    out: list[int] = []
    while left:
        comp = left.pop(0)
        grown = True
        while grown:
            grown = False
            rest = []
            for m in left:
                if m & comp:
                    comp |= m
                    grown = True
                else:
                    rest.append(m)
            left = rest
        out.append(comp)
    return sorted(out, key=lambda m: m & -m)


@dataclass(frozen=True)
class Subcomplex:
    """Subcomplex of ``parent`` generated by the facets selected in ``facet_mask``."""

    parent: SimplicialComplex
    facet_mask: int

    def __post_init__(self) -> None:
        if self.facet_mask <= 0:
            raise ComplexError("facet mask must be non-empty")
        if self.facet_mask >> self.parent.n_facets:
            raise ComplexError("facet mask selects facets the parent does not have")

    @cached_property
    def vertex_ids(self) -> tuple[int, ...]:
        """Parent ids of the subcomplex vertices, in subcomplex id order."""
        fm = self.parent.facet_masks
        return tuple(bits(_union(fm[j] for j in bits(self.facet_mask))))

    @cached_property
    def complex(self) -> SimplicialComplex:
        local = {v: i for i, v in enumerate(self.vertex_ids)}
        names = [self.parent.names[v] for v in self.vertex_ids]
        faces = [[local[v] for v in self.parent.facets[j]] for j in bits(self.facet_mask)]
        return SimplicialComplex.build(names, faces)

    @property
    def facet_indices(self) -> tuple[int, ...]:
        return tuple(bits(self.facet_mask))


def _union(masks: Iterable[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def restrict(K: SimplicialComplex, mask: int | Iterable[int]) -> Subcomplex:
    if not isinstance(mask, int):
        mask = to_mask(mask)
    return Subcomplex(K, mask)


@dataclass(frozen=True)
class SimplicialMap:
    """Vertex assignment ``domain -> codomain`` carrying simplices to simplices."""

    domain: SimplicialComplex
    codomain: SimplicialComplex
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignment) != self.domain.n_vertices:
            raise ComplexError("assignment must be total on the domain vertices")
        n = self.codomain.n_vertices
        if any(not 0 <= w < n for w in self.assignment):
            raise ComplexError("assignment uses a vertex outside the codomain")
        for j, facet in enumerate(self.domain.facets):
            if not self.codomain.is_simplex_mask(self.image_mask(facet)):
                names = self.domain.facet_names(j)
                raise NotSimplicialError(f"image of facet {{{','.join(names)}}} is not a simplex", names)

    def __call__(self, v: int) -> int:
        return self.assignment[v]

    def image_mask(self, simplex: Iterable[int]) -> int:
        a = self.assignment
        out = 0
        for v in simplex:
            out |= 1 << a[v]
        return out

    def as_names(self) -> dict[str, str]:
        cod = self.codomain.names
        return {name: cod[w] for name, w in zip(self.domain.names, self.assignment)}

    def __repr__(self) -> str:
        pairs = ", ".join(f"{k}->{v}" for k, v in self.as_names().items())
        return f"SimplicialMap({pairs})"


def make_map(
    K: SimplicialComplex,
    K2: SimplicialComplex,
    assignment: Mapping[str, str] | Sequence[int],
) -> SimplicialMap:
    """Validated simplicial map from a name mapping or an id sequence."""
    if isinstance(assignment, Mapping):
        missing = [v for v in K.names if v not in assignment]
        if missing:
            raise ComplexError(f"partial assignment: no image for {missing}")
        extra = [v for v in assignment if v not in K.index]
        if extra:
            raise ComplexError(f"assignment names unknown domain vertices {extra}")
        ids = tuple(K2.vertex_id(assignment[v]) for v in K.names)
    else:
        ids = tuple(int(w) for w in assignment)
    return SimplicialMap(K, K2, ids)


def identity_map(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, tuple(range(K.n_vertices)))


def constant_map(K: SimplicialComplex, K2: SimplicialComplex, w: int | str = 0) -> SimplicialMap:
    if isinstance(w, str):
        w = K2.vertex_id(w)
    return SimplicialMap(K, K2, (w,) * K.n_vertices)


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """The map ``g ∘ f``."""
    if f.codomain is not g.domain and f.codomain != g.domain:
        raise ComplexError("cannot compose: codomain of f differs from domain of g")
    ga = g.assignment
    return SimplicialMap(f.domain, g.codomain, tuple(ga[w] for w in f.assignment))


def restrict_map(f: SimplicialMap, L: Subcomplex) -> SimplicialMap:
    """Restriction of ``f`` to a subcomplex of its domain."""
    if L.parent is not f.domain and L.parent != f.domain:
        raise ComplexError("subcomplex is not taken in the domain of the map")
    a = f.assignment
    return SimplicialMap(L.complex, f.codomain, tuple(a[v] for v in L.vertex_ids))


def inclusion_map(L: Subcomplex) -> SimplicialMap:
    return SimplicialMap(L.complex, L.parent, L.vertex_ids)


def are_isomorphic(K: SimplicialComplex, K2: SimplicialComplex) -> bool:
    """Decide isomorphism by backtracking over vertex bijections.

    Candidates are pruned by the multiset of incident facet sizes, and every
    partially assigned facet must land inside a facet of the same size.
    """
    if K.n_vertices != K2.n_vertices or K.n_facets != K2.n_facets:
        return False
    if sorted(map(len, K.facets)) != sorted(map(len, K2.facets)):
        return False

    def signature(C: SimplicialComplex, v: int) -> tuple[int, ...]:
        return tuple(sorted(len(C.facets[j]) for j in C.incidence[v]))

    sig1 = [signature(K, v) for v in range(K.n_vertices)]
    sig2 = [signature(K2, v) for v in range(K2.n_vertices)]
    if sorted(sig1) != sorted(sig2):
        return False

    target = set(K2.facet_masks)
    by_size: dict[int, list[int]] = {}
    for m in K2.facet_masks:
        by_size.setdefault(m.bit_count(), []).append(m)

    # most constrained vertices first, then neighbours of already placed ones
    order: list[int] = []
    placed = 0
    remaining = set(range(K.n_vertices))
    while remaining:
        def score(v: int) -> tuple[int, int, int]:
            touching = sum(1 for j in K.incidence[v] if K.facet_masks[j] & placed)
            rarity = sum(1 for s in sig2 if s == sig1[v])
            return (-touching, rarity, v)

        v = min(remaining, key=score)
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)

    image = [-1] * K.n_vertices
    used = [False] * K2.n_vertices

    def consistent(v: int) -> bool:
        for j in K.incidence[v]:
            facet = K.facets[j]
            partial = 0
            done = True
            for u in facet:
                if image[u] < 0:
                    done = False
                else:
                    partial |= 1 << image[u]
            if done:
                if partial not in target:
                    return False
            elif not any(m & partial == partial for m in by_size.get(len(facet), ())):
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for w in range(K2.n_vertices):
            if used[w] or sig2[w] != sig1[v]:
                continue
            image[v] = w
            used[w] = True
            if consistent(v) and extend(k + 1):
                return True
            image[v] = -1
            used[w] = False
        return False

    return extend(0)
