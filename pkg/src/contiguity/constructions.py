"""Barycentric subdivision and categorical products, with their canonical maps."""
from __future__ import annotations

from itertools import permutations
from typing import NamedTuple

from .complex import ComplexError, SimplicialComplex, SimplicialMap, compose

DEFAULT_SD_CAP = 1 << 16
DEFAULT_PRODUCT_CAP = 1 << 12


class SizeGuardError(RuntimeError):
    """A construction would exceed its configured size cap."""


def sd_vertex_name(K: SimplicialComplex, simplex: tuple[int, ...]) -> str:
    return "{" + ",".join(sorted(K.names[v] for v in simplex)) + "}"


def product_vertex_name(v: str, w: str) -> str:
    return f"({v},{w})"


def _simplex_table(K: SimplicialComplex, cap: int) -> list[tuple[int, ...]]:
    total = sum((1 << len(f)) - 1 for f in K.facets)
    if total > cap:
        # the per-facet count over-counts shared faces; recount exactly before refusing
        simplices = K.simplices()
        if len(simplices) > cap:
            raise SizeGuardError(f"{len(simplices)} simplices exceed the subdivision cap {cap}")
        return simplices
    return K.simplices()


def barycentric_subdivision(K: SimplicialComplex, cap: int = DEFAULT_SD_CAP) -> SimplicialComplex:
    """Order complex of the face poset: vertices are simplices, facets are full flags."""
    simplices = _simplex_table(K, cap)
    index = {s: i for i, s in enumerate(simplices)}
    names = [sd_vertex_name(K, s) for s in simplices]
    flags = []
    for facet in K.facets:
        for order in permutations(facet):
            flags.append([index[tuple(sorted(order[: k + 1]))] for k in range(len(order))])
    return SimplicialComplex.build(names, flags)


def sd_map(f: SimplicialMap, cap: int = DEFAULT_SD_CAP) -> SimplicialMap:
    """Induced map on subdivisions: the vertex ``σ`` goes to the vertex ``f(σ)``."""
    dom, cod = f.domain, f.codomain
    sd_dom = barycentric_subdivision(dom, cap)
    sd_cod = barycentric_subdivision(cod, cap)
    target = {s: i for i, s in enumerate(_simplex_table(cod, cap))}
    a = f.assignment
    assignment = tuple(
        target[tuple(sorted({a[v] for v in s}))] for s in _simplex_table(dom, cap)
    )
    return SimplicialMap(sd_dom, sd_cod, assignment)


class Product(NamedTuple):
    complex: SimplicialComplex
    p1: SimplicialMap
    p2: SimplicialMap


def categorical_product(
    K: SimplicialComplex, K2: SimplicialComplex, cap: int = DEFAULT_PRODUCT_CAP
) -> Product:
    """Categorical product: facets are ``σ×τ`` over pairs of facets.

    The vertex ``(v, w)`` gets id ``v * |V(K2)| + w``.
    """
    n1, n2 = K.n_vertices, K2.n_vertices
    if n1 * n2 > cap or K.n_facets * K2.n_facets > cap:
        raise SizeGuardError(
            f"product of {n1}x{n2} vertices / {K.n_facets}x{K2.n_facets} facets exceeds cap {cap}"
        )
    names = [product_vertex_name(v, w) for v in K.names for w in K2.names]
    faces = [[v * n2 + w for v in s for w in t] for s in K.facets for t in K2.facets]
    P = SimplicialComplex.build(names, faces)
    # maximal σ, τ make distinct facet pairs incomparable
    assert P.n_facets == K.n_facets * K2.n_facets
    p1 = SimplicialMap(P, K, tuple(i // n2 for i in range(n1 * n2)))
    p2 = SimplicialMap(P, K2, tuple(i % n2 for i in range(n1 * n2)))
    return Product(P, p1, p2)


def pairing(f: SimplicialMap, g: SimplicialMap, product: Product) -> SimplicialMap:
    """The map ``v -> (f(v), g(v))`` into ``product`` (universal property)."""
    if f.domain != g.domain:
        raise ComplexError("pairing needs maps with a common domain")
    if f.codomain != product.p1.codomain or g.codomain != product.p2.codomain:
        raise ComplexError("pairing targets do not match the product factors")
    n2 = g.codomain.n_vertices
    return SimplicialMap(
        f.domain,
        product.complex,
        tuple(a * n2 + b for a, b in zip(f.assignment, g.assignment)),
    )


def _square(K: SimplicialComplex, square: Product | None) -> Product:
    if square is None:
        return categorical_product(K, K)
    if square.p1.codomain != K or square.p2.codomain != K:
        raise ComplexError("given product is not K x K")
    return square


def diagonal(K: SimplicialComplex, square: Product | None = None) -> SimplicialMap:
    """``v -> (v, v)`` into ``K∏K``."""
    square = _square(K, square)
    n = K.n_vertices
    return SimplicialMap(K, square.complex, tuple(v * n + v for v in range(n)))


def axis_inclusion(
    K: SimplicialComplex, v0: int | str, slot: int, square: Product | None = None
) -> SimplicialMap:
    """``v -> (v, v0)`` for slot 1, ``v -> (v0, v)`` for slot 2."""
    square = _square(K, square)
    if isinstance(v0, str):
        v0 = K.vertex_id(v0)
    n = K.n_vertices
    if not 0 <= v0 < n:
        raise ComplexError(f"unknown vertex id {v0}")
    if slot == 1:
        a = tuple(v * n + v0 for v in range(n))
    elif slot == 2:
        a = tuple(v0 * n + v for v in range(n))
    else:
        raise ComplexError("slot must be 1 or 2")
    return SimplicialMap(K, square.complex, a)


def product_map(f: SimplicialMap, g: SimplicialMap, target: Product) -> SimplicialMap:
    """``f∏g`` from the product of the domains; built as a pairing of ``f∘p1`` and ``g∘p2``."""
    source = categorical_product(f.domain, g.domain)
    return pairing(compose(f, source.p1), compose(g, source.p2), target)
