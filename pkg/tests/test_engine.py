from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contiguity import (
    ComplexError,
    ContiguityCertificate,
    NotSimplicialError,
    SimplicialMap,
    check_certificate,
    constant_map,
    contiguity_neighbors,
    identity_map,
    is_contiguous,
    parse_complex,
    restrict,
    restrict_map,
    same_contiguity_class,
)
from contiguity.engine import contiguity_class_members
from contiguity.oracle import exhaustive_same_class

from conftest import fixture_map
from strategies import class_walks, map_pairs


def all_maps(K, K2):
    out = []
    for a in product(range(K2.n_vertices), repeat=K.n_vertices):
        try:
            out.append(SimplicialMap(K, K2, a))
        except NotSimplicialError:
            pass
    return out


class TestIsContiguous:
    def test_reflexive(self, boundary):
        f = identity_map(boundary)
        assert is_contiguous(f, f)

    def test_path_identity_vs_middle_constant(self):
        P = parse_complex("a b\nb c")
        assert is_contiguous(identity_map(P), constant_map(P, P, "b"))

    def test_boundary_identity_vs_constant(self, boundary):
        assert not is_contiguous(identity_map(boundary), constant_map(boundary, boundary, "a"))

    def test_mismatch(self, boundary, delta2):
        with pytest.raises(ComplexError):
            is_contiguous(identity_map(boundary), identity_map(delta2))

    @given(map_pairs())
    def test_symmetric(self, pair):
        f, g = pair
        assert is_contiguous(f, g) == is_contiguous(g, f)

    @given(map_pairs(max_vertices=4, max_facets=4))
    def test_facets_suffice(self, pair):
        f, g = pair
        cod = f.codomain
        brute = all(cod.is_simplex_mask(f.image_mask(s) | g.image_mask(s)) for s in f.domain.simplices())
        assert is_contiguous(f, g) == brute


class TestNeighbors:
    def test_point(self):
        pt = parse_complex("a")
        assert contiguity_neighbors(identity_map(pt)) == [identity_map(pt)]

    def test_edge_has_all_four(self):
        D1 = parse_complex("a b")
        assert len(contiguity_neighbors(identity_map(D1))) == 4

    def test_boundary_matches_brute_force(self, boundary):
        f = identity_map(boundary)
        brute = [g for g in all_maps(boundary, boundary) if is_contiguous(f, g)]
        assert len(all_maps(boundary, boundary)) == 27  # any two vertices span an edge or a vertex
        assert contiguity_neighbors(f) == brute
        assert brute == [f]

    @given(map_pairs(max_vertices=4, max_facets=4))
    def test_against_brute_force(self, pair):
        f, _ = pair
        brute = [g for g in all_maps(f.domain, f.codomain) if is_contiguous(f, g)]
        assert contiguity_neighbors(f) == brute


class TestSameClass:
    def test_collapsible_codomain(self, delta2):
        d = same_contiguity_class(identity_map(delta2), constant_map(delta2, delta2, 0))
        assert d.same is True

    def test_boundary_identity_vs_constant(self, boundary):
        d = same_contiguity_class(identity_map(boundary), constant_map(boundary, boundary, "a"))
        assert d.same is False and d.certificate.chain is None
        assert d.certificate.explored >= 1

    def test_arc_folds_to_constant(self):
        f, g = fixture_map("arc_c5"), fixture_map("const_arc_c5")
        d = same_contiguity_class(f, g)
        assert d.same is True
        assert check_certificate(f, g, d.certificate)

    def test_certificate_rejected_when_broken(self, boundary):
        f = identity_map(boundary)
        g = constant_map(boundary, boundary, 0)
        assert not check_certificate(f, g, ContiguityCertificate((f, g), 2))
        assert not check_certificate(f, g, ContiguityCertificate(None, 0))

    def test_cap_gives_unknown(self):
        f, g = fixture_map("id_fig3"), fixture_map("const_fig3")
        assert same_contiguity_class(f, g, cap=1).same is None

    def test_fig3_identity_not_constant(self):
        assert same_contiguity_class(fixture_map("id_fig3"), fixture_map("const_fig3")).same is False

    @given(class_walks())
    def test_walk_members_are_found(self, walk):
        f, g = walk
        d = same_contiguity_class(f, g)
        assert d.same is True
        assert check_certificate(f, g, d.certificate)

    @given(map_pairs(max_vertices=4, max_facets=4))
    def test_agrees_with_oracle(self, pair):
        f, g = pair
        assert same_contiguity_class(f, g).same == exhaustive_same_class(f, g)

    @given(map_pairs(max_vertices=4, max_facets=4), st.data())
    def test_restriction_stable(self, pair, data):
        f, g = pair
        if not same_contiguity_class(f, g).same:
            return
        mask = data.draw(st.integers(1, (1 << f.domain.n_facets) - 1))
        L = restrict(f.domain, mask)
        assert same_contiguity_class(restrict_map(f, L), restrict_map(g, L)).same

    def test_equivalence_relation_on_small_family(self):
        K = parse_complex("a b\nb c")
        C4 = parse_complex("w x\nx y\ny z\nz w")
        maps = all_maps(K, C4)
        rel = {(i, j): same_contiguity_class(f, g, certificate=False).same
               for i, f in enumerate(maps) for j, g in enumerate(maps)}
        n = len(maps)
        for i in range(n):
            assert rel[i, i]
            for j in range(n):
                assert rel[i, j] == rel[j, i]
                if rel[i, j]:
                    assert all(rel[i, k] == rel[j, k] for k in range(n))

    def test_class_members_match_oracle(self, boundary):
        f = identity_map(parse_complex("a b\nb c"))
        P = f.domain
        members = contiguity_class_members(f)
        others = [g for g in all_maps(P, P) if g not in members]
        assert all(exhaustive_same_class(f, g) for g in members)
        assert not any(exhaustive_same_class(f, g) for g in others)
