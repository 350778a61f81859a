from __future__ import annotations

import random

import pytest
from hypothesis import given

from contiguity import (
    SizeGuardError,
    are_isomorphic,
    axis_inclusion,
    barycentric_subdivision,
    categorical_product,
    compose,
    constant_map,
    diagonal,
    identity_map,
    make_map,
    pairing,
    parse_complex,
    same_contiguity_class,
    sd_map,
)
from contiguity.generate import random_class_member, random_map

from conftest import fixture_complex
from strategies import complexes, seeds


class TestSubdivision:
    def test_edge(self):
        sd = barycentric_subdivision(parse_complex("a b"))
        assert sorted(sd.names) == ["{a,b}", "{a}", "{b}"]
        assert sd.to_text() == "{a,b} {a}\n{a,b} {b}\n"

    def test_boundary_is_hexagon(self, boundary):
        sd = barycentric_subdivision(boundary)
        hexagon = parse_complex("1 2\n2 3\n3 4\n4 5\n5 6\n6 1")
        assert are_isomorphic(sd, hexagon)

    def test_triangle(self, delta2):
        sd = barycentric_subdivision(delta2)
        assert sd.n_vertices == 7 and sd.n_facets == 6 and sd.dim == 2

    def test_fixture_matches(self, boundary):
        sd = barycentric_subdivision(boundary)
        assert parse_complex(sd.to_text()) == fixture_complex("sd_boundary_delta2")

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            barycentric_subdivision(parse_complex("a b c d e"), cap=10)

    def test_sd_identity_and_constant(self, boundary):
        sd = barycentric_subdivision(boundary)
        assert sd_map(identity_map(boundary)) == identity_map(sd)
        c = sd_map(constant_map(boundary, boundary, "a"))
        assert set(c.as_names().values()) == {"{a}"}

    def test_collapse_to_point(self):
        f = constant_map(parse_complex("a b"), parse_complex("p"), 0)
        g = sd_map(f)
        assert g.domain.n_vertices == 3 and set(g.as_names().values()) == {"{p}"}

    @given(seeds)
    def test_functorial(self, seed):
        rng = random.Random(seed)
        from contiguity.generate import random_complex

        A, B, C = (random_complex(rng, 4, 4) for _ in range(3))
        f, g = random_map(rng, A, B), random_map(rng, B, C)
        assert sd_map(compose(g, f)) == compose(sd_map(g), sd_map(f))

    @pytest.mark.parametrize("f_name,g_name", [("arc_c5", "const_arc_c5"), ("id_c4", "id_c4")])
    def test_same_class_survives_subdivision(self, f_name, g_name):
        from conftest import fixture_map

        f, g = fixture_map(f_name), fixture_map(g_name)
        assert same_contiguity_class(f, g).same
        assert same_contiguity_class(sd_map(f), sd_map(g)).same

    @given(seeds)
    def test_same_class_survives_subdivision_random(self, seed):
        rng = random.Random(seed)
        from contiguity.generate import random_complex

        K, K2 = random_complex(rng, 4, 4), random_complex(rng, 4, 4)
        f = random_map(rng, K, K2)
        g = random_class_member(rng, f)
        assert same_contiguity_class(sd_map(f), sd_map(g)).same


class TestProduct:
    def test_edge_squared_is_simplex(self):
        D1 = parse_complex("a b")
        prod = categorical_product(D1, D1)
        assert prod.complex.n_facets == 1 and prod.complex.n_vertices == 4
        assert prod.complex == fixture_complex("delta1_x_delta1")

    def test_boundary_squared(self, boundary):
        P = categorical_product(boundary, boundary).complex
        assert P.n_vertices == 9 and P.n_facets == 9
        assert all(len(f) == 4 for f in P.facets)
        assert P == fixture_complex("boundary_x_boundary")

    def test_point_is_unit(self, fig3):
        assert are_isomorphic(categorical_product(parse_complex("p"), fig3).complex, fig3)

    def test_size_guard(self, fig3):
        with pytest.raises(SizeGuardError):
            categorical_product(fig3, fig3, cap=20)

    def test_diagonal(self):
        D1 = parse_complex("a b")
        square = categorical_product(D1, D1)
        d = diagonal(D1, square)
        assert d.as_names() == {"a": "(a,a)", "b": "(b,b)"}
        assert compose(square.p1, d) == identity_map(D1)
        assert compose(square.p2, d) == identity_map(D1)

    def test_axis_inclusions(self, fig3):
        square = categorical_product(fig3, fig3)
        i1 = axis_inclusion(fig3, 0, 1, square)
        assert compose(square.p1, i1) == identity_map(fig3)
        assert compose(square.p2, i1) == constant_map(fig3, fig3, 0)
        pt = parse_complex("p")
        i2 = axis_inclusion(pt, 0, 2)
        assert i2.codomain.n_vertices == 1

    def test_axis_unknown_vertex(self, boundary):
        with pytest.raises(ValueError):
            axis_inclusion(boundary, 5, 1)

    @given(seeds)
    def test_universal_property(self, seed):
        rng = random.Random(seed)
        from contiguity.generate import random_complex

        M, K, K2 = (random_complex(rng, 4, 5) for _ in range(3))
        f, g = random_map(rng, M, K), random_map(rng, M, K2)
        prod = categorical_product(K, K2)
        h = pairing(f, g, prod)
        assert compose(prod.p1, h) == f and compose(prod.p2, h) == g

    @given(complexes(max_vertices=5, max_facets=5), complexes(max_vertices=5, max_facets=5))
    def test_facet_count(self, K, K2):
        P = categorical_product(K, K2).complex
        assert P.n_facets == K.n_facets * K2.n_facets

    def test_make_map_into_product_by_name(self):
        D1 = parse_complex("a b")
        prod = categorical_product(D1, D1)
        f = make_map(D1, prod.complex, {"a": "(a,b)", "b": "(b,a)"})
        assert compose(prod.p1, f) == identity_map(D1)
