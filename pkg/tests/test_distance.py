from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from contiguity import (
    ComplexError,
    DisconnectedError,
    SimplicialMap,
    barycentric_subdivision,
    categorical_product,
    compose,
    constant_map,
    contiguity_distance,
    farber_cover_tc,
    identity_map,
    is_good,
    parse_complex,
    restrict,
    restrict_map,
    same_contiguity_class,
    scat,
    scat_map,
    tc,
)
from contiguity.distance import farber_check
from contiguity.generate import random_complex, random_map
from contiguity.oracle import exhaustive_distance

from conftest import fixture_complex, fixture_map
from strategies import map_pairs, seeds


def covers(res, F):
    full = 0
    for m in res.witness:
        full |= m
    return full == (1 << F) - 1 and len(res.witness) == res.value + 1


class TestIsGood:
    @given(map_pairs())
    def test_singletons_always_good(self, pair):
        f, g = pair
        for j in range(f.domain.n_facets):
            assert is_good(f, g, 1 << j) is True

    def test_boundary_arc_and_whole(self, boundary):
        i, c = identity_map(boundary), constant_map(boundary, boundary, 0)
        assert is_good(i, c, [0, 1]) is True
        assert is_good(i, c, 0b111) is False

    def test_empty_mask_rejected(self, boundary):
        i = identity_map(boundary)
        with pytest.raises(ComplexError):
            is_good(i, i, 0)

    def test_cap_propagates_unknown(self):
        f, g = fixture_map("id_fig3"), fixture_map("const_fig3")
        assert is_good(f, g, (1 << 7) - 1, state_cap=1) is None


class TestDistance:
    @given(map_pairs())
    def test_self_distance_zero(self, pair):
        f, _ = pair
        res = contiguity_distance(f, f)
        assert res.value == 0 and res.exact
        assert res.witness == ((1 << f.domain.n_facets) - 1,)

    def test_fig3(self, fig3):
        res = contiguity_distance(fixture_map("id_fig3"), fixture_map("const_fig3"))
        assert res.value == 1 and res.exact
        assert covers(res, fig3.n_facets)

    def test_boundary(self, boundary):
        res = contiguity_distance(identity_map(boundary), constant_map(boundary, boundary, 0))
        assert res.value == 1 and res.exact
        assert sorted(m.bit_count() for m in res.witness) in ([1, 2], [2, 2])

    def test_witness_pieces_are_good(self, fig3):
        f, g = identity_map(fig3), constant_map(fig3, fig3, 0)
        res = contiguity_distance(f, g)
        assert all(is_good(f, g, m) for m in res.witness)
        assert len(res.certificates) == len(res.witness)

    def test_disconnected_rejected(self):
        K = parse_complex("a b\nc d")
        with pytest.raises(DisconnectedError):
            scat(K)

    def test_mismatched_maps(self, boundary, delta2):
        with pytest.raises(ComplexError):
            contiguity_distance(identity_map(boundary), identity_map(delta2))

    @given(map_pairs(max_vertices=5, max_facets=5))
    @settings(max_examples=25)
    def test_matches_oracle(self, pair):
        f, g = pair
        res = contiguity_distance(f, g)
        assert covers(res, f.domain.n_facets)
        if res.exact:
            assert res.value == exhaustive_distance(f, g)

    def test_unknown_downgrades_exactness(self, fig3):
        f, g = identity_map(fig3), constant_map(fig3, fig3, 0)
        res = contiguity_distance(f, g, state_cap=1)
        assert covers(res, fig3.n_facets)
        assert res.lower_bound <= 1 <= res.value
        if not res.exact:
            assert res.undecided

    def test_upper_target_stops_early(self, fig3):
        f, g = identity_map(fig3), constant_map(fig3, fig3, 0)
        res = contiguity_distance(f, g, upper_target=3)
        assert res.value <= 3 and covers(res, fig3.n_facets)

    def test_lower_target_stops_early(self, fig3):
        f, g = identity_map(fig3), constant_map(fig3, fig3, 0)
        res = contiguity_distance(f, g, lower_target=1)
        assert res.lower_bound >= 1 and res.value >= 1

    def test_threads_do_not_change_result(self, boundary):
        sq = categorical_product(boundary, boundary)
        one = contiguity_distance(sq.p1, sq.p2, threads=1)
        two = contiguity_distance(sq.p1, sq.p2, threads=2)
        assert (one.value, one.exact, one.witness) == (two.value, two.exact, two.witness)


class TestFacetMaskReduction:
    """A good piece that is any subcomplex shrinks to a good facet mask."""

    @given(seeds)
    @settings(max_examples=25)
    def test_shrinking(self, seed):
        rng = random.Random(seed)
        K = random_complex(rng, 5, 5)
        K2 = random_complex(rng, 5, 5)
        f, g = random_map(rng, K, K2), random_map(rng, K, K2)
        # a piece: the full subcomplex on a random vertex set, not generated by facets of K
        verts = [v for v in range(K.n_vertices) if rng.random() < 0.7] or [0]
        inside = set(verts)
        simplices = [s for s in K.simplices() if set(s) <= inside]
        piece = parse_complex("\n".join(" ".join(K.names[v] for v in s) for s in simplices))
        ids = [K.vertex_id(n) for n in piece.names]
        fl = SimplicialMap(piece, K2, tuple(f(v) for v in ids))
        gl = SimplicialMap(piece, K2, tuple(g(v) for v in ids))
        mask = sum(1 << j for j, fc in enumerate(K.facets) if set(fc) <= inside)
        if mask and same_contiguity_class(fl, gl).same:
            assert is_good(f, g, mask)


class TestScatAndTc:
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_simplices(self, n):
        K = fixture_complex(f"delta{n}")
        assert scat(K).value == 0 and scat(K).exact
        assert tc(K).value == 0 and tc(K).exact

    def test_fig3_scat(self, fig3):
        res = scat(fig3)
        assert (res.value, res.exact) == (1, True)

    def test_boundary_scat(self, boundary):
        assert (scat(boundary).value, scat(boundary).exact) == (1, True)

    def test_boundary_tc_sandwich(self, boundary):
        t = tc(boundary)
        s = scat(boundary).value
        sq = scat(categorical_product(boundary, boundary).complex)
        assert t.exact
        assert s <= t.value <= sq.value

    def test_fig3_tc_at_least_scat(self, fig3):
        t = tc(fig3, lower_target=1)
        assert t.value >= 1

    def test_scat_map_examples(self, fig3, boundary):
        assert scat_map(identity_map(fig3)).value == scat(fig3).value
        assert scat_map(constant_map(fig3, boundary, 2)).value == 0
        f = fixture_map("arc_c5")
        assert scat_map(f).value <= min(scat(f.domain).value, scat(f.codomain).value)

    def test_subdivision_does_not_raise_scat(self, boundary):
        assert scat(barycentric_subdivision(boundary)).value <= scat(boundary).value


class TestFarber:
    def test_diagonal_part_with_first_projection(self, boundary):
        sq = categorical_product(boundary, boundary)
        P = sq.complex
        diag = [j for j, fc in enumerate(P.facets)
                if {sq.p1(v) for v in fc} == {sq.p2(v) for v in fc}]
        mask = sum(1 << j for j in diag)
        L = restrict(P, mask)
        assert farber_check(boundary, mask, restrict_map(sq.p1, L), sq) is True

    def test_single_facet_any_section(self, boundary):
        sq = categorical_product(boundary, boundary)
        L = restrict(sq.complex, 1)
        assert farber_check(boundary, 1, restrict_map(sq.p2, L), sq) is True
        const = constant_map(L.complex, boundary, 0)
        assert farber_check(boundary, 1, const, sq) is True

    def test_whole_square_fails(self, boundary):
        sq = categorical_product(boundary, boundary)
        full = sq.complex.full_mask
        L = restrict(sq.complex, full)
        for section in (restrict_map(sq.p1, L), restrict_map(sq.p2, L)):
            assert farber_check(boundary, full, section, sq) is False

    def test_shape_mismatch(self, boundary, delta2):
        sq = categorical_product(boundary, boundary)
        with pytest.raises(ComplexError):
            farber_check(boundary, 1, identity_map(delta2), sq)

    @pytest.mark.parametrize("name", ["delta0", "delta1", "boundary_delta2"])
    def test_cover_tc_matches_tc(self, name):
        K = fixture_complex(name)
        value, witnesses = farber_cover_tc(K)
        assert value == tc(K).value
        sq = categorical_product(K, K)
        covered = 0
        for w in witnesses:
            covered |= w.omega
            assert farber_check(K, w.omega, w.section, sq)
        assert covered == sq.complex.full_mask


def test_class_invariance_example():
    f, g = fixture_map("arc_c5"), fixture_map("const_arc_c5")
    h = identity_map(f.codomain)
    assert contiguity_distance(compose(h, f), g).value == contiguity_distance(g, g).value == 0
