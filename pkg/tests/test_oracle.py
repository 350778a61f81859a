from __future__ import annotations

import pytest
from hypothesis import given, settings

from contiguity import constant_map, contiguity_distance, identity_map, parse_complex, same_contiguity_class
from contiguity.oracle import OracleCapError, all_simplicial_maps, exhaustive_distance, exhaustive_same_class

from conftest import fixture_complex, fixture_map
from strategies import class_walks, map_pairs


def test_identity_with_itself(fig3):
    f = identity_map(fig3)
    assert exhaustive_same_class(f, f)


def test_boundary_identity_vs_constant(boundary):
    assert not exhaustive_same_class(identity_map(boundary), constant_map(boundary, boundary, "a"))


def test_collapsible_codomain(delta2):
    assert exhaustive_same_class(identity_map(delta2), constant_map(delta2, delta2, 0))


def test_map_count(boundary):
    assert len(all_simplicial_maps(boundary, boundary)) == 27
    P = parse_complex("a b\nb c")
    assert len(all_simplicial_maps(P, fixture_complex("c4"))) == 4 * 3 * 3


def test_distance_examples(boundary, fig3):
    f = identity_map(boundary)
    assert exhaustive_distance(f, f) == 0
    assert exhaustive_distance(f, constant_map(boundary, boundary, 0)) == 1
    assert exhaustive_distance(fixture_map("id_fig3"), fixture_map("const_fig3")) == 1


def test_caps(fig3, boundary):
    with pytest.raises(OracleCapError):
        exhaustive_distance(identity_map(fig3), constant_map(fig3, fig3, 0), facet_cap=3)
    with pytest.raises(OracleCapError):
        exhaustive_same_class(identity_map(fig3), identity_map(fig3), cap=100)


@given(map_pairs(max_vertices=4, max_facets=4))
@settings(max_examples=30)
def test_engine_agreement(pair):
    f, g = pair
    assert exhaustive_same_class(f, g) == same_contiguity_class(f, g).same
    res = contiguity_distance(f, g)
    assert res.exact and res.value == exhaustive_distance(f, g)


@given(class_walks(max_vertices=4, max_facets=4))
@settings(max_examples=30)
def test_class_walks(walk):
    f, g = walk
    assert exhaustive_same_class(f, g)
