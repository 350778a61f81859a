"""Hypothesis strategies built on the seeded generators."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from contiguity.generate import random_class_member, random_complex, random_map

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def complexes(draw, max_vertices: int = 6, max_facets: int = 8):
    return random_complex(random.Random(draw(seeds)), max_vertices, max_facets)


@st.composite
def map_pairs(draw, max_vertices: int = 5, max_facets: int = 6):
    rng = random.Random(draw(seeds))
    K = random_complex(rng, max_vertices, max_facets)
    K2 = random_complex(rng, max_vertices, max_facets)
    return random_map(rng, K, K2), random_map(rng, K, K2)


@st.composite
def class_walks(draw, max_vertices: int = 5, max_facets: int = 6):
    """A map together with a random member of its contiguity class."""
    rng = random.Random(draw(seeds))
    K = random_complex(rng, max_vertices, max_facets)
    K2 = random_complex(rng, max_vertices, max_facets)
    f = random_map(rng, K, K2)
    return f, random_class_member(rng, f)
