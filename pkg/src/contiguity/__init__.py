"""Contiguity distance between simplicial maps, with scat and discrete TC on top."""
from __future__ import annotations

from .collapse import CoreResult, core, dominated_by, is_strongly_collapsible, same_strong_homotopy_type
from .complex import (
    ComplexError,
    NotSimplicialError,
    ParseError,
    SimplicialComplex,
    SimplicialMap,
    Subcomplex,
    are_isomorphic,
    compose,
    constant_map,
    identity_map,
    inclusion_map,
    is_connected,
    make_map,
    parse_complex,
    restrict,
    restrict_map,
)
from .constructions import (
    Product,
    SizeGuardError,
    axis_inclusion,
    barycentric_subdivision,
    categorical_product,
    diagonal,
    pairing,
    sd_map,
)
from .distance import (
    DisconnectedError,
    DistanceResult,
    contiguity_distance,
    farber_cover_tc,
    is_good,
    scat,
    scat_map,
    tc,
)
from .engine import (
    ClassDecision,
    ContiguityCertificate,
    check_certificate,
    contiguity_neighbors,
    is_contiguous,
    same_contiguity_class,
)

__all__ = [
    "ClassDecision",
    "ComplexError",
    "ContiguityCertificate",
    "CoreResult",
    "DisconnectedError",
    "DistanceResult",
    "NotSimplicialError",
    "ParseError",
    "Product",
    "SimplicialComplex",
    "SimplicialMap",
    "SizeGuardError",
    "Subcomplex",
    "are_isomorphic",
    "axis_inclusion",
    "barycentric_subdivision",
    "categorical_product",
    "check_certificate",
    "compose",
    "constant_map",
    "contiguity_distance",
    "contiguity_neighbors",
    "core",
    "diagonal",
    "dominated_by",
    "farber_cover_tc",
    "identity_map",
    "inclusion_map",
    "is_connected",
    "is_contiguous",
    "is_good",
    "is_strongly_collapsible",
    "make_map",
    "pairing",
    "parse_complex",
    "restrict",
    "restrict_map",
    "same_contiguity_class",
    "same_strong_homotopy_type",
    "scat",
    "scat_map",
    "sd_map",
    "tc",
]
