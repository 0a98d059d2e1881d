"""Sheaves and stacks on finite sites, decided by exhaustive search."""

from .fincat import Adjunction, FinCategory, Functor, NatTransf, left_adjoint_of
from .gallery import constant_prestack, open_subsets_stack, random_prestack, random_site
from .prestack import DescentDatum, Prestack, check_prestack, descent_category
from .presheaf import FinPresheaf, PresheafMorphism, Sieve, yoneda
from .proper import (
    DiagramBound,
    LeftAdjointOverA,
    check_proper_stack,
    is_separated_prestack,
    is_stack,
    stack_via_adjoints,
    verify_theorem,
)
from .sheaves import is_separated_presheaf, is_sheaf_presheaf
from .site import Topology, is_local_epi, is_local_iso, maximal_topology, saturate, verify_le
from .textformat import parse_instance, print_instance
from .verdict import StructuralError, Verdict

__all__ = [
    "Adjunction", "DescentDatum", "DiagramBound", "FinCategory", "FinPresheaf", "Functor",
    "LeftAdjointOverA", "NatTransf", "Prestack", "PresheafMorphism", "Sieve", "StructuralError",
    "Topology", "Verdict", "check_prestack", "check_proper_stack", "constant_prestack",
    "descent_category", "is_local_epi", "is_local_iso", "is_separated_prestack",
    "is_separated_presheaf", "is_sheaf_presheaf", "is_stack", "left_adjoint_of",
    "maximal_topology", "open_subsets_stack", "parse_instance", "print_instance",
    "random_prestack", "random_site", "saturate", "stack_via_adjoints", "verify_le",
    "verify_theorem", "yoneda",
]
