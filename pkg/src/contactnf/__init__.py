"""Exact formal normal forms of singular contact 1-forms and primitive 1-forms."""

from .change import CoordinateChange
from .contact import (TANGENT, TANGENT_DEGENERATE, TRANSVERSAL, ContactDiagnosis,
                      ContactNormalForm, check_nondegenerate, classify_singularity,
                      full_normalize, kernel_field, prenormalize, prenormalize_tangent,
                      prenormalize_transversal)
from .dsl import parse_form, print_form, print_jet
from .errors import ContactNFError
from .exterior import KForm, VectorField, bracket, d, interior, lie_derivative, pullback, wedge
from .jets import Jet, JetMap, compose, invert_map, weierstrass_prepare
from .normalizer import equivariant_darboux, poincare_dulac, rectify
from .primitive import (bruno_check, conformal_field, hyperbolicity, is_linearizable,
                        normalize_primitive, resonance_support)
from .scalar import EXACT
from .spectrum import SpectralData

__version__ = "0.1.0"

__all__ = [
    "CoordinateChange", "TANGENT", "TANGENT_DEGENERATE", "TRANSVERSAL", "ContactDiagnosis",
    "ContactNormalForm", "check_nondegenerate", "classify_singularity", "full_normalize",
    "kernel_field", "prenormalize", "prenormalize_tangent", "prenormalize_transversal",
    "parse_form", "print_form", "print_jet", "ContactNFError", "KForm", "VectorField",
    "bracket", "d", "interior", "lie_derivative", "pullback", "wedge", "Jet", "JetMap",
    "compose", "invert_map", "weierstrass_prepare", "equivariant_darboux", "poincare_dulac",
    "rectify", "bruno_check", "conformal_field", "hyperbolicity", "is_linearizable",
    "normalize_primitive", "resonance_support", "EXACT", "SpectralData",
]
