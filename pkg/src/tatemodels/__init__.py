"""Acyclic closures, minimal models and the comparison map between them over F_p."""

from .classify import classify, deviations, poincare_check
from .compare import comparison_from_closure, theorem_A_check, verify_chain_map, verify_quasi_iso
from .dga import SemifreeExtension, Window
from .pi import check_theorem_abelian, homotopy_lie_algebra, quadratic_part
from .resolve import WindowTooSmall, acyclic_closure, minimal_model
from .ring import MapPresentation, QuotientRing, RingPresentation

__version__ = "0.1.0"

__all__ = [
    "MapPresentation",
    "QuotientRing",
    "RingPresentation",
    "SemifreeExtension",
    "Window",
    "WindowTooSmall",
    "acyclic_closure",
    "check_theorem_abelian",
    "classify",
    "comparison_from_closure",
    "deviations",
    "homotopy_lie_algebra",
    "minimal_model",
    "poincare_check",
    "quadratic_part",
    "theorem_A_check",
    "verify_chain_map",
    "verify_quasi_iso",
]
