"""Finite classical polar spaces and combinatorial tests for embedded polar spaces."""

from .forms import FormSpec, SectionClass, classify_hyperplane, perp, polarize, standard_form
from .geometry import BudgetExceeded, ProjectiveSpace, Subspace, gaussian, projective_space
from .gf import GF, FieldElement, field_make
from .polarspace import GeneratorSet, InvalidGeneratorSet, PolarSpace, polar_space
from .pseudopolar import (
    CheckReport,
    EmbeddedVerdict,
    check_alt,
    check_pseudopolar,
    check_strong_pseudopolar,
    dual_hyperoval_example,
    equivalence_harness,
    quadric_in_symplectic,
    section_set,
    verify_embedded,
)

__all__ = [
    "BudgetExceeded", "CheckReport", "EmbeddedVerdict", "FieldElement", "FormSpec", "GF",
    "GeneratorSet", "InvalidGeneratorSet", "PolarSpace", "ProjectiveSpace", "SectionClass",
    "Subspace", "check_alt", "check_pseudopolar", "check_strong_pseudopolar",
    "classify_hyperplane", "dual_hyperoval_example", "equivalence_harness", "field_make",
    "gaussian", "perp", "polar_space", "polarize", "projective_space", "quadric_in_symplectic",
    "section_set", "standard_form", "verify_embedded",
]
