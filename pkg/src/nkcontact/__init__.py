"""Exact verification of N(k)-contact geometry and ∗-conformal Einstein solitons
on homogeneous frames, in rational arithmetic."""

from .contact import (
    Check,
    ContactStructure,
    StandardExample,
    build_standard_example,
    nullity_fit,
    validate_structure,
)
from .exact import Tensor, format_rational, parse_rational
from .frame import FrameManifold, GeometryError, jacobi_check, levi_civita, ricci, riemann
from .geometry import Geometry
from .io import SpecError, emit_standard_spec, load_spec
from .report import SuiteResult, run_suite, sweep_delta
from .soliton import (
    SolitonKind,
    SolitonSpec,
    classify,
    classify_by_pressure,
    poisson_trace,
    solve_potential_field,
    solve_soliton_constants,
)
from .star import star_ricci_closed_form, star_ricci_direct

__all__ = [
    "Check", "ContactStructure", "FrameManifold", "Geometry", "GeometryError",
    "SolitonKind", "SolitonSpec", "SpecError", "StandardExample", "SuiteResult", "Tensor",
    "build_standard_example", "classify", "classify_by_pressure", "emit_standard_spec",
    "format_rational", "jacobi_check", "levi_civita", "load_spec", "nullity_fit",
    "parse_rational", "poisson_trace", "ricci", "riemann", "run_suite", "solve_potential_field",
    "solve_soliton_constants", "star_ricci_closed_form", "star_ricci_direct", "sweep_delta",
    "validate_structure",
]
