"""Python interface to the gaffney-lab core.

Meshes, boundary specs, quadratic forms and the constrained eigenvalue
machinery are implemented in C++ and exposed through the `_core` extension.
"""

from ._core import (
    BoundarySpec,
    Edge,
    Field,
    FlowMap,
    GaffneyEstimate,
    Mesh,
    QuadraticForms,
    TwoForm,
    __version__,
    assemble,
    blowup_ratios,
    curl_at,
    div_at,
    field,
    field_from_expression,
    field_names,
    gaffney_constant,
    generate_lshape,
    generate_regular_polygon,
    generate_structured_square,
    harmonic_lambda_field,
    ibp_identity_residual,
    interpolate,
    intro_family,
    make_domain,
    node_constraints,
    nullspace_dimension,
    orthogonal_invariance_residual,
    pointwise_identity_residual,
    rectification_residual,
    rectify_flow,
    refine,
    refinement_study,
    run_verification,
    scalar_lambda_family,
    solve_gevp,
    trace_constant,
    two_form,
    two_form_family,
    validate_lambda,
    validate_mesh,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
