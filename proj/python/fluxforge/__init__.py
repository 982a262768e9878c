"""Vector fields with integer topological singularities on the unit cube.

Thin wrapper around the C++ core: generators, the integer-flux audit, the
cubic-decomposition approximation pipeline, minimal connections and the
one-dimensional theory.
"""

from fluxforge._core import (
    FluxAuditReport,
    FluxSample,
    CubeRecord,
    StepFunction,
    VectorField,
    approximate,
    boundary_flux,
    classify_cubes,
    converge_sweep,
    dual_value,
    gen_circle_map_current,
    gen_divfree,
    gen_vortex,
    greedy_connection,
    integer_flux_scan,
    integer_step_projection,
    lp_norm,
    minimal_connection,
    read_ffld,
    weak_approx_sequence,
    write_ffld,
)

__all__ = [
    "FluxAuditReport",
    "FluxSample",
    "CubeRecord",
    "StepFunction",
    "VectorField",
    "approximate",
    "boundary_flux",
    "classify_cubes",
    "converge_sweep",
    "dual_value",
    "gen_circle_map_current",
    "gen_divfree",
    "gen_vortex",
    "greedy_connection",
    "integer_flux_scan",
    "integer_step_projection",
    "lp_norm",
    "minimal_connection",
    "read_ffld",
    "weak_approx_sequence",
    "write_ffld",
]
