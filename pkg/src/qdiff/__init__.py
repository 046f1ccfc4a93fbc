"""Quantized diffeomorphism dynamics on the sphere.

Matrix truncations of spherical function spaces: spin generator
matrices, a quantized Laplacian with its eigen-matrix basis, maps
between band-limited functions and matrices, structure-preserving
vorticity integrators, blob transport, reference flows, file
containers, and a Hammer-projection renderer.
"""

from ._accel import USE_NUMBA, set_threads
from .blob_transport import (
    BlobTrajectory,
    blob_components,
    blob_step,
    quantized_vector_field,
    transport_blob,
)
from .dynamics import (
    VorticityTrajectory,
    act_density,
    classical_bracket,
    complex_bracket,
    evolve_vorticity,
    flow_of_stream,
    matrix_exponential,
    step_isospectral_midpoint,
    step_rk4,
    vorticity_rhs,
)
from .laplacian import (
    LaplacianEigenbasis,
    apply_laplacian,
    apply_laplacian_band,
    build_eigenbasis,
    quantized_gradient,
    sh_index,
    solve_poisson,
    solve_stream,
)
from .quantization import (
    GridField,
    HarmonicCoefficients,
    analyze,
    blob_at,
    blob_center,
    blob_north,
    bracket_scale,
    dequantize,
    evaluate,
    gauss_grid,
    harmonic,
    quantize,
    quantize_generator,
    random_coefficients,
    synthesize,
)
from .reference_flows import (
    FlowConstants,
    TriMesh,
    example_field,
    example_generator,
    exact_flow,
    face_area_ratios,
    flow_constants,
    icosasphere,
    rk4_flow,
    spherical_face_areas,
    transport_mesh,
)
from .formats import (
    load_coefficients,
    load_eigenbasis,
    load_grid,
    load_matrix,
    load_mesh,
    save_coefficients,
    save_eigenbasis,
    save_grid,
    save_matrix,
    save_mesh,
    write_ppm,
    write_raster_with_sidecar,
)
from .render import RasterImage, render_field
from .spin_basis import SpinBasis, build_spin_basis, generator_matrices, spin_matrices

__version__ = "0.1.0"

__all__ = [
    "BlobTrajectory",
    "FlowConstants",
    "GridField",
    "HarmonicCoefficients",
    "LaplacianEigenbasis",
    "RasterImage",
    "SpinBasis",
    "TriMesh",
    "USE_NUMBA",
    "VorticityTrajectory",
    "act_density",
    "analyze",
    "apply_laplacian",
    "apply_laplacian_band",
    "blob_at",
    "blob_center",
    "blob_components",
    "blob_north",
    "blob_step",
    "bracket_scale",
    "build_eigenbasis",
    "build_spin_basis",
    "classical_bracket",
    "complex_bracket",
    "dequantize",
    "evaluate",
    "evolve_vorticity",
    "exact_flow",
    "example_field",
    "example_generator",
    "face_area_ratios",
    "flow_constants",
    "flow_of_stream",
    "gauss_grid",
    "generator_matrices",
    "harmonic",
    "icosasphere",
    "load_coefficients",
    "load_eigenbasis",
    "load_grid",
    "load_matrix",
    "load_mesh",
    "matrix_exponential",
    "quantize",
    "quantize_generator",
    "quantized_gradient",
    "quantized_vector_field",
    "random_coefficients",
    "render_field",
    "rk4_flow",
    "save_coefficients",
    "save_eigenbasis",
    "save_grid",
    "save_matrix",
    "save_mesh",
    "set_threads",
    "sh_index",
    "solve_poisson",
    "solve_stream",
    "spherical_face_areas",
    "spin_matrices",
    "step_isospectral_midpoint",
    "step_rk4",
    "synthesize",
    "transport_blob",
    "transport_mesh",
    "vorticity_rhs",
    "write_ppm",
    "write_raster_with_sidecar",
]
