"""Counting inference functions of graphical models with exact Newton polytopes."""

from .geometry import VertexPolytope, argmax_face, edge_directions, hull_reduce, is_vertex
from .polyalg import BoundReport, NewtonPolytope, bounds, minkowski_sum_many, np_add, np_mul
from .models import (
    Factor,
    FactorModel,
    build_alignment_model,
    build_homogeneous_hmm,
    build_lowerbound_hmm,
    complexity_M,
    monomial_of,
)
from .inference import (
    InferenceFunction,
    UnexplainableObservation,
    inference_function,
    observation_polytope,
    viterbi,
)
from .counting import (
    arrangement_chambers,
    count_inference_functions,
    extreme_rays_check,
    primitive_probability,
    sample_inference_functions,
    zeta_reference,
)
from .alignment import (
    alignment_polygon,
    count_alignment_inference_functions,
    meaningful_cone_count,
    optimal_alignment,
    slope_family,
)

__version__ = "0.1.0"

__all__ = [
    "VertexPolytope",
    "argmax_face",
    "edge_directions",
    "hull_reduce",
    "is_vertex",
    "BoundReport",
    "NewtonPolytope",
    "bounds",
    "minkowski_sum_many",
    "np_add",
    "np_mul",
    "Factor",
    "FactorModel",
    "build_alignment_model",
    "build_homogeneous_hmm",
    "build_lowerbound_hmm",
    "complexity_M",
    "monomial_of",
    "InferenceFunction",
    "UnexplainableObservation",
    "inference_function",
    "observation_polytope",
    "viterbi",
    "arrangement_chambers",
    "count_inference_functions",
    "extreme_rays_check",
    "primitive_probability",
    "sample_inference_functions",
    "zeta_reference",
    "alignment_polygon",
    "count_alignment_inference_functions",
    "meaningful_cone_count",
    "optimal_alignment",
    "slope_family",
]
