"""Simple orthogonal arrays OA(q^(2n-1), q^(2n-2), q, 2) and an affine 2-design from Hermitian forms."""

from .design import build_blocks, build_points, line_through, oa_design_correspondence, verify_2design, verify_affine
from .ff import field_for_q, make_field
from .geometry import enumerate_R, variety_census
from .oa import OrthogonalArray, build_A, build_A0, export_oa, import_oa, verify, verify_strength

__all__ = [
    "OrthogonalArray",
    "build_A",
    "build_A0",
    "build_blocks",
    "build_points",
    "enumerate_R",
    "export_oa",
    "field_for_q",
    "import_oa",
    "line_through",
    "make_field",
    "oa_design_correspondence",
    "variety_census",
    "verify",
    "verify_2design",
    "verify_affine",
    "verify_strength",
]
