"""Executable combinatorics of the hypercubical manifold and its quaternionic cover."""
from .cellcx import (
    CubicalComplex,
    chain_complex,
    complex_isomorphic,
    euler_characteristic,
    hm_complex,
    hm_skeleton,
    tesseract_boundary,
)
from .cover import (
    CoveringData,
    EdgeLabeling,
    check_labeling,
    cover_complex,
    pi1_presentation,
    standard_labeling,
)
from .groups import (
    FiniteGroup,
    Presentation,
    abelianization,
    cayley_graph,
    parse_presentation,
    presentation_isomorphic_to,
    quaternion_group,
    todd_coxeter,
)
from .homology import (
    ChainComplex,
    HomologySignature,
    IntegerMatrix,
    coinvariants,
    exactness_range,
    restrict_to_z,
    smith_normal_form,
)
from .resolution import (
    algebraic_join,
    bar_resolution_oracle,
    group_homology,
    hm_resolution,
    zg_complex_from_cover,
)
from .zg import GroupRingElement, ZGComplex

__version__ = "0.1.0"
