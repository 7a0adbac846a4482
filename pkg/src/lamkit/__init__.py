"""lamkit: flat double-polygon surfaces, multitwist dynamics and amalgam words."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DecompositionError,
    EdgeWordError,
    HypothesisError,
    InvalidMatrixError,
    InvalidSurfaceError,
    InvalidWeightsError,
    LamkitError,
    NotParabolicError,
    ParameterError,
)
from .flat_surface import (  # noqa: F401
    Cylinder,
    TranslationSurface,
    area,
    build_double_polygon,
    cylinder_decomposition,
    hyperelliptic_symmetry,
    surface_from_json,
    surface_to_json,
)
from .affine import (  # noqa: F401
    AffineElement,
    Mat2,
    classify,
    evaluate_word,
    generators,
    parabolic_generator,
    twist_derivative,
)
from .curves import (  # noqa: F401
    ChainSystem,
    WeightedMulticurve,
    chain_intersection_matrix,
    derive_intersection_matrix,
    intersection_system,
    pair,
)
from .traintrack import (  # noqa: F401
    TrackWeights,
    curve_class,
    intersection_with_component,
    multitwist_step,
    rationalize,
)
from .dynamics import (  # noqa: F401
    ProjectiveClass,
    circle_samples,
    decay_fit,
    direction_foliation,
    iterate_trace,
    twist_limit,
)
from .obstruction import (  # noqa: F401
    contradiction_witness,
    genericity_sample,
    in_ratio_locus,
    vertical_heights,
)
from .amalgam import (  # noqa: F401
    AmalgamWord,
    EdgeWords,
    amalgam_word,
    britton_reduce,
    classify_element,
    free_reduce,
    parse_word,
    power_of_edge,
)
