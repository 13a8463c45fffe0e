"""Exact intersection-form computations deciding which classes of simply
connected closed 4-manifolds are represented by embedded spheres."""

from .embedding import (
    EmbedVerdict,
    KmValue,
    SmoothObstructionReport,
    decide_topological_embedding,
    is_s_characteristic,
    kervaire_milnor,
    km_sum_crosscheck,
    smooth_embedding_obstructions,
)
from .errors import (
    CertificateUnavailable,
    FlatSphereError,
    InputError,
    InternalError,
    NoDualSphereError,
    PreconditionError,
    ResourceExhausted,
)
from .isometry import (
    CanonicalDesc,
    IsometryCert,
    classify_unimodular,
    enumerate_norm_vectors,
    is_diagonalizable_definite,
    isometric_definite,
    isometry_pinned,
)
from .lattice import IntegralForm, direct_sum, orthogonal_complement, split_off_unit, standard_form
from .manifold import Block, Manifold4, connected_sum, homeomorphic, smooth_existence_obstructions

__version__ = "0.1.0"
