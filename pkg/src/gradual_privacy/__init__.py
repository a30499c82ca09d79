"""Gradual release of differentially private data with coupled Laplace noise."""

from .exceptions import (
    BridgeUnsupported,
    ChainFormatError,
    GradualPrivacyError,
    InsufficientSamplesError,
    LevelOrderError,
)
from .laws import (
    ConditionalLaw,
    JointDensityValue,
    LevelPair,
    forward_conditional,
    joint_logpdf,
    joint_pdf,
    laplace_cdf,
    laplace_logpdf,
    laplace_pdf,
    laplace_sample,
    relax_sample,
    tighten_sample,
)
from .mechanism import (
    GradualLaplaceMechanism,
    LaplaceTightener,
    Response,
    dp_to_lipschitz,
    lipschitz_to_dp,
    naive_composition_release,
    tighten_for_third_party,
)
from .process import JumpChain, sample_path
from .rng import RandomSource

__version__ = "0.1.0"

__all__ = [
    "BridgeUnsupported",
    "ChainFormatError",
    "ConditionalLaw",
    "GradualLaplaceMechanism",
    "GradualPrivacyError",
    "InsufficientSamplesError",
    "JointDensityValue",
    "JumpChain",
    "LaplaceTightener",
    "LevelOrderError",
    "LevelPair",
    "RandomSource",
    "Response",
    "dp_to_lipschitz",
    "forward_conditional",
    "joint_logpdf",
    "joint_pdf",
    "laplace_cdf",
    "laplace_logpdf",
    "laplace_pdf",
    "laplace_sample",
    "lipschitz_to_dp",
    "naive_composition_release",
    "relax_sample",
    "sample_path",
    "tighten_for_third_party",
    "tighten_sample",
]
