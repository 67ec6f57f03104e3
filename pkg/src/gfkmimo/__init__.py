"""Geodesic-flow-kernel MIMO signal detection over Grassmannian manifolds.

Subpackages cover the full pipeline: fading-channel simulation, frame
transmission, subspace representation, the closed-form geodesic flow kernel,
a kernel SVM, classical detector baselines and a benchmark harness.
"""

from gfkmimo.signal_model import (
    SymbolAlphabet,
    TransmitFrame,
    ReceivedFrame,
    reshape_symbol,
    flatten_received,
    unflatten_received,
    transmit,
)
from gfkmimo.channel import FadingConfig, ChannelTrace, generate_trace, velocity_to_fdts
from gfkmimo.dataset import (
    MoGModel,
    LabeledSet,
    DomainConfig,
    default_mog,
    sample_symbols,
    build_domain_dataset,
)
from gfkmimo.grassmann import (
    SubspaceBasis,
    OrthoComplement,
    GeodesicPath,
    pca_subspace,
    complement,
    principal_angles,
    geodesic,
    flow_point,
)
from gfkmimo.gfk import GfkMatrix, sigma_entries, build_kernel, kernel_eval, gram_matrix
from gfkmimo.gsvm import (
    SolverConfig,
    TrainedBinarySVM,
    MulticlassModel,
    solve_dual,
    train_multiclass,
    predict,
)
from gfkmimo.detector import (
    DetectorModel,
    DetectionReport,
    gfk_gsvm_fit,
    gfk_gsvm_classify,
    mmse_detect,
    zf_detect,
    ml_detect,
    ser,
    training_overhead,
)

__all__ = [
    "SymbolAlphabet",
    "TransmitFrame",
    "ReceivedFrame",
    "reshape_symbol",
    "flatten_received",
    "unflatten_received",
    "transmit",
    "FadingConfig",
    "ChannelTrace",
    "generate_trace",
    "velocity_to_fdts",
    "MoGModel",
    "LabeledSet",
    "DomainConfig",
    "default_mog",
    "sample_symbols",
    "build_domain_dataset",
    "SubspaceBasis",
    "OrthoComplement",
    "GeodesicPath",
    "pca_subspace",
    "complement",
    "principal_angles",
    "geodesic",
    "flow_point",
    "GfkMatrix",
    "sigma_entries",
    "build_kernel",
    "kernel_eval",
    "gram_matrix",
    "SolverConfig",
    "TrainedBinarySVM",
    "MulticlassModel",
    "solve_dual",
    "train_multiclass",
    "predict",
    "DetectorModel",
    "DetectionReport",
    "gfk_gsvm_fit",
    "gfk_gsvm_classify",
    "mmse_detect",
    "zf_detect",
    "ml_detect",
    "ser",
    "training_overhead",
]
