"""One-hidden-layer ReLU networks: construction, training and spectra."""

from ._core import (
    BinSpectrum,
    CanonicalNetwork,
    DimensionError,
    Division,
    LookupError,
    Network,
    TrainConfig,
    Unit,
    UnsupportedTarget,
    build_bidirectional,
    build_network,
    checkpoint_from_string,
    checkpoint_to_string,
    compare_spectrum,
    convergence_sweep,
    error_bound,
    extract_spectrum,
    fold_to_canonical,
    load_checkpoint,
    make_target,
    reconstruct_from_spectrum,
    registry_names,
    sample_dataset,
    save_checkpoint,
    sup_error,
    train,
    uniform_division,
)

__version__ = "0.1.0"
