"""Edge cross-validation for network model selection."""

from ._ecvnet import (
    Candidate,
    Error,
    Network,
    ParameterError,
    ParseError,
    SelectionResult,
    auc,
    ccd,
    clustering_accuracy,
    complete,
    deviance_loss,
    gen_block_model,
    gen_graphon,
    gen_rdpg_directed,
    neighborhood_smoothing,
    nmi,
    partial_svd,
    select_block_model,
    select_rank,
    spectral_clustering,
    sse_loss,
    stability_select,
    tune_graphon,
    tune_regularization,
)

__version__ = "0.1.0"
