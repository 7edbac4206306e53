"""Finite-alphabet information measures, Blahut-Arimoto solvers and
typicality experiments, backed by the repcap C++ core."""

from ._repcap import (
    RepcapError,
    __version__,
    binary_entropy,
    capacity,
    effective_support,
    entropy,
    entropy_rate_markov,
    etf_residuals,
    kl_divergence,
    mutual_information,
    rate_distortion_point,
    rd_curve,
    representation_rate,
    run_experiment,
    theorem7_bound,
)

__all__ = [
    "RepcapError",
    "__version__",
    "binary_entropy",
    "capacity",
    "effective_support",
    "entropy",
    "entropy_rate_markov",
    "etf_residuals",
    "kl_divergence",
    "mutual_information",
    "rate_distortion_point",
    "rd_curve",
    "representation_rate",
    "run_experiment",
    "theorem7_bound",
]
