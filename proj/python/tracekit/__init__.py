"""Matrix-free stochastic trace estimation with exact desk-scale oracles."""

from ._tracekit import (
    RNG_ID,
    ExactErrorDistribution,
    TraceEstimate,
    __version__,
    eigenvalues,
    estimate_trace,
    exact_distribution,
    exact_trace,
    generate,
    load_matrix_market,
    mgf_envelope,
    mgf_series_partial,
    moment_bound,
    quadratic_form,
    rademacher,
    relative_error,
    sample_size,
    save_matrix_market,
    subgamma_scale,
    subgamma_sum,
    tail_lemma,
    tail_theorem,
    taylor_ratio,
    variance_formula,
)

__all__ = [
    "RNG_ID",
    "ExactErrorDistribution",
    "TraceEstimate",
    "__version__",
    "eigenvalues",
    "estimate_trace",
    "exact_distribution",
    "exact_trace",
    "generate",
    "load_matrix_market",
    "mgf_envelope",
    "mgf_series_partial",
    "moment_bound",
    "quadratic_form",
    "rademacher",
    "relative_error",
    "sample_size",
    "save_matrix_market",
    "subgamma_scale",
    "subgamma_sum",
    "tail_lemma",
    "tail_theorem",
    "taylor_ratio",
    "variance_formula",
]
