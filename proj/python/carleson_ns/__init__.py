"""Tensor Meyer wavelets, dyadic Carleson / Triebel-Lizorkin functionals,
and an explicit divergence-free field with a bounded Carleson quantity whose
fixed-time norm inflates as t -> 0."""

from ._core import (
    BlowupParams,
    DyadicCube,
    GridSpec,
    MeyerProfile,
    NyquistError,
    ParamError,
    QuadratureDivergence,
    WaveletIndex,
    bbmo_closed_form,
    blim_closed_form,
    blowup_certificate,
    build_profile,
    build_u2,
    coeff,
    divergence_residual,
    inner_product_freq,
    min_points_per_side,
    periodization_polynomial,
    periodization_sup_norm,
    phi_hat,
    sample_wavelet,
    sup_norm_bound,
    synthesize_u1,
    tl_norm,
    validate_params,
    verify,
)

__all__ = [
    "BlowupParams",
    "DyadicCube",
    "GridSpec",
    "MeyerProfile",
    "NyquistError",
    "ParamError",
    "QuadratureDivergence",
    "WaveletIndex",
    "bbmo_closed_form",
    "blim_closed_form",
    "blowup_certificate",
    "build_profile",
    "build_u2",
    "coeff",
    "divergence_residual",
    "inner_product_freq",
    "min_points_per_side",
    "periodization_polynomial",
    "periodization_sup_norm",
    "phi_hat",
    "sample_wavelet",
    "sup_norm_bound",
    "synthesize_u1",
    "tl_norm",
    "validate_params",
    "verify",
]

__version__ = "0.1.0"
