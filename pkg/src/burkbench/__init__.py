"""Numerical workbench for Burkholder/Beurling variational integrands."""

from .kernel import (
    Exponent,
    PlanarGradient,
    Integrand,
    aubert,
    beurling_m,
    burkholder,
    burkholder_m,
    distortion,
    envelope_closed_form,
    eval_aubert,
    eval_beurling_m,
    eval_burkholder,
    eval_burkholder_m,
    eval_burkholder_real_form,
    eval_envelope_closed_form,
    eval_higher_dim,
    make_integrand,
    operator_norm,
    p_star,
    vnorm,
)
from .report import ExperimentReport, canonical_json, emit_report

__all__ = [
    "Exponent",
    "PlanarGradient",
    "Integrand",
    "ExperimentReport",
    "aubert",
    "beurling_m",
    "burkholder",
    "burkholder_m",
    "canonical_json",
    "distortion",
    "emit_report",
    "envelope_closed_form",
    "eval_aubert",
    "eval_beurling_m",
    "eval_burkholder",
    "eval_burkholder_m",
    "eval_burkholder_real_form",
    "eval_envelope_closed_form",
    "eval_higher_dim",
    "make_integrand",
    "operator_norm",
    "p_star",
    "vnorm",
]

__version__ = "0.1.0"
