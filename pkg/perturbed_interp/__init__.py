"""
perturbed-interp

Certified reconstruction of band-limited functions from jittered samples, and
Fourier interpolation from perturbed square-root nodes.
"""

from .bandlimited import (
    Band,
    ReconstructionResult,
    SampleSet,
    kadec_bound,
    kadec_threshold,
    shannon_reconstruct,
    shannon_to_vaaler,
    vaaler_bound,
    vaaler_reconstruct,
    vaaler_threshold,
)
from .errors import ErrorKind, InterpolationError
from .hilbert import HilbertKernelSpec, heps_assemble, hp0_norm, sq_norm
from .linop import NormCertificate, TruncatedOperator, hs_norm, op_norm_power, schur_bound
from .modular import QSeries, lambda_J_eval, modular_series, reduce_to_fundamental, theta_eval
from .rvbasis import BasisSet, BasisSign, an_eval, bn_eval, gn_construct
from .rvperturb import RVCertificate, RVOperatorConfig, best_certificate, recover_values
from .seqspace import DecayClass, IndexWindow, PerturbationProfile, RealSequence, make_profile
from .verify import verify_all

__version__ = "0.1.0"
__all__ = [
    # Sequences and operators
    "IndexWindow",
    "RealSequence",
    "DecayClass",
    "PerturbationProfile",
    "make_profile",
    "TruncatedOperator",
    "NormCertificate",
    "op_norm_power",
    "hs_norm",
    "schur_bound",
    # Hilbert kernels
    "HilbertKernelSpec",
    "heps_assemble",
    "hp0_norm",
    "sq_norm",
    # Band-limited sampling
    "Band",
    "SampleSet",
    "ReconstructionResult",
    "kadec_bound",
    "kadec_threshold",
    "shannon_reconstruct",
    "shannon_to_vaaler",
    "vaaler_bound",
    "vaaler_threshold",
    "vaaler_reconstruct",
    # Modular forms
    "QSeries",
    "modular_series",
    "theta_eval",
    "lambda_J_eval",
    "reduce_to_fundamental",
    # Interpolation basis
    "BasisSet",
    "BasisSign",
    "gn_construct",
    "bn_eval",
    "an_eval",
    # Perturbed √n nodes
    "RVOperatorConfig",
    "RVCertificate",
    "best_certificate",
    "recover_values",
    # Errors and verification
    "ErrorKind",
    "InterpolationError",
    "verify_all",
]
