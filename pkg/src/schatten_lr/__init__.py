"""Low-rank recovery with bi-trace (Schatten-1/2) and tri-trace (Schatten-1/3) penalties."""

from ._kernels import BACKEND
from .core import (ObservationSet, SvdResult, half_threshold, project_omega, soft_threshold,
                   spectral_norm, svt, thin_svd)
from .norms import (FactorPair, FactorTriple, bi_trace, bi_trace_surrogate, fro_norm,
                    property5_gap, schatten_quasi_norm, trace_norm, tri_trace)
from .solvers import (LadmConfig, NumericalFailure, PalmConfig, RecoveryResult, SolverTrace,
                      Status, init_factors, kkt_residual_mc, ladm_bitr, ladm_tritr, palm_bitr_mc,
                      palm_tritr_mc, step_size, trace_baseline_mc)

__version__ = "0.1.0"
