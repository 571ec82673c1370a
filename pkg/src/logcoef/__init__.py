"""Certified bounds and extremal search for logarithmic coefficients of
close-to-convex functions: series oracles, coefficient functionals, an
interval branch-and-bound certifier for the sharp |gamma_3| majorant, and a
Monte-Carlo search over the class."""

__version__ = "0.1.0"

from .caratheodory import (
    HerglotzMeasure,
    LemmaParams,
    herglotz_coefficients,
    lemma_forward,
    lemma_invert,
    sample_measure,
)
from .certify import Box, CertificationReport, Interval, branch_and_bound, certify_faces, certify_global, interval_eval
from .classes import CtcInstance, a234_from_cp, ctc_from, starlike_from
from .functionals import GammaVector, fekete_szego, gamma3_expanded, gamma_closed, gamma_vector, milin_lhs
from .objective import FACES, F_POLY, FPoint, F_value, bound_chain_check, face_value, grad_F
from .search import SampleRecord, SearchConfig, refine, run_search
from .series import SchlichtSeries, TruncatedSeries, derive, div, exp_series, koebe, log_series, mul

__all__ = [
    "__version__",
    "HerglotzMeasure", "LemmaParams", "herglotz_coefficients", "lemma_forward",
    "lemma_invert", "sample_measure",
    "Box", "CertificationReport", "Interval", "branch_and_bound", "certify_faces",
    "certify_global", "interval_eval",
    "CtcInstance", "a234_from_cp", "ctc_from", "starlike_from",
    "GammaVector", "fekete_szego", "gamma3_expanded", "gamma_closed", "gamma_vector",
    "milin_lhs",
    "FACES", "F_POLY", "FPoint", "F_value", "bound_chain_check", "face_value", "grad_F",
    "SampleRecord", "SearchConfig", "refine", "run_search",
    "SchlichtSeries", "TruncatedSeries", "derive", "div", "exp_series", "koebe",
    "log_series", "mul",
]
