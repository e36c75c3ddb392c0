"""High-precision evaluation and verification of Apery-like series identities."""

from .apery import (CpasParams, FussParams, cb_series, cpas_lhs, fc_G, fc_series, half_integer_lhs,
                    param_cb_closed, param_cb_direct)
from .bell_harmonic import (HarmonicTable, a_coeff, b_coeff, bell_Y, c_const, c_param, d_const, d_param,
                            mhs, mhs_star)
from .errors import (AperyError, DomainError, InvalidInput, NonConvergence, NonFinite, PoleError,
                     RangeViolation, UnsupportedOrder)
from .gamma_suite import digamma, gamma, gen_binom, log_gamma, polygamma, recip_central_binom
from .identities import IDENTITY_IDS, REGISTRY, IdentityReport, validate_params, verify
from .numerics import PrecisionContext, RootOfUnity, SeriesResult, sum_series
from .polylog import (Composition, HurwitzArg, ext_trig, gen_digamma, hurwitz_zeta, li, li_hurwitz,
                      li_multi, zeta)

__version__ = "0.1.0"

__all__ = [
    "AperyError", "Composition", "CpasParams", "DomainError", "FussParams", "HarmonicTable", "HurwitzArg",
    "IDENTITY_IDS", "IdentityReport", "InvalidInput", "NonConvergence", "NonFinite", "PoleError",
    "PrecisionContext", "REGISTRY", "RangeViolation", "RootOfUnity", "SeriesResult", "UnsupportedOrder",
    "a_coeff", "b_coeff", "bell_Y", "c_const", "c_param", "cb_series", "cpas_lhs", "d_const", "d_param",
    "digamma", "ext_trig", "fc_G", "fc_series", "gamma", "gen_binom", "gen_digamma", "half_integer_lhs",
    "hurwitz_zeta", "li", "li_hurwitz", "li_multi", "log_gamma", "mhs", "mhs_star", "param_cb_closed",
    "param_cb_direct", "polygamma", "recip_central_binom", "sum_series", "validate_params", "verify", "zeta",
]
