"""Acceptance-rejection sampling on low-discrepancy point streams."""

from .distributions import DistributionSpec, inverse_cdf, parse_distribution
from .gof import GofReport, anderson_darling, efficiency, f_star_discrepancy, star_discrepancy_2d
from .lds import PointStream, make_stream
from .rejection import AcceptanceRecord, RejectionTarget, ar_generate
from .samplers import SamplerConfig, beta_aw, gamma_ch, gamma_gs, gamma_sample
from .vg import OptionSpec, PriceReport, VGParams, price_european_call

__version__ = "0.1.0"

__all__ = [
    "AcceptanceRecord",
    "DistributionSpec",
    "GofReport",
    "OptionSpec",
    "PointStream",
    "PriceReport",
    "RejectionTarget",
    "SamplerConfig",
    "VGParams",
    "anderson_darling",
    "ar_generate",
    "beta_aw",
    "efficiency",
    "f_star_discrepancy",
    "gamma_ch",
    "gamma_gs",
    "gamma_sample",
    "inverse_cdf",
    "make_stream",
    "parse_distribution",
    "price_european_call",
    "star_discrepancy_2d",
]
