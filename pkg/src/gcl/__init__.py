"""Exact and numerical checks for smoothed Bernoulli rational functions,
higher Dedekind sums and multiple elliptic Gamma products."""

from .bernoulli import bn_value
from .cyclotomic import smoothed_bn_trace
from .forms_geometry import FormFamily
from .smoothing import denominator_bound, smoothed_bn_dedekind, smoothed_bn_direct

__all__ = ["FormFamily", "bn_value", "denominator_bound", "smoothed_bn_dedekind",
           "smoothed_bn_direct", "smoothed_bn_trace"]
__version__ = "0.1.0"
