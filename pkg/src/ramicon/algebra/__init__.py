"""Exact coefficient arithmetic, truncated series, matrices and forms."""
from .cyclotomic import CycNum, Rational, cyc_arith, parse_rational, render_rational, scalar, simplify, zeta
from .forms import EpsMatrix, FormMatrix, TwoForm, curvature_form, wedge
from .matrix import SeriesMatrix, commutator, diag, scalar_matrix
from .series import INF, TruncSeries, from_w, series_d_dz, series_inv, series_mul, to_w

__all__ = [
    "CycNum", "Rational", "cyc_arith", "parse_rational", "render_rational", "scalar", "simplify", "zeta",
    "EpsMatrix", "FormMatrix", "TwoForm", "curvature_form", "wedge",
    "SeriesMatrix", "commutator", "diag", "scalar_matrix",
    "INF", "TruncSeries", "from_w", "series_d_dz", "series_inv", "series_mul", "to_w",
]
