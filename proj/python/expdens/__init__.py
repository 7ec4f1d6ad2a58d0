"""Calculus of PDFs of non-negative random variables.

Densities are held as x**(alpha-1) * sum_m a_m * exp(-xi_m * x) with complex
coefficients and exponents; sums, products, quotients and powers of
independent variables stay in the same form.
"""

from ._core import (
    Density,
    FitReport,
    expectation,
    fit,
    from_json,
    load,
    power_pdf,
    product_pdf,
    product_pdf_trapezoid,
    quotient_pdf,
    reduce,
    save,
    sum_pdf,
)

__all__ = [
    "Density",
    "FitReport",
    "expectation",
    "fit",
    "from_json",
    "load",
    "power_pdf",
    "product_pdf",
    "product_pdf_trapezoid",
    "quotient_pdf",
    "reduce",
    "save",
    "sum_pdf",
]

__version__ = "0.1.0"
