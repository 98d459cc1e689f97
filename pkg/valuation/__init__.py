"""K-segment property valuation with boundary smoothing and fairness measures."""

__version__ = "0.1.0"
