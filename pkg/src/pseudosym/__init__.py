"""Exact curvature-action algebra for diagonal metrics."""
from .symkernel import DiffExpr, Field, KernelError, substitute_xi
from .exprparse import ParseError, parse
from .chart import Chart, Metric, builtin, load_metric
from .curvature import CurvatureBundle, DimensionError
from .operators import action, kulkarni_nomizu, tachibana
from .catalog import Catalog

__version__ = "0.1.0"

__all__ = [
    "DiffExpr", "Field", "KernelError", "substitute_xi", "ParseError", "parse",
    "Chart", "Metric", "builtin", "load_metric", "CurvatureBundle", "DimensionError",
    "action", "kulkarni_nomizu", "tachibana", "Catalog", "__version__",
]
