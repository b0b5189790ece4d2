"""Geodesic tensor tomography on a single-chart Riemannian ball.

Numerical toolkit for the geodesic ray transform of symmetric m-tensors:
sphere-bundle calculus with exact (dual-number) derivatives, quadrature
verification of the Pestov-type energy identities, beta-conjugate-point
scans, and iterative reconstruction of solenoidal tensor parts from ray
data.
"""

__version__ = "0.1.0"

from .geometry import MetricChart, make_chart, builtin_charts  # noqa: F401
