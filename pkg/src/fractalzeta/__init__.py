"""Numerical toolkit for fractal strings, the Riemann zeta function and the
quantized zeta operator acting on weighted function spaces."""

__version__ = "0.1.0"
