"""Numerical kernels: partially observed networks, embedding, utilities, metrics."""
