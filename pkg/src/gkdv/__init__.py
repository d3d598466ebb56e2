"""Symmetry classification, similarity reduction and numerical solution of
generalized KdV equations u_t + u^n u_x + h(t) u + g(t) u_xxx = 0."""

__version__ = "0.1.0"
