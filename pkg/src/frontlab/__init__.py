"""Numerical laboratory for nonlocal monostable equations u_t = mu*u - u + f(u)."""

__version__ = "0.1.0"
