"""Worked example equations.

Each entry gives the coefficients of y'' = P + 3Q y' + 3R y'^2 + S y'^3 as
strings in x and y.
"""

from __future__ import annotations

from .contexts import OdeCoefficients

EXAMPLES = {
    "E1": dict(),
    "E2": dict(P="y^2"),
    "E3": dict(P="y^2", S="x^2"),
    "E4": dict(P="y^2", R="1"),
    # F = 0 with alpha, M and Omega all nonzero
    "E5": dict(P="x", Q="y^2", R="-1/(3*y)"),
    # already in special coordinates: A = 1, B = 0, Omega = 1
    "special": dict(P="y^2/2 - y^3 + x^2*y", Q="y"),
}


def example(name) -> OdeCoefficients:
    try:
        return OdeCoefficients.of(**EXAMPLES[name])
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(EXAMPLES)}") from None


__all__ = ["EXAMPLES", "example"]
