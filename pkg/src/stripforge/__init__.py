"""Numerics for developable elastic strips built on Frenet curve data.

Modules:

- ``curves``: intrinsic profiles, frame transport, differentiation, quadrature
- ``variational``: bending energy, equilibrium residuals, conserved fields
- ``integrable``: spherical elastica solver and explicit strip constructions
- ``surface``: ruled-strip meshing and curvature probes
- ``pfunctional``: reduced tangent-indicatrix functional
- ``cli``: command-line interface
"""

__version__ = "0.1.0"

from .backend import BACKEND

__all__ = ["BACKEND", "__version__"]
